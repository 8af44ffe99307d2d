"""Ising-machine backends: exhaustive enumeration and simulated annealing.

Both backends satisfy the same contract: ``solve(problem, seed)`` returns a
:class:`~isinglearn.core.SolveResult` whose energy is recomputed from the
returned configuration, and the same ``(problem, seed)`` pair always yields
the same result.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np
from numba import njit

from .core import (
    DimensionMismatch,
    IsingProblem,
    SolveResult,
    SpinConfiguration,
    energy,
)

EXACT_MAX_SPINS = 24
_ENUM_CHUNK = 1 << 14


class CapacityLimit(ValueError):
    """The exact backend cannot enumerate a problem this large."""


class UnknownBackend(ValueError):
    """Requested backend name is not registered."""


@runtime_checkable
class IsingMachine(Protocol):
    """Anything that maps an Ising problem to a low-energy configuration."""

    name: str

    def solve(self, problem: IsingProblem, seed: int = 0) -> SolveResult: ...


def exact_solve(problem: IsingProblem) -> SolveResult:
    """Global minimizer by enumeration of all 2**n configurations.

    Among degenerate ground states the lexicographically smallest
    configuration is returned, ordering -1 before +1, so callers see a
    deterministic representative.
    """
    n = problem.topology.n
    if n > EXACT_MAX_SPINS:
        raise CapacityLimit(
            f"exact enumeration is limited to {EXACT_MAX_SPINS} spins, got {n}; "
            "use the simulated-annealing backend instead"
        )
    start = time.perf_counter()
    ei, ej = problem.topology.edge_index
    biases = problem.biases
    weights = problem.couplings
    # Bit (n-1-i) of the enumeration index carries spin i, so ascending index
    # order is ascending lexicographic order with -1 < +1.
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    total = 1 << n
    best_energy = math.inf
    best_index = 0
    for lo in range(0, total, _ENUM_CHUNK):
        idx = np.arange(lo, min(lo + _ENUM_CHUNK, total), dtype=np.int64)
        z = (((idx[:, None] >> shifts) & 1) * 2 - 1).astype(np.float64)
        energies = z @ biases
        if len(weights):
            energies += (z[:, ei] * z[:, ej]) @ weights
        k = int(np.argmin(energies))
        if energies[k] < best_energy:
            best_energy = float(energies[k])
            best_index = lo + k
    spins = (((best_index >> shifts) & 1) * 2 - 1).astype(np.int8)
    configuration = SpinConfiguration(spins)
    return SolveResult(
        configuration=configuration,
        energy=energy(problem, configuration),
        backend="exact",
        seed=None,
        wall_time=time.perf_counter() - start,
    )


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric cooling from ``t_initial`` down to ``t_final`` over ``sweeps``."""

    t_initial: float
    t_final: float
    sweeps: int = 1000

    def __post_init__(self):
        if not (self.t_initial > 0 and self.t_final > 0):
            raise ValueError("temperatures must be strictly positive")
        if not self.t_final < self.t_initial:
            raise ValueError("t_final must be below t_initial")
        if self.sweeps < 1:
            raise ValueError("sweeps must be at least 1")

    @property
    def cooling(self) -> float:
        """Per-sweep temperature ratio; the last sweep runs at ``t_final``."""
        if self.sweeps == 1:
            return 1.0
        return (self.t_final / self.t_initial) ** (1.0 / (self.sweeps - 1))

    @classmethod
    def for_problem(cls, problem: IsingProblem, sweeps: int = 1000) -> "AnnealSchedule":
        """Default schedule: start well above the largest coefficient.

        ``t_initial = 10 * max(|bias|, |coupling|, 1)`` and ``t_final`` three
        decades lower, which passes the exact-solver equivalence check for
        problems up to a dozen spins.
        """
        scale = 1.0
        if problem.biases.size:
            scale = max(scale, float(np.max(np.abs(problem.biases))))
        if problem.couplings.size:
            scale = max(scale, float(np.max(np.abs(problem.couplings))))
        t_initial = 10.0 * scale
        return cls(t_initial=t_initial, t_final=1e-3 * t_initial, sweeps=sweeps)


@njit(cache=True)
def _metropolis_sweeps(dense, biases, t_initial, cooling, sweeps, seed, start, use_start):
    """Single-spin-flip Metropolis with geometric cooling.

    Spins are proposed in fixed index order within each sweep; the seeded RNG
    is consumed only by the initial configuration and the acceptance tests.
    Returns the best configuration visited, not the final one.
    """
    n = biases.shape[0]
    np.random.seed(seed)
    z = np.empty(n, dtype=np.float64)
    if use_start:
        for i in range(n):
            z[i] = start[i]
    else:
        for i in range(n):
            z[i] = 1.0 if np.random.random() < 0.5 else -1.0

    local = biases + np.dot(dense, z)
    current = 0.0
    for i in range(n):
        current += biases[i] * z[i]
        for j in range(i + 1, n):
            current += dense[i, j] * z[i] * z[j]
    best = current
    best_z = z.copy()

    t = t_initial
    for _ in range(sweeps):
        for i in range(n):
            delta = -2.0 * z[i] * local[i]
            if delta <= 0.0 or np.random.random() < math.exp(-delta / t):
                z[i] = -z[i]
                shift = 2.0 * z[i]
                for j in range(n):
                    local[j] += shift * dense[j, i]
                current += delta
                if current < best:
                    best = current
                    best_z[:] = z
        t *= cooling

    out = np.empty(n, dtype=np.int8)
    for i in range(n):
        out[i] = np.int8(best_z[i])
    return out


def sa_solve(
    problem: IsingProblem,
    schedule: AnnealSchedule | None = None,
    seed: int = 0,
    initial: SpinConfiguration | None = None,
) -> SolveResult:
    """Simulated annealing; deterministic for a fixed seed.

    ``initial`` pins the starting configuration (useful for studying the
    greedy low-temperature limit); by default the start is drawn from the
    seeded RNG.
    """
    if schedule is None:
        schedule = AnnealSchedule.for_problem(problem)
    start_time = time.perf_counter()
    n = problem.topology.n
    if initial is not None:
        if len(initial) != n:
            raise DimensionMismatch(n, len(initial), "initial configuration")
        start = initial.spins.astype(np.float64)
        use_start = True
    else:
        start = np.zeros(n, dtype=np.float64)
        use_start = False
    spins = _metropolis_sweeps(
        problem.dense_couplings(),
        problem.biases,
        schedule.t_initial,
        schedule.cooling,
        schedule.sweeps,
        seed % (1 << 32),
        start,
        use_start,
    )
    configuration = SpinConfiguration(spins)
    return SolveResult(
        configuration=configuration,
        energy=energy(problem, configuration),
        backend="simulated-annealing",
        seed=seed,
        wall_time=time.perf_counter() - start_time,
    )


class ExactSolver:
    """Backend wrapper around :func:`exact_solve`; the seed is recorded only."""

    name = "exact"

    def solve(self, problem: IsingProblem, seed: int = 0) -> SolveResult:
        result = exact_solve(problem)
        return SolveResult(
            configuration=result.configuration,
            energy=result.energy,
            backend=self.name,
            seed=seed,
            wall_time=result.wall_time,
        )


class SimulatedAnnealer:
    """Configurable simulated-annealing backend.

    When temperatures are not given they are derived per problem via
    :meth:`AnnealSchedule.for_problem`.  ``reads`` repeats the anneal with
    offset seeds and keeps the best-energy result (ties go to the earliest
    read); the default of a single read makes each call stand alone.
    """

    name = "simulated-annealing"

    def __init__(self, sweeps=1000, t_initial=None, t_final=None, reads=1):
        if reads < 1:
            raise ValueError("reads must be at least 1")
        self.sweeps = int(sweeps)
        self.t_initial = t_initial
        self.t_final = t_final
        self.reads = int(reads)

    def _schedule(self, problem: IsingProblem) -> AnnealSchedule:
        if self.t_initial is None and self.t_final is None:
            return AnnealSchedule.for_problem(problem, sweeps=self.sweeps)
        t_initial = self.t_initial
        if t_initial is None:
            t_initial = AnnealSchedule.for_problem(problem).t_initial
        t_final = self.t_final if self.t_final is not None else 1e-3 * t_initial
        return AnnealSchedule(t_initial=t_initial, t_final=t_final, sweeps=self.sweeps)

    def solve(self, problem: IsingProblem, seed: int = 0) -> SolveResult:
        schedule = self._schedule(problem)
        best = None
        start = time.perf_counter()
        for read in range(self.reads):
            result = sa_solve(problem, schedule, seed=seed + read)
            if best is None or result.energy < best.energy:
                best = result
        return SolveResult(
            configuration=best.configuration,
            energy=best.energy,
            backend=self.name,
            seed=seed,
            wall_time=time.perf_counter() - start,
        )


_BACKENDS = {
    "exact": (ExactSolver, frozenset()),
    "simulated-annealing": (
        SimulatedAnnealer,
        frozenset({"sweeps", "t_initial", "t_final", "reads"}),
    ),
}


def make_backend(name: str, params: dict | None = None) -> IsingMachine:
    """Build a backend by name; unknown names and parameter keys are rejected."""
    if name not in _BACKENDS:
        registered = ", ".join(sorted(_BACKENDS))
        raise UnknownBackend(f"unknown backend '{name}'; registered backends: {registered}")
    cls, allowed = _BACKENDS[name]
    params = dict(params or {})
    unknown = sorted(set(params) - allowed)
    if unknown:
        raise ValueError(
            f"unknown parameter(s) for backend '{name}': {', '.join(unknown)}"
        )
    return cls(**params)
