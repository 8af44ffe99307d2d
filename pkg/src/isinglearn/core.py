"""Core Ising-model types: interaction graphs, problems, spin configurations, energy."""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

Edge = tuple[int, int]


class DimensionMismatch(ValueError):
    """A vector's length disagrees with the spin count it must match."""

    def __init__(self, expected: int, got: int, what: str = "vector"):
        super().__init__(f"{what} has length {got}, expected {expected}")
        self.expected = expected
        self.got = got


@dataclass(frozen=True)
class Bounds:
    """Closed interval; values are clamped into it at construction time."""

    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")

    def clamp(self, values: np.ndarray) -> np.ndarray:
        return np.clip(values, self.lower, self.upper)


@dataclass(frozen=True)
class Topology:
    """Undirected interaction graph over ``n`` spins.

    Edges are unordered index pairs, stored in a canonical sorted order with
    ``i < j``, so two topologies built from permuted edge lists compare equal
    and produce bit-identical energies.
    """

    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"spin count must be positive, got {self.n}")
        canonical = []
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop on spin {i}")
            a, b = (i, j) if i < j else (j, i)
            if a < 0 or b >= self.n:
                raise ValueError(f"edge ({i}, {j}) outside spin range [0, {self.n})")
            if (a, b) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((a, b))
            canonical.append((a, b))
        canonical.sort()
        object.__setattr__(self, "edges", tuple(canonical))
        object.__setattr__(
            self, "_ei", np.array([e[0] for e in canonical], dtype=np.intp)
        )
        object.__setattr__(
            self, "_ej", np.array([e[1] for e in canonical], dtype=np.intp)
        )

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def edge_index(self) -> tuple[np.ndarray, np.ndarray]:
        """Endpoint index arrays aligned with ``edges``."""
        return self._ei, self._ej


def complete_topology(n: int) -> Topology:
    """All-to-all graph: every unordered pair of distinct spins is an edge."""
    if n < 1:
        raise ValueError(f"spin count must be positive, got {n}")
    return Topology(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def _as_coupling_array(topology: Topology, couplings) -> np.ndarray:
    if isinstance(couplings, Mapping):
        values = np.empty(topology.n_edges, dtype=np.float64)
        remaining = dict(couplings)
        for k, (i, j) in enumerate(topology.edges):
            if (i, j) in remaining:
                values[k] = remaining.pop((i, j))
            elif (j, i) in remaining:
                values[k] = remaining.pop((j, i))
            else:
                raise ValueError(f"no coupling given for edge ({i}, {j})")
        if remaining:
            raise ValueError(f"couplings given for non-edges: {sorted(remaining)}")
        return values
    values = np.asarray(couplings, dtype=np.float64)
    if values.shape != (topology.n_edges,):
        raise ValueError(
            f"expected {topology.n_edges} coupling values aligned with the edge "
            f"list, got shape {values.shape}"
        )
    return values


@dataclass(frozen=True, eq=False)
class IsingProblem:
    """Bias per spin plus a coupling per edge; the input of an Ising machine.

    ``couplings`` may be a mapping ``{(i, j): value}`` covering exactly the
    topology's edges, or a sequence aligned with ``topology.edges``.  Values
    for pairs that are not edges are implicitly zero.  Optional bounds clamp
    the stored values once, at construction.
    """

    topology: Topology
    biases: np.ndarray
    couplings: np.ndarray = ()
    bias_bounds: InitVar[Bounds | None] = None
    coupling_bounds: InitVar[Bounds | None] = None

    def __post_init__(self, bias_bounds, coupling_bounds):
        biases = np.asarray(self.biases, dtype=np.float64)
        if biases.ndim != 1 or biases.shape[0] != self.topology.n:
            raise DimensionMismatch(self.topology.n, biases.size, "bias vector")
        couplings = _as_coupling_array(self.topology, self.couplings)
        if bias_bounds is not None:
            biases = bias_bounds.clamp(biases)
        if coupling_bounds is not None:
            couplings = coupling_bounds.clamp(couplings)
        if not np.all(np.isfinite(biases)):
            raise ValueError("biases must be finite")
        if not np.all(np.isfinite(couplings)):
            raise ValueError("couplings must be finite")
        biases.setflags(write=False)
        couplings.setflags(write=False)
        object.__setattr__(self, "biases", biases)
        object.__setattr__(self, "couplings", couplings)

    @property
    def n(self) -> int:
        return self.topology.n

    def coupling_map(self) -> dict[Edge, float]:
        return {e: float(w) for e, w in zip(self.topology.edges, self.couplings)}

    def dense_couplings(self) -> np.ndarray:
        """Symmetric n-by-n coupling matrix with zero diagonal."""
        ei, ej = self.topology.edge_index
        dense = np.zeros((self.n, self.n), dtype=np.float64)
        dense[ei, ej] = self.couplings
        dense[ej, ei] = self.couplings
        return dense


@dataclass(frozen=True, eq=False)
class SpinConfiguration:
    """Assignment of +1 or -1 to every spin."""

    spins: np.ndarray

    def __post_init__(self):
        spins = np.asarray(self.spins)
        if spins.ndim != 1:
            raise ValueError("spins must be a flat vector")
        if not np.all(np.abs(spins) == 1):
            raise ValueError("spins must all be +1 or -1")
        spins = spins.astype(np.int8)
        spins.setflags(write=False)
        object.__setattr__(self, "spins", spins)

    def __len__(self) -> int:
        return self.spins.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpinConfiguration):
            return NotImplemented
        return np.array_equal(self.spins, other.spins)


SpinsLike = Union[SpinConfiguration, Sequence[int], np.ndarray]


@dataclass(frozen=True, eq=False)
class SolveResult:
    """What an Ising machine returns: a configuration and its energy.

    ``energy`` is always recomputed from the configuration by the backend, so
    ``energy == energy(problem, configuration)`` holds exactly.
    """

    configuration: SpinConfiguration
    energy: float
    backend: str = ""
    seed: int | None = None
    wall_time: float = 0.0


def energy(problem: IsingProblem, configuration: SpinsLike) -> float:
    """Total energy of a spin configuration: bias terms plus one term per edge.

    Uses elementwise products followed by ``np.sum`` so that the exact sign
    symmetries of the energy (global spin flip with negated biases, and the
    zero-coupling closed form) hold bit-for-bit.
    """
    if isinstance(configuration, SpinConfiguration):
        z = configuration.spins
    else:
        z = np.asarray(configuration)
    if z.ndim != 1 or z.shape[0] != problem.topology.n:
        raise DimensionMismatch(problem.topology.n, z.size, "spin configuration")
    if not np.all(np.abs(z) == 1):
        raise ValueError("spins must all be +1 or -1")
    zf = z.astype(np.float64)
    ei, ej = problem.topology.edge_index
    return float(np.sum(problem.biases * zf) + np.sum(problem.couplings * (zf[ei] * zf[ej])))


def zero_coupling_ground_state(biases: Iterable[float]) -> SpinConfiguration:
    """Minimizer when all couplings vanish: each spin opposes its bias.

    Zero-bias spins are set to +1 (a deterministic tie).  The resulting
    energy is exactly ``-sum(|bias|)``.
    """
    b = np.asarray(biases, dtype=np.float64)
    return SpinConfiguration(np.where(b > 0, -1, 1).astype(np.int8))


def problem_to_text(problem: IsingProblem) -> str:
    """Flat text record of a problem: spin count, bias list, edge triples."""
    lines = [f"n {problem.n}"]
    lines.append("bias " + " ".join(repr(float(v)) for v in problem.biases))
    for (i, j), w in zip(problem.topology.edges, problem.couplings):
        lines.append(f"edge {i} {j} {float(w)!r}")
    return "\n".join(lines) + "\n"


def problem_from_text(text: str) -> IsingProblem:
    """Parse a record written by :func:`problem_to_text`."""
    n = None
    biases = None
    edges = []
    weights = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        tag = parts[0]
        try:
            if tag == "n":
                n = int(parts[1])
            elif tag == "bias":
                biases = [float(v) for v in parts[1:]]
            elif tag == "edge":
                edges.append((int(parts[1]), int(parts[2])))
                weights.append(float(parts[3]))
            else:
                raise ValueError(f"unknown field '{tag}'")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"bad problem record at line {line_no}: {exc}") from None
    if n is None or biases is None:
        raise ValueError("problem record needs both an 'n' and a 'bias' line")
    return IsingProblem(Topology(n, tuple(edges)), biases, weights)
