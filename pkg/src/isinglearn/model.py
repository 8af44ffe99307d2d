"""The parametric predictor: scaled-and-offset ground-state energy of an Ising model.

An input vector becomes the bias vector of an Ising problem (optionally
replicated into extra spins), the trainable couplings define the interaction
terms, and the model output is ``scale * E0 + offset`` where ``E0`` is the
ground-state energy reported by whichever Ising machine is plugged in.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .core import (
    Bounds,
    DimensionMismatch,
    IsingProblem,
    SolveResult,
    Topology,
    complete_topology,
)
from .solvers import IsingMachine

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "isinglearn-checkpoint-v1"


@dataclass(frozen=True, eq=False)
class PreprocessSpec:
    """How an input vector is mapped onto the spin biases.

    ``identity`` passes the vector through unchanged.  ``offset`` concatenates
    ``copies`` shifted replicas ``theta + m * step`` for ``m = 0 .. copies-1``,
    populating extra "hidden" spins and thereby extra trainable couplings.
    """

    kind: str
    step: np.ndarray | None = None
    copies: int = 1

    def __post_init__(self):
        if self.kind not in ("identity", "offset"):
            raise ValueError(f"unknown preprocess kind '{self.kind}'")
        if self.kind == "identity":
            if self.step is not None or self.copies != 1:
                raise ValueError("identity preprocessing takes no step or copies")
        else:
            if self.copies < 1:
                raise ValueError("copies must be at least 1")
            step = np.asarray(self.step, dtype=np.float64)
            if step.ndim != 1 or step.size == 0:
                raise ValueError("step must be a non-empty vector")
            step.setflags(write=False)
            object.__setattr__(self, "step", step)

    @classmethod
    def identity(cls) -> "PreprocessSpec":
        return cls(kind="identity")

    @classmethod
    def offset(cls, step, copies: int) -> "PreprocessSpec":
        return cls(kind="offset", step=step, copies=copies)

    def total_dim(self, input_dim: int) -> int:
        if self.kind == "identity":
            return input_dim
        if self.step.shape[0] != input_dim:
            raise DimensionMismatch(input_dim, self.step.shape[0], "offset step")
        return self.copies * input_dim


def preprocess(spec: PreprocessSpec, theta) -> np.ndarray:
    """Map an input vector to the bias vector of the underlying Ising problem."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim != 1:
        raise ValueError("input must be a flat vector")
    if spec.kind == "identity":
        return theta
    if theta.shape[0] != spec.step.shape[0]:
        raise DimensionMismatch(spec.step.shape[0], theta.shape[0], "input vector")
    blocks = [theta + m * spec.step for m in range(spec.copies)]
    return np.concatenate(blocks)


@dataclass(eq=False)
class ModelState:
    """Everything needed to evaluate the predictor.

    ``couplings`` is aligned with ``topology.edges`` and holds the trainable
    parameters; ``scale`` and ``offset`` are the affine output parameters and
    never influence the Ising energy itself.
    """

    topology: Topology
    couplings: np.ndarray
    scale: float
    offset: float
    preprocess: PreprocessSpec = field(default_factory=PreprocessSpec.identity)
    input_dim: int = 0
    coupling_bounds: Bounds | None = None

    def __post_init__(self):
        if self.input_dim < 1:
            raise ValueError("input_dim must be positive")
        expected = self.preprocess.total_dim(self.input_dim)
        if self.topology.n != expected:
            raise ValueError(
                f"topology has {self.topology.n} spins but preprocessing "
                f"produces {expected}"
            )
        couplings = np.asarray(self.couplings, dtype=np.float64)
        if couplings.shape != (self.topology.n_edges,):
            raise ValueError(
                f"expected {self.topology.n_edges} couplings, got shape "
                f"{couplings.shape}"
            )
        if self.coupling_bounds is not None:
            couplings = self.coupling_bounds.clamp(couplings)
        self.couplings = couplings
        if not (np.isfinite(self.scale) and np.isfinite(self.offset)):
            raise ValueError("scale and offset must be finite")
        if self.scale == 0.0:
            log.warning("scale is 0: the model output is the constant offset")

    @classmethod
    def fresh(
        cls,
        input_dim: int,
        preprocess: PreprocessSpec | None = None,
        scale: float = 1.0,
        offset: float = 0.0,
        coupling_bounds: Bounds | None = None,
    ) -> "ModelState":
        """Zero-coupling state on a complete topology; the standard start."""
        spec = preprocess if preprocess is not None else PreprocessSpec.identity()
        topo = complete_topology(spec.total_dim(input_dim))
        return cls(
            topology=topo,
            couplings=np.zeros(topo.n_edges),
            scale=scale,
            offset=offset,
            preprocess=spec,
            input_dim=input_dim,
            coupling_bounds=coupling_bounds,
        )

    def with_couplings(self, couplings: np.ndarray) -> "ModelState":
        return replace(self, couplings=couplings)


@dataclass(frozen=True, eq=False)
class Prediction:
    """Model output together with the solver result it was computed from."""

    value: float
    solve: SolveResult


def build_problem(state: ModelState, theta) -> IsingProblem:
    """Ising problem for one input: preprocessed biases, current couplings."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim != 1 or theta.shape[0] != state.input_dim:
        raise DimensionMismatch(state.input_dim, theta.size, "input vector")
    return IsingProblem(
        topology=state.topology,
        biases=preprocess(state.preprocess, theta),
        couplings=state.couplings,
    )


def predict(state: ModelState, theta, machine: IsingMachine, seed: int = 0) -> Prediction:
    """Evaluate the model on one input via the given Ising machine."""
    result = machine.solve(build_problem(state, theta), seed=seed)
    return Prediction(value=state.scale * result.energy + state.offset, solve=result)


def save_checkpoint(state: ModelState, path, backend: dict | None = None) -> None:
    """Write the model to a JSON document; floats round-trip bit-exactly.

    ``backend`` optionally records the solver name and parameters used at
    training time so a later prediction run can reconstruct the machine.
    """
    spec = state.preprocess
    doc = {
        "format": CHECKPOINT_FORMAT,
        "input_dim": state.input_dim,
        "preprocess": {
            "kind": spec.kind,
            "step": None if spec.step is None else [float(v) for v in spec.step],
            "copies": spec.copies,
        },
        "n_spins": state.topology.n,
        "edges": [
            [int(i), int(j), float(w)]
            for (i, j), w in zip(state.topology.edges, state.couplings)
        ],
        "scale": float(state.scale),
        "offset": float(state.offset),
        "coupling_bounds": (
            None
            if state.coupling_bounds is None
            else [state.coupling_bounds.lower, state.coupling_bounds.upper]
        ),
        "backend": backend,
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_checkpoint(path) -> tuple[ModelState, dict | None]:
    """Read a checkpoint written by :func:`save_checkpoint`."""
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"not a model checkpoint: {path}")
    pre = doc["preprocess"]
    if pre["kind"] == "identity":
        spec = PreprocessSpec.identity()
    else:
        spec = PreprocessSpec.offset(np.array(pre["step"], dtype=np.float64), pre["copies"])
    edges = tuple((int(i), int(j)) for i, j, _ in doc["edges"])
    topology = Topology(int(doc["n_spins"]), edges)
    weights = {(int(i), int(j)): float(w) for i, j, w in doc["edges"]}
    couplings = np.array([weights[e] for e in topology.edges], dtype=np.float64)
    bounds = doc.get("coupling_bounds")
    state = ModelState(
        topology=topology,
        couplings=couplings,
        scale=float(doc["scale"]),
        offset=float(doc["offset"]),
        preprocess=spec,
        input_dim=int(doc["input_dim"]),
        coupling_bounds=None if bounds is None else Bounds(*bounds),
    )
    return state, doc.get("backend")
