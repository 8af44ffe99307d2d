"""Gradient-descent training where the Ising machine supplies its own gradients.

The mean-squared-error loss over the dataset is minimized by full-batch
updates.  The partial derivative of the model output with respect to a
coupling is ``scale * z_i * z_j`` evaluated at the solved configuration, so a
single solver call per sample yields both the prediction and every gradient
component; no separate differentiation pass exists.

Cost model: a run performs ``epochs * N`` solver calls (plus ``epochs * M``
when a test set is evaluated), and each epoch's parameter update touches all
``O(n_total**2)`` couplings for every sample, i.e. ``O(n_total**2 * N)`` work
on top of whatever the machine itself costs per call.  Space is dominated by
the ``O(n_total**2)`` couplings and the per-epoch ``N x edges`` product
matrix.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .datasets import Dataset, classification_accuracy
from .model import ModelState, build_problem, predict, save_checkpoint
from .solvers import IsingMachine

DIVERGENCE_FACTOR = 1e6

METRICS_COLUMNS = ("epoch", "train_mse", "test_mse", "accuracy", "mean_step")


class TrainingDiverged(RuntimeError):
    """Loss blew past the divergence guard; try a smaller learning rate."""


class TrainingAborted(RuntimeError):
    """A solver failure ended the run; a resumable checkpoint may exist."""

    def __init__(self, epoch: int, checkpoint: Path | None, cause: Exception):
        message = f"solver failure in epoch {epoch}: {cause}"
        if checkpoint is not None:
            message += f"; resume from {checkpoint}"
        super().__init__(message)
        self.epoch = epoch
        self.checkpoint = checkpoint


@dataclass
class TrainConfig:
    """Hyperparameters and bookkeeping switches for one training run.

    ``update_scale`` and ``update_offset`` are off by default: the affine
    output parameters are normally fixed hyperparameters, though their update
    rules stay available.  With the ``per-call`` seed policy every solver call
    gets a seed derived from ``(base_seed, stream, epoch, sample)`` so
    annealing noise is reproducible yet decorrelated across calls; ``fixed``
    reuses ``base_seed`` everywhere.
    """

    learning_rate: float
    epochs: int
    update_scale: bool = False
    update_offset: bool = False
    seed_policy: str = "per-call"
    base_seed: int = 0
    checkpoint_every: int | None = None
    checkpoint_dir: Path | None = None

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")
        if self.seed_policy not in ("fixed", "per-call"):
            raise ValueError(f"unknown seed policy '{self.seed_policy}'")
        if self.checkpoint_every is not None and self.checkpoint_every < 1:
            raise ValueError("checkpoint_every must be at least 1")


@dataclass
class EpochRecord:
    epoch: int
    train_mse: float
    test_mse: float | None = None
    train_accuracy: float | None = None
    test_accuracy: float | None = None
    mean_step: float = 0.0


@dataclass
class TrainReport:
    """Per-epoch trajectory plus the state that defines the trained model."""

    records: list[EpochRecord]
    final_state: ModelState
    solver_calls: int
    base_seed: int
    seed_policy: str

    @property
    def initial_mse(self) -> float:
        return self.records[0].train_mse

    @property
    def final_mse(self) -> float:
        return self.records[-1].train_mse


_TRAIN_STREAM = 0
_TEST_STREAM = 1
_INIT_STREAM = 2
_EVAL_STREAM = 3


def derive_seed(base_seed: int, stream: int, epoch: int, index: int) -> int:
    """Stable per-call seed; decorrelated across (stream, epoch, sample)."""
    seq = np.random.SeedSequence(base_seed, spawn_key=(stream, epoch, index))
    return int(seq.generate_state(1)[0])


def _call_seed(config: TrainConfig, stream: int, epoch: int, index: int) -> int:
    if config.seed_policy == "fixed":
        return config.base_seed
    return derive_seed(config.base_seed, stream, epoch, index)


def _exact_mean(terms) -> float:
    # fsum keeps the sample reduction exactly rounded, so reordering or
    # duplicating the sample set cannot perturb an update step.
    return math.fsum(terms) / len(terms)


def mse_loss(predictions, targets) -> float:
    """Mean squared error between model outputs and targets."""
    predictions = np.asarray(predictions, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if predictions.shape != targets.shape or predictions.ndim != 1:
        raise ValueError(
            f"shape mismatch: predictions {predictions.shape}, targets {targets.shape}"
        )
    if predictions.shape[0] == 0:
        raise ValueError("no samples")
    diff = predictions - targets
    return _exact_mean(diff * diff)


def epsilon_init(
    dataset: Dataset,
    scale: float,
    state: ModelState,
    machine: IsingMachine,
    base_seed: int = 0,
) -> float:
    """First-round output offset: mean residual of the zero-offset model.

    One solver call per sample evaluates ``scale * E0`` with the state's
    current couplings; the returned value centers the model output on the
    targets.
    """
    if dataset.n_samples == 0:
        raise ValueError("empty dataset")
    terms = np.empty(dataset.n_samples, dtype=np.float64)
    for a in range(dataset.n_samples):
        result = machine.solve(
            build_problem(state, dataset.inputs[a]),
            seed=derive_seed(base_seed, _INIT_STREAM, 0, a),
        )
        terms[a] = dataset.targets[a] - scale * result.energy
    return _exact_mean(terms)


def epsilon_init_zero_couplings(dataset: Dataset, scale: float, state: ModelState) -> float:
    """Closed form of :func:`epsilon_init`, valid only for all-zero couplings,
    where the ground-state energy is exactly ``-sum(|bias|)``."""
    if dataset.n_samples == 0:
        raise ValueError("empty dataset")
    if np.any(state.couplings != 0.0):
        raise ValueError("closed form requires all couplings to be zero")
    from .model import preprocess as apply_preprocess

    terms = np.empty(dataset.n_samples, dtype=np.float64)
    for a in range(dataset.n_samples):
        biases = apply_preprocess(state.preprocess, dataset.inputs[a])
        terms[a] = dataset.targets[a] + scale * np.sum(np.abs(biases))
    return _exact_mean(terms)


def _batch_arrays(state: ModelState, batch_results):
    energies = np.array([r.energy for r, _ in batch_results], dtype=np.float64)
    targets = np.array([y for _, y in batch_results], dtype=np.float64)
    spins = np.stack([r.configuration.spins for r, _ in batch_results]).astype(np.float64)
    residuals = state.scale * energies + state.offset - targets
    return energies, residuals, spins


def gamma_step(state: ModelState, batch_results, learning_rate: float) -> np.ndarray:
    """One full-batch coupling update from the epoch's solver results.

    ``batch_results`` pairs each sample's SolveResult with its target.  Each
    coupling moves against the residual-weighted mean of the corresponding
    spin products; bounds, when configured, clamp the result.
    """
    _, residuals, spins = _batch_arrays(state, batch_results)
    ei, ej = state.topology.edge_index
    products = spins[:, ei] * spins[:, ej]
    terms = residuals[:, None] * products
    columns = np.ascontiguousarray(terms.T)
    means = np.array([math.fsum(col) for col in columns]) / len(batch_results)
    step = (2.0 * learning_rate * state.scale) * means
    updated = state.couplings - step
    if state.coupling_bounds is not None:
        updated = state.coupling_bounds.clamp(updated)
    return updated


def lambda_epsilon_step(
    state: ModelState, batch_results, learning_rate: float, config: TrainConfig
) -> tuple[float, float]:
    """Updated (scale, offset) pair; either component only moves when its
    config flag is on.  The scale gradient weighs each residual by the solved
    configuration's energy, the offset gradient by 1."""
    scale, offset = state.scale, state.offset
    if not (config.update_scale or config.update_offset):
        return scale, offset
    energies, residuals, _ = _batch_arrays(state, batch_results)
    if config.update_scale:
        scale = scale - 2.0 * learning_rate * _exact_mean(residuals * energies)
    if config.update_offset:
        offset = offset - 2.0 * learning_rate * _exact_mean(residuals)
    return scale, offset


def finite_difference_gradient(
    state: ModelState,
    theta,
    edge: tuple[int, int],
    h: float,
    machine: IsingMachine,
    seed: int = 0,
) -> float:
    """Central difference of the model output along one coupling.

    A test oracle for the analytic derivative ``scale * z_i * z_j``; the two
    agree wherever the solved configuration is the same at both shifted
    couplings, and may disagree across a spin-flip boundary.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    i, j = edge if edge[0] < edge[1] else (edge[1], edge[0])
    try:
        index = state.topology.edges.index((i, j))
    except ValueError:
        raise ValueError(f"({i}, {j}) is not an edge of the model topology") from None
    plus = state.couplings.copy()
    plus[index] += h
    minus = state.couplings.copy()
    minus[index] -= h
    f_plus = predict(state.with_couplings(plus), theta, machine, seed=seed).value
    f_minus = predict(state.with_couplings(minus), theta, machine, seed=seed).value
    return (f_plus - f_minus) / (2.0 * h)


class _MetricsWriter:
    def __init__(self, path):
        self.path = Path(path)
        self._fh = open(self.path, "w", newline="")
        self._writer = csv.writer(self._fh)
        self._writer.writerow(METRICS_COLUMNS)

    def write(self, record: EpochRecord) -> None:
        def fmt(value):
            return "" if value is None else repr(float(value))

        self._writer.writerow(
            [
                record.epoch,
                fmt(record.train_mse),
                fmt(record.test_mse),
                fmt(record.train_accuracy),
                fmt(record.mean_step),
            ]
        )
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()


def _evaluate(state, dataset, machine, config, stream, epoch):
    values = np.empty(dataset.n_samples, dtype=np.float64)
    results = []
    for a in range(dataset.n_samples):
        result = machine.solve(
            build_problem(state, dataset.inputs[a]),
            seed=_call_seed(config, stream, epoch, a),
        )
        results.append(result)
        values[a] = state.scale * result.energy + state.offset
    return values, results


def train(
    dataset: Dataset,
    state: ModelState,
    config: TrainConfig,
    machine: IsingMachine,
    test_set: Dataset | None = None,
    metrics_path=None,
    epoch_hook=None,
) -> TrainReport:
    """Full-batch training loop.

    Every epoch solves all training samples with the current couplings,
    records the loss, then applies the coupling update followed by the
    scale/offset update, all computed from the same pre-update solver
    results.  The state after the final epoch defines the trained model.

    ``test_set``, when given, is evaluated with the same machine each epoch.
    ``metrics_path`` streams per-epoch rows to a CSV file.  ``epoch_hook``
    is called as ``hook(record, train_values, test_values)`` after each
    epoch's metrics are known.
    """
    if dataset.n_samples == 0:
        raise ValueError("empty dataset")
    if dataset.input_dim != state.input_dim:
        raise ValueError(
            f"dataset has {dataset.input_dim} features but the model expects "
            f"{state.input_dim}"
        )
    if test_set is not None and test_set.input_dim != state.input_dim:
        raise ValueError("test set feature width differs from the model input")

    state = state.with_couplings(state.couplings.copy())
    records: list[EpochRecord] = []
    solver_calls = 0
    writer = _MetricsWriter(metrics_path) if metrics_path is not None else None
    initial_mse = None
    try:
        for epoch in range(config.epochs):
            try:
                values, results = _evaluate(
                    state, dataset, machine, config, _TRAIN_STREAM, epoch
                )
                solver_calls += dataset.n_samples
                test_values = None
                if test_set is not None:
                    test_values, _ = _evaluate(
                        state, test_set, machine, config, _TEST_STREAM, epoch
                    )
                    solver_calls += test_set.n_samples
            except Exception as exc:  # solver failure: leave a resumable trail
                checkpoint = None
                if config.checkpoint_dir is not None:
                    checkpoint = Path(config.checkpoint_dir) / "aborted.json"
                    save_checkpoint(state, checkpoint)
                raise TrainingAborted(epoch, checkpoint, exc) from exc

            train_mse = mse_loss(values, dataset.targets)
            if initial_mse is None:
                initial_mse = train_mse
            elif train_mse > DIVERGENCE_FACTOR * max(initial_mse, 1e-300):
                raise TrainingDiverged(
                    f"epoch {epoch} loss {train_mse:.3e} exceeds "
                    f"{DIVERGENCE_FACTOR:.0e} x initial {initial_mse:.3e}; "
                    "try a smaller learning rate"
                )
            record = EpochRecord(epoch=epoch, train_mse=train_mse)
            if test_set is not None:
                record.test_mse = mse_loss(test_values, test_set.targets)
                if test_set.labels is not None:
                    record.test_accuracy = classification_accuracy(
                        test_values, test_set.labels
                    )
            if dataset.labels is not None:
                record.train_accuracy = classification_accuracy(values, dataset.labels)

            batch = list(zip(results, dataset.targets))
            updated_couplings = gamma_step(state, batch, config.learning_rate)
            record.mean_step = float(np.mean(np.abs(updated_couplings - state.couplings)))
            new_scale, new_offset = lambda_epsilon_step(
                state, batch, config.learning_rate, config
            )
            state = ModelState(
                topology=state.topology,
                couplings=updated_couplings,
                scale=new_scale,
                offset=new_offset,
                preprocess=state.preprocess,
                input_dim=state.input_dim,
                coupling_bounds=state.coupling_bounds,
            )

            records.append(record)
            if writer is not None:
                writer.write(record)
            if epoch_hook is not None:
                epoch_hook(record, values, test_values)
            if (
                config.checkpoint_every is not None
                and config.checkpoint_dir is not None
                and (epoch + 1) % config.checkpoint_every == 0
            ):
                save_checkpoint(
                    state, Path(config.checkpoint_dir) / f"epoch_{epoch + 1:05d}.json"
                )
    finally:
        if writer is not None:
            writer.close()

    return TrainReport(
        records=records,
        final_state=state,
        solver_calls=solver_calls,
        base_seed=config.base_seed,
        seed_policy=config.seed_policy,
    )


def evaluate_model(state: ModelState, dataset: Dataset, machine: IsingMachine, base_seed: int = 0):
    """Model outputs over a dataset with derived evaluation seeds."""
    values = np.empty(dataset.n_samples, dtype=np.float64)
    for a in range(dataset.n_samples):
        values[a] = (
            state.scale
            * machine.solve(
                build_problem(state, dataset.inputs[a]),
                seed=derive_seed(base_seed, _EVAL_STREAM, 0, a),
            ).energy
            + state.offset
        )
    return values
