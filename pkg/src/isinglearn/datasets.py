"""Dataset generators and codecs: uniform random data, polynomial samples,
and the bars-and-stripes matrices used for binary classification."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DatasetFormatError(ValueError):
    """A dataset file cannot be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


@dataclass(eq=False)
class Dataset:
    """Ordered input/target pairs with a fixed input width.

    ``labels`` optionally records class names per sample for classification
    tasks; the numeric targets remain the regression view of those labels.
    """

    inputs: np.ndarray
    targets: np.ndarray
    labels: list[str] | None = None

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=np.float64)
        targets = np.asarray(self.targets, dtype=np.float64)
        if inputs.ndim != 2:
            raise ValueError("inputs must be a 2-D array of shape (samples, features)")
        if targets.ndim != 1 or targets.shape[0] != inputs.shape[0]:
            raise ValueError(
                f"{inputs.shape[0]} input rows but {targets.shape[0]} targets"
            )
        if self.labels is not None and len(self.labels) != inputs.shape[0]:
            raise ValueError("labels must match the number of samples")
        self.inputs = inputs
        self.targets = targets

    @property
    def n_samples(self) -> int:
        return self.inputs.shape[0]

    @property
    def input_dim(self) -> int:
        return self.inputs.shape[1]

    def __len__(self) -> int:
        return self.n_samples


def gen_random(n, n_samples, value_range=(-1.0, 1.0), seed=0) -> Dataset:
    """Inputs and targets drawn i.i.d. uniform over ``value_range``."""
    lo, hi = value_range
    if not lo < hi:
        raise ValueError(f"invalid range [{lo}, {hi}]")
    rng = np.random.default_rng(seed)
    inputs = rng.uniform(lo, hi, size=(n_samples, n))
    targets = rng.uniform(lo, hi, size=n_samples)
    return Dataset(inputs=inputs, targets=targets)


TARGET_FUNCTIONS = {
    "lin": lambda x: 2.0 * x - 6.0,
    "quad": lambda x: 1.2 * (x - 0.5) ** 2 - 2.0,
}


def gen_function(name, n_samples, domain=(0.0, 1.0), sampling="grid", seed=0) -> Dataset:
    """Scalar samples of a named target function.

    By default the inputs form a uniform grid over the domain, so the same
    ``(name, n_samples)`` always yields the same dataset; pass
    ``sampling="random"`` for seeded uniform draws instead.
    """
    if name not in TARGET_FUNCTIONS:
        raise ValueError(f"unknown function '{name}'; choose from {sorted(TARGET_FUNCTIONS)}")
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    lo, hi = domain
    if sampling == "grid":
        x = np.linspace(lo, hi, n_samples)
    elif sampling == "random":
        x = np.sort(np.random.default_rng(seed).uniform(lo, hi, size=n_samples))
    else:
        raise ValueError(f"unknown sampling mode '{sampling}'")
    return Dataset(inputs=x[:, None], targets=TARGET_FUNCTIONS[name](x))


BAS_LABELS = ("bars", "stripes")
_BAS_BARS_VALUE = 0.0
_BAS_STRIPES_VALUE = 10.0
_BAS_THRESHOLD = 5.0


def bas_encode(label: str) -> float:
    """Class label to regression target: bars -> 0, stripes -> 10."""
    if label == "bars":
        return _BAS_BARS_VALUE
    if label == "stripes":
        return _BAS_STRIPES_VALUE
    raise ValueError(f"unknown label '{label}'; expected one of {BAS_LABELS}")


def bas_decode(value: float) -> str:
    """Model output to class label; the midpoint 5 itself decodes to bars."""
    return "bars" if value <= _BAS_THRESHOLD else "stripes"


def classification_accuracy(values, labels) -> float:
    """Fraction of outputs whose decoded label matches the true label."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape[0] != len(labels):
        raise ValueError(f"{values.shape[0]} outputs but {len(labels)} labels")
    hits = sum(1 for v, l in zip(values, labels) if bas_decode(float(v)) == l)
    return hits / len(labels)


def is_valid_bas(entries) -> bool:
    """True when all rows or all columns (but not both) are constant."""
    m = np.asarray(entries)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    rows_constant = bool(np.all(m == m[:, :1]))
    cols_constant = bool(np.all(m == m[:1, :]))
    return rows_constant != cols_constant


@dataclass(frozen=True, eq=False)
class BasMatrix:
    """Square binary matrix whose rows (stripes) or columns (bars) are constant.

    ``stripes_are_rows`` is the orientation convention: by default stripes run
    horizontally (constant rows) and bars vertically (constant columns); the
    swapped convention flips both.
    """

    entries: np.ndarray
    label: str
    stripes_are_rows: bool = True

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.int8)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("entries must be a square matrix")
        if not np.all((entries == 0) | (entries == 1)):
            raise ValueError("entries must be 0 or 1")
        if self.label not in BAS_LABELS:
            raise ValueError(f"unknown label '{self.label}'")
        rows_constant = bool(np.all(entries == entries[:, :1]))
        cols_constant = bool(np.all(entries == entries[:1, :]))
        horizontal = (self.label == "stripes") == self.stripes_are_rows
        valid = (
            (horizontal and rows_constant and not cols_constant)
            or (not horizontal and cols_constant and not rows_constant)
        )
        if not valid:
            raise ValueError(f"matrix does not form a valid '{self.label}' pattern")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def flatten(self, spin_values: bool = False) -> np.ndarray:
        """Row-wise flattening to a float input vector; 0/1 by default,
        or remapped to -1/+1 when ``spin_values`` is set."""
        flat = self.entries.reshape(-1).astype(np.float64)
        if spin_values:
            flat = 2.0 * flat - 1.0
        return flat

    def to_text(self) -> str:
        """Printable grid of 0/1 characters, one row per line."""
        return "\n".join("".join(str(int(v)) for v in row) for row in self.entries)

    @classmethod
    def from_text(cls, text: str) -> "BasMatrix":
        """Parse a 0/1 character grid and infer its label."""
        rows = [line.strip() for line in text.strip().splitlines() if line.strip()]
        if not rows:
            raise ValueError("empty grid")
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("grid must be square")
        if any(c not in "01" for r in rows for c in r):
            raise ValueError("grid entries must be 0 or 1")
        entries = np.array([[int(c) for c in r] for r in rows], dtype=np.int8)
        rows_constant = bool(np.all(entries == entries[:, :1]))
        if not is_valid_bas(entries):
            raise ValueError("grid is not a valid bars/stripes pattern")
        return cls(entries=entries, label="stripes" if rows_constant else "bars")


def _pattern_matrix(size, bits, label, stripes_are_rows):
    column = np.array(bits, dtype=np.int8)
    horizontal = (label == "stripes") == stripes_are_rows
    if horizontal:
        return np.repeat(column[:, None], size, axis=1)
    return np.repeat(column[None, :], size, axis=0)


def gen_bas(size, n_samples, seed=0, stripes_are_rows=True, spin_values=False):
    """Random bars-and-stripes dataset.

    Each sample gets a coin-flip label and a pattern drawn uniformly from the
    ``2**size - 2`` non-constant patterns of its class; duplicates are
    allowed.  Matrices are flattened row-wise into the inputs and labels
    encoded numerically via :func:`bas_encode`.  ``stripes_are_rows`` fixes
    the orientation convention (stripes horizontal); flip it to swap the
    classes' geometry.

    Returns the dataset together with the underlying matrices.
    """
    if size < 2:
        raise ValueError("matrix size must be at least 2")
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rng = np.random.default_rng(seed)
    matrices = []
    inputs = np.empty((n_samples, size * size), dtype=np.float64)
    targets = np.empty(n_samples, dtype=np.float64)
    labels = []
    for a in range(n_samples):
        label = "stripes" if rng.random() < 0.5 else "bars"
        pattern = int(rng.integers(1, (1 << size) - 1))
        bits = [(pattern >> (size - 1 - i)) & 1 for i in range(size)]
        matrix = BasMatrix(
            entries=_pattern_matrix(size, bits, label, stripes_are_rows),
            label=label,
            stripes_are_rows=stripes_are_rows,
        )
        matrices.append(matrix)
        inputs[a] = matrix.flatten(spin_values=spin_values)
        targets[a] = bas_encode(label)
        labels.append(label)
    return Dataset(inputs=inputs, targets=targets, labels=labels), matrices


def attach_bas_labels(dataset: Dataset) -> Dataset:
    """Recover class labels from numeric targets of a bars-and-stripes CSV."""
    labels = [bas_decode(float(y)) for y in dataset.targets]
    return Dataset(inputs=dataset.inputs, targets=dataset.targets, labels=labels)


def _csv_header(n) -> list[str]:
    return [f"theta_{i}" for i in range(n)] + ["y"]


def save_csv(dataset: Dataset, path) -> None:
    """Write ``theta_0..theta_{n-1},y`` rows; floats use their shortest exact
    decimal form so a round trip is lossless."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_csv_header(dataset.input_dim))
        for row, y in zip(dataset.inputs, dataset.targets):
            writer.writerow([repr(float(v)) for v in row] + [repr(float(y))])


def load_csv(path) -> Dataset:
    """Read a dataset written by :func:`save_csv`."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetFormatError(f"no samples in {path}") from None
        n = len(header) - 1
        if n < 1 or header != _csv_header(n):
            raise DatasetFormatError(
                f"bad header in {path}: expected theta_0..theta_{{n-1}},y", line=1
            )
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != n + 1:
                raise DatasetFormatError(
                    f"expected {n + 1} fields, got {len(row)}", line=line_no
                )
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise DatasetFormatError(
                    f"non-numeric value in {row}", line=line_no
                ) from None
    if not rows:
        raise DatasetFormatError(f"no samples in {path}")
    data = np.array(rows, dtype=np.float64)
    return Dataset(inputs=data[:, :n], targets=data[:, n])
