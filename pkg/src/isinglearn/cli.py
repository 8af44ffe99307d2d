"""Command-line surface: dataset generation, training, prediction, and
experiment reproduction with manifest-based replay.

Configuration is a flat INI document with sections mirroring the library
modules (``dataset``, ``model``, ``training``, ``solver``).  Every run writes
back the fully resolved configuration as a manifest; feeding that manifest to
``train --config`` re-executes the run, bit-identically for deterministic
backends and seed policies.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import Bounds, DimensionMismatch
from .datasets import (
    BasMatrix,
    Dataset,
    bas_decode,
    classification_accuracy,
    gen_bas,
    gen_function,
    gen_random,
    load_csv,
    save_csv,
)
from .model import ModelState, PreprocessSpec, load_checkpoint, save_checkpoint
from .solvers import make_backend
from .training import (
    TrainConfig,
    TrainingDiverged,
    derive_seed,
    epsilon_init,
    evaluate_model,
    train,
)

ENV_OUT_DIR = "ISINGLEARN_OUT_DIR"

_KNOWN_KEYS = {
    "dataset": {
        "kind", "n", "samples", "lo", "hi", "seed", "function", "size",
        "test_samples", "path", "test_path",
    },
    "model": {
        "scale", "offset", "offset_value", "copies", "step",
        "coupling_min", "coupling_max",
    },
    "training": {
        "learning_rate", "epochs", "seed", "seed_policy", "update_scale",
        "update_offset", "checkpoint_every",
    },
    "solver": {"backend", "sweeps", "t_initial", "t_final", "reads"},
}
_IGNORED_SECTIONS = {"run", "provenance"}

_SOLVER_PARAM_TYPES = {"sweeps": int, "t_initial": float, "t_final": float, "reads": int}


class UsageError(ValueError):
    """Bad flags or configuration; maps to exit code 2."""


# ---------------------------------------------------------------------------
# Presets


def _fn_preset(function: str, size: int) -> dict:
    table = {
        ("lin", 50): ("0.016", "-0.3", "-9.3"),
        ("lin", 150): (repr(0.8 / 150), "-0.1", "17.63"),
        ("quad", 50): ("0.02", "-0.05", "-2.7"),
        ("quad", 150): (repr(1.0 / 150), "-0.0167", "-4.23"),
    }
    if (function, size) not in table:
        raise UsageError(
            f"fn presets are defined for sizes 50 and 150, got {size}"
        )
    step, scale, offset = table[(function, size)]
    learning_rate = "0.02" if function == "lin" else "0.25"
    sections = {
        "dataset": {"kind": "function", "function": function, "samples": "20"},
        "model": {"scale": scale, "offset": offset, "copies": str(size), "step": step},
        "training": {"learning_rate": learning_rate, "epochs": "200"},
        "solver": {"backend": "simulated-annealing"},
    }
    provenance = {
        "dataset.samples": "published",
        "model.scale": "published",
        "model.offset": "published",
        "model.copies": "published",
        "model.step": "published",
        "training.learning_rate": "published",
        "training.epochs": "published",
        "solver.backend": "published",
    }
    return {"sections": sections, "provenance": provenance}


def resolve_preset(name: str, size: int = 50) -> dict:
    """Bundle of config sections reproducing a published experiment."""
    if name == "random":
        return {
            "sections": {
                "dataset": {
                    "kind": "random", "n": "10", "samples": "20",
                    "lo": "-1.0", "hi": "1.0", "seed": "0",
                },
                "model": {"scale": "1.0", "offset": "estimate"},
                "training": {"learning_rate": "0.2", "epochs": "50"},
                "solver": {"backend": "simulated-annealing"},
            },
            "provenance": {
                "dataset.n": "published",
                "dataset.samples": "published",
                "dataset.lo": "published",
                "dataset.hi": "published",
                "model.scale": "published",
                "model.offset": "published",
                "training.learning_rate": "published",
                "training.epochs": "published",
                "solver.backend": "published",
            },
        }
    if name in ("fn-lin", "fn-quad"):
        return _fn_preset(name.split("-")[1], size)
    if name == "bas":
        return {
            "sections": {
                "dataset": {
                    "kind": "bas", "size": "12", "samples": "80",
                    "test_samples": "80", "seed": "0",
                },
                "model": {"scale": "-0.3", "offset": "estimate"},
                "training": {"learning_rate": "0.02", "epochs": "8"},
                # published run used annealing hardware; simulated annealing
                # substitutes for it here, recorded as a default
                "solver": {"backend": "simulated-annealing"},
            },
            "provenance": {
                "dataset.size": "published",
                "dataset.samples": "published",
                "dataset.test_samples": "published",
                "model.scale": "published",
                "model.offset": "published",
                "training.learning_rate": "published",
                "training.epochs": "published",
                "solver.backend": "default (substituted for annealing hardware)",
            },
        }
    raise UsageError(f"unknown preset '{name}'; choose from random, fn-lin, fn-quad, bas")


# ---------------------------------------------------------------------------
# Config plumbing


def _base_sections() -> dict:
    return {
        "dataset": {},
        "model": {"scale": "1.0", "offset": "0.0"},
        "training": {
            "learning_rate": "0.1", "epochs": "10", "seed": "0",
            "seed_policy": "per-call", "update_scale": "false",
            "update_offset": "false",
        },
        "solver": {"backend": "simulated-annealing"},
    }


def read_config(path) -> dict:
    """Parse an INI config/manifest; unknown sections or keys are rejected."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise UsageError(f"cannot read config file {path}")
    sections = {}
    for section in parser.sections():
        if section in _IGNORED_SECTIONS:
            continue
        if section not in _KNOWN_KEYS:
            raise UsageError(f"unknown config section [{section}]")
        sections[section] = {}
        for key, value in parser.items(section):
            if key not in _KNOWN_KEYS[section]:
                raise UsageError(f"unknown config key '{section}.{key}'")
            sections[section][key] = value
    return sections


def _merge(base: dict, extra: dict, provenance: dict, origin: str) -> None:
    for section, values in extra.items():
        for key, value in values.items():
            base.setdefault(section, {})[key] = value
            if origin is not None:
                provenance[f"{section}.{key}"] = origin


def write_manifest(path, sections: dict, provenance: dict, run: dict) -> None:
    """Resolved configuration plus run metadata, replayable via ``--config``."""
    lines = ["[run]"]
    for key in sorted(run):
        lines.append(f"{key} = {run[key]}")
    for section in ("dataset", "model", "training", "solver"):
        values = sections.get(section)
        if not values:
            continue
        lines.append("")
        lines.append(f"[{section}]")
        for key in sorted(values):
            lines.append(f"{key} = {values[key]}")
    if provenance:
        lines.append("")
        lines.append("[provenance]")
        for key in sorted(provenance):
            lines.append(f"{key} = {provenance[key]}")
    Path(path).write_text("\n".join(lines) + "\n")


def _out_dir(args) -> Path:
    out = args.out_dir or os.environ.get(ENV_OUT_DIR) or "isinglearn-out"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _build_machine(solver_section: dict):
    name = solver_section.get("backend", "simulated-annealing")
    params = {}
    for key, value in solver_section.items():
        if key == "backend":
            continue
        params[key] = _SOLVER_PARAM_TYPES[key](value)
    return make_backend(name, params)


def _build_dataset(section: dict):
    """Dataset (and optional test set) described by a [dataset] section."""
    kind = section.get("kind")
    if kind is None:
        raise UsageError("no dataset configured; pass --preset, --data or --config")
    if kind == "random":
        data = gen_random(
            n=int(section.get("n", "10")),
            n_samples=int(section.get("samples", "20")),
            value_range=(float(section.get("lo", "-1.0")), float(section.get("hi", "1.0"))),
            seed=int(section.get("seed", "0")),
        )
        return data, None
    if kind == "function":
        data = gen_function(
            section.get("function", "lin"),
            n_samples=int(section.get("samples", "20")),
        )
        return data, None
    if kind == "bas":
        seed = int(section.get("seed", "0"))
        size = int(section.get("size", "12"))
        data, _ = gen_bas(size, int(section.get("samples", "80")), seed=seed)
        test = None
        test_samples = int(section.get("test_samples", "0"))
        if test_samples:
            test, _ = gen_bas(size, test_samples, seed=derive_seed(seed, 9, 0, 1))
        return data, test
    if kind == "csv":
        data = load_csv(section["path"])
        test = load_csv(section["test_path"]) if "test_path" in section else None
        return data, test
    raise UsageError(f"unknown dataset kind '{kind}'")


def _parse_step(value: str, input_dim: int) -> np.ndarray:
    parts = [float(v) for v in value.split(",")]
    if len(parts) == 1:
        return np.full(input_dim, parts[0])
    if len(parts) != input_dim:
        raise UsageError(
            f"step has {len(parts)} components but the input has {input_dim}"
        )
    return np.array(parts)


def _build_state(sections: dict, dataset: Dataset, machine) -> tuple[ModelState, str]:
    """Fresh zero-coupling model; the offset may be estimated from a first
    round of solves.  Returns the state and the resolved offset text."""
    model_section = sections["model"]
    scale = float(model_section.get("scale", "1.0"))
    copies = int(model_section.get("copies", "1"))
    if copies > 1:
        step = _parse_step(model_section.get("step", "0.0"), dataset.input_dim)
        spec = PreprocessSpec.offset(step, copies)
    else:
        spec = PreprocessSpec.identity()
    bounds = None
    if "coupling_min" in model_section or "coupling_max" in model_section:
        bounds = Bounds(
            float(model_section.get("coupling_min", "-inf")),
            float(model_section.get("coupling_max", "inf")),
        )
    state = ModelState.fresh(
        input_dim=dataset.input_dim,
        preprocess=spec,
        scale=scale,
        offset=0.0,
        coupling_bounds=bounds,
    )
    offset_text = model_section.get("offset", "0.0")
    if offset_text == "estimate":
        base_seed = int(sections["training"].get("seed", "0"))
        state.offset = epsilon_init(dataset, scale, state, machine, base_seed=base_seed)
    else:
        state.offset = float(offset_text)
    return state, offset_text


def _build_train_config(section: dict, checkpoint_dir=None) -> TrainConfig:
    checkpoint_every = section.get("checkpoint_every")
    return TrainConfig(
        learning_rate=float(section.get("learning_rate", "0.1")),
        epochs=int(section.get("epochs", "10")),
        update_scale=section.get("update_scale", "false") == "true",
        update_offset=section.get("update_offset", "false") == "true",
        seed_policy=section.get("seed_policy", "per-call"),
        base_seed=int(section.get("seed", "0")),
        checkpoint_every=int(checkpoint_every) if checkpoint_every else None,
        checkpoint_dir=checkpoint_dir,
    )


def _resolve_run(args) -> tuple[dict, dict]:
    """Merge defaults, preset, config file, and flags into one config."""
    sections = _base_sections()
    provenance = {}
    preset_name = getattr(args, "preset", None)
    if preset_name:
        preset = resolve_preset(preset_name, size=getattr(args, "size", 50) or 50)
        _merge(sections, preset["sections"], provenance, None)
        for section, values in preset["sections"].items():
            for key in values:
                provenance.setdefault(f"{section}.{key}", "default")
        provenance.update(preset["provenance"])
    if args.config:
        _merge(sections, read_config(args.config), provenance, "config")
    flags = {}
    if getattr(args, "data", None):
        flags.setdefault("dataset", {})["kind"] = "csv"
        flags["dataset"]["path"] = args.data
    if getattr(args, "test_data", None):
        flags.setdefault("dataset", {})["test_path"] = args.test_data
    if getattr(args, "epochs", None) is not None:
        flags.setdefault("training", {})["epochs"] = str(args.epochs)
    if getattr(args, "learning_rate", None) is not None:
        flags.setdefault("training", {})["learning_rate"] = repr(args.learning_rate)
    if args.seed is not None:
        flags.setdefault("training", {})["seed"] = str(args.seed)
    if getattr(args, "scale", None) is not None:
        flags.setdefault("model", {})["scale"] = repr(args.scale)
    if getattr(args, "offset", None) is not None:
        flags.setdefault("model", {})["offset"] = repr(args.offset)
    if getattr(args, "estimate_offset", False):
        flags.setdefault("model", {})["offset"] = "estimate"
    if args.backend:
        flags.setdefault("solver", {})["backend"] = args.backend
    if getattr(args, "sweeps", None) is not None:
        flags.setdefault("solver", {})["sweeps"] = str(args.sweeps)
    if getattr(args, "reads", None) is not None:
        flags.setdefault("solver", {})["reads"] = str(args.reads)
    _merge(sections, flags, provenance, "flag")
    if sections["solver"].get("backend") == "exact":
        sections["solver"].pop("sweeps", None)
        sections["solver"].pop("t_initial", None)
        sections["solver"].pop("t_final", None)
        sections["solver"].pop("reads", None)
    return sections, provenance


# ---------------------------------------------------------------------------
# Subcommands


def cmd_gen_data(args) -> int:
    out_dir = _out_dir(args)
    seed = args.seed if args.seed is not None else 0
    if args.kind == "random":
        data = gen_random(args.n, args.samples, (args.lo, args.hi), seed=seed)
        matrices = None
    elif args.kind in ("fn-lin", "fn-quad"):
        data = gen_function(args.kind.split("-")[1], args.samples)
        matrices = None
    elif args.kind == "bas":
        data, matrices = gen_bas(args.k, args.samples, seed=seed)
    else:  # unreachable: argparse restricts choices
        raise UsageError(f"unknown dataset kind '{args.kind}'")
    out = Path(args.out) if args.out else out_dir / "dataset.csv"
    save_csv(data, out)
    if matrices is not None and args.grids:
        with open(args.grids, "w") as fh:
            for m in matrices:
                fh.write(f"# {m.label}\n{m.to_text()}\n\n")
    print(f"wrote {data.n_samples} samples x {data.input_dim} features to {out}")
    return 0


def _run_training(sections, out_dir, collect_hook=None):
    machine = _build_machine(sections["solver"])
    dataset, test = _build_dataset(sections["dataset"])
    state, offset_text = _build_state(sections, dataset, machine)
    sections["model"]["offset"] = offset_text
    if offset_text == "estimate":
        sections["model"]["offset_value"] = repr(state.offset)
    train_config = _build_train_config(sections["training"], checkpoint_dir=out_dir)
    metrics_path = out_dir / "metrics.csv"
    report = train(
        dataset,
        state,
        train_config,
        machine,
        test_set=test,
        metrics_path=metrics_path,
        epoch_hook=collect_hook,
    )
    checkpoint_path = out_dir / "checkpoint.json"
    backend_info = {"name": machine.name}
    backend_info.update(
        {k: _SOLVER_PARAM_TYPES[k](v) for k, v in sections["solver"].items() if k != "backend"}
    )
    save_checkpoint(report.final_state, checkpoint_path, backend=backend_info)
    return report, dataset, test, machine, metrics_path, checkpoint_path


def cmd_train(args) -> int:
    out_dir = _out_dir(args)
    sections, provenance = _resolve_run(args)
    report, _, _, machine, metrics_path, checkpoint_path = _run_training(
        sections, out_dir
    )
    write_manifest(
        out_dir / "manifest.ini",
        sections,
        provenance,
        run={
            "command": "train",
            "preset": getattr(args, "preset", None) or "",
            "package": f"isinglearn {__version__}",
            "backend": machine.name,
            "out_dir": str(out_dir),
            "metrics": metrics_path.name,
            "checkpoint": checkpoint_path.name,
            "solver_calls": report.solver_calls,
        },
    )
    print(
        f"trained {report.records[-1].epoch + 1} epochs: "
        f"mse {report.initial_mse:.6g} -> {report.final_mse:.6g}"
    )
    print(f"metrics: {metrics_path}")
    print(f"checkpoint: {checkpoint_path}")
    return 0


def _input_vector(args, state) -> np.ndarray:
    if args.grid:
        matrix = BasMatrix.from_text(Path(args.grid).read_text())
        return matrix.flatten()
    return np.array([float(v) for v in args.input.split(",")])


def cmd_predict(args) -> int:
    state, backend_info = load_checkpoint(args.checkpoint)
    if args.backend:
        machine = make_backend(args.backend, {})
    elif backend_info:
        params = {k: v for k, v in backend_info.items() if k != "name"}
        machine = make_backend(backend_info["name"], params)
    else:
        machine = make_backend("exact", {})
    seed = args.seed if args.seed is not None else 0
    from .model import predict as model_predict

    if args.data:
        data = load_csv(args.data)
        for a in range(data.n_samples):
            pred = model_predict(state, data.inputs[a], machine, seed=derive_seed(seed, 3, 0, a))
            print(repr(pred.value))
        return 0
    theta = _input_vector(args, state)
    pred = model_predict(state, theta, machine, seed=seed)
    print(f"F = {pred.value!r}")
    if args.grid:
        print(f"label = {bas_decode(pred.value)}")
    if args.verbose:
        spins = " ".join(f"{int(s):+d}" for s in pred.solve.configuration.spins)
        print(f"ground energy = {pred.solve.energy!r}")
        print(f"configuration = {spins}")
        print(f"backend = {pred.solve.backend}")
    return 0


def _reproduce_random(args, out_dir) -> int:
    sections, provenance = _resolve_run(args)
    runs = args.runs
    base_seed = int(sections["training"].get("seed", "0"))
    machine = _build_machine(sections["solver"])
    curves = []
    diverged = []
    for i in range(runs):
        run_sections = {k: dict(v) for k, v in sections.items()}
        run_sections["dataset"]["seed"] = str(base_seed + i)
        run_sections["training"]["seed"] = str(base_seed + i)
        dataset, _ = _build_dataset(run_sections["dataset"])
        state, _ = _build_state(run_sections, dataset, machine)
        config = _build_train_config(run_sections["training"])
        try:
            report = train(dataset, state, config, machine)
        except TrainingDiverged as exc:
            # keep reproducing; the aggregate reports which runs blew up
            diverged.append(i)
            print(f"run {i}: diverged ({exc})")
            continue
        curves.append([r.train_mse for r in report.records])
        print(f"run {i}: mse {curves[-1][0]:.4f} -> {curves[-1][-1]:.4f}")
    if not curves:
        raise RuntimeError("every run diverged; nothing to aggregate")
    matrix = np.array(curves)
    mean = matrix.mean(axis=0)
    std = matrix.std(axis=0)
    aggregate = out_dir / "aggregate.csv"
    with open(aggregate, "w") as fh:
        fh.write("epoch,mse_mean,mse_std\n")
        for epoch in range(matrix.shape[1]):
            fh.write(f"{epoch},{float(mean[epoch])!r},{float(std[epoch])!r}\n")
    runs_path = out_dir / "runs.csv"
    with open(runs_path, "w") as fh:
        fh.write("epoch," + ",".join(f"run_{i}" for i in range(matrix.shape[0])) + "\n")
        for epoch in range(matrix.shape[1]):
            fh.write(
                f"{epoch}," + ",".join(repr(float(v)) for v in matrix[:, epoch]) + "\n"
            )
    write_manifest(
        out_dir / "manifest.ini",
        sections,
        provenance,
        run={
            "command": "reproduce",
            "preset": "random",
            "package": f"isinglearn {__version__}",
            "runs": runs,
            "diverged_runs": ",".join(str(i) for i in diverged) or "none",
            "out_dir": str(out_dir),
            "aggregate": aggregate.name,
        },
    )
    completed = runs - len(diverged)
    print(f"mean mse {mean[0]:.4f} -> {mean[-1]:.4f} over {completed} of {runs} datasets")
    print(f"aggregate: {aggregate}")
    return 0


def _reproduce_fn(args, out_dir) -> int:
    sections, provenance = _resolve_run(args)
    report, dataset, _, machine, metrics_path, checkpoint_path = _run_training(
        sections, out_dir
    )
    function = sections["dataset"].get("function", "lin")
    from .datasets import TARGET_FUNCTIONS

    grid = np.linspace(0.0, 1.0, args.grid_points)
    sweep_set = Dataset(grid[:, None], TARGET_FUNCTIONS[function](grid))
    values = evaluate_model(
        report.final_state, sweep_set, machine, base_seed=report.base_seed
    )
    sweep_path = out_dir / "sweep.csv"
    with open(sweep_path, "w") as fh:
        fh.write("x,target,model\n")
        for x, y, v in zip(grid, sweep_set.targets, values):
            fh.write(f"{float(x)!r},{float(y)!r},{float(v)!r}\n")
    write_manifest(
        out_dir / "manifest.ini",
        sections,
        provenance,
        run={
            "command": "reproduce",
            "preset": args.preset,
            "package": f"isinglearn {__version__}",
            "out_dir": str(out_dir),
            "metrics": metrics_path.name,
            "sweep": sweep_path.name,
            "checkpoint": checkpoint_path.name,
        },
    )
    max_err = float(np.max(np.abs(values - sweep_set.targets)))
    print(
        f"mse {report.initial_mse:.6g} -> {report.final_mse:.6g}; "
        f"max sweep error {max_err:.4f}"
    )
    print(f"sweep: {sweep_path}")
    return 0


def _reproduce_bas(args, out_dir) -> int:
    sections, provenance = _resolve_run(args)
    per_epoch = []

    def hook(record, train_values, test_values):
        per_epoch.append((record, train_values, test_values))

    report, dataset, test, machine, metrics_path, checkpoint_path = _run_training(
        sections, out_dir, collect_hook=hook
    )
    outputs_path = out_dir / "outputs.csv"
    with open(outputs_path, "w") as fh:
        fh.write(
            "epoch,train_bars_mean,train_stripes_mean,"
            "test_bars_mean,test_stripes_mean\n"
        )
        for record, train_values, test_values in per_epoch:
            def label_mean(values, labels, label):
                chosen = [v for v, l in zip(values, labels) if l == label]
                return repr(float(np.mean(chosen))) if chosen else ""

            fh.write(
                f"{record.epoch},"
                f"{label_mean(train_values, dataset.labels, 'bars')},"
                f"{label_mean(train_values, dataset.labels, 'stripes')},"
                f"{label_mean(test_values, test.labels, 'bars')},"
                f"{label_mean(test_values, test.labels, 'stripes')}\n"
            )
    accuracy_path = out_dir / "accuracy.csv"
    with open(accuracy_path, "w") as fh:
        fh.write("epoch,train_accuracy,test_accuracy\n")
        for record, _, _ in per_epoch:
            fh.write(
                f"{record.epoch},{record.train_accuracy!r},{record.test_accuracy!r}\n"
            )
    final_train = evaluate_model(report.final_state, dataset, machine, report.base_seed)
    final_test = evaluate_model(report.final_state, test, machine, report.base_seed + 1)
    train_acc = classification_accuracy(final_train, dataset.labels)
    test_acc = classification_accuracy(final_test, test.labels)
    # the sets are drawn independently, so repeats can occur; report them
    train_rows = {tuple(row) for row in dataset.inputs}
    overlap = sum(1 for row in test.inputs if tuple(row) in train_rows)
    write_manifest(
        out_dir / "manifest.ini",
        sections,
        provenance,
        run={
            "command": "reproduce",
            "preset": "bas",
            "package": f"isinglearn {__version__}",
            "out_dir": str(out_dir),
            "metrics": metrics_path.name,
            "outputs": outputs_path.name,
            "accuracy": accuracy_path.name,
            "checkpoint": checkpoint_path.name,
            "final_train_accuracy": repr(train_acc),
            "final_test_accuracy": repr(test_acc),
            "train_test_overlap": overlap,
        },
    )
    print(f"final accuracy: train {train_acc:.3f}, test {test_acc:.3f}")
    print(f"train/test overlap: {overlap} of {test.n_samples} test samples")
    print(f"outputs: {outputs_path}")
    return 0


def cmd_reproduce(args) -> int:
    out_dir = _out_dir(args)
    if args.preset == "random":
        return _reproduce_random(args, out_dir)
    if args.preset in ("fn-lin", "fn-quad"):
        return _reproduce_fn(args, out_dir)
    if args.preset == "bas":
        return _reproduce_bas(args, out_dir)
    raise UsageError(f"unknown preset '{args.preset}'")


# ---------------------------------------------------------------------------
# Parser


def _add_global_flags(parser) -> None:
    parser.add_argument("--backend", choices=["exact", "simulated-annealing"])
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out-dir", default=None)
    parser.add_argument("--config", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isinglearn",
        description="Train and run Ising-machine models.",
    )
    parser.add_argument("--version", action="version", version=f"isinglearn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-data", help="generate a dataset CSV")
    gen.add_argument("kind", choices=["random", "fn-lin", "fn-quad", "bas"])
    gen.add_argument("--n", type=int, default=10)
    gen.add_argument("--samples", type=int, required=True)
    gen.add_argument("--lo", type=float, default=-1.0)
    gen.add_argument("--hi", type=float, default=1.0)
    gen.add_argument("--k", type=int, default=12, help="bars-and-stripes matrix size")
    gen.add_argument("--out", default=None)
    gen.add_argument("--grids", default=None, help="also write text grids (bas only)")
    _add_global_flags(gen)
    gen.set_defaults(func=cmd_gen_data)

    tr = sub.add_parser("train", help="train a model")
    tr.add_argument("--preset", choices=["random", "fn-lin", "fn-quad", "bas"])
    tr.add_argument("--size", type=int, default=None, help="total spins for fn presets")
    tr.add_argument("--data", default=None, help="training dataset CSV")
    tr.add_argument("--test-data", default=None)
    tr.add_argument("--epochs", type=int, default=None)
    tr.add_argument("--learning-rate", type=float, default=None)
    tr.add_argument("--scale", type=float, default=None)
    tr.add_argument("--offset", type=float, default=None)
    tr.add_argument(
        "--estimate-offset", action="store_true",
        help="set the output offset from a first round of solves",
    )
    tr.add_argument("--sweeps", type=int, default=None)
    tr.add_argument("--reads", type=int, default=None)
    _add_global_flags(tr)
    tr.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", help="evaluate a trained model")
    pr.add_argument("--checkpoint", required=True)
    group = pr.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", help="comma-separated feature vector")
    group.add_argument("--data", help="CSV of inputs to predict")
    group.add_argument("--grid", help="0/1 text grid of a bars-and-stripes matrix")
    pr.add_argument("--verbose", action="store_true")
    _add_global_flags(pr)
    pr.set_defaults(func=cmd_predict)

    rep = sub.add_parser("reproduce", help="run a full experiment preset")
    rep.add_argument("preset", choices=["random", "fn-lin", "fn-quad", "bas"])
    rep.add_argument("--size", type=int, default=None)
    rep.add_argument("--runs", type=int, default=30, help="datasets for the random preset")
    rep.add_argument("--grid-points", type=int, default=50)
    _add_global_flags(rep)
    rep.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure: nonzero but not a usage error
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
