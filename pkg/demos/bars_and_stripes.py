#!/usr/bin/env python3
"""Binary classification of bars-and-stripes matrices.

Matrices whose rows are constant ("stripes") or whose columns are constant
("bars") are flattened into bias vectors; the class is encoded as a target
of 0 or 10 and read back from the model output with a threshold at 5.
Runs a quick 4x4 task by default; pass --full for the 12x12 task
(about a quarter of a minute).
"""

import argparse

import numpy as np

from isinglearn import (
    ModelState,
    SimulatedAnnealer,
    TrainConfig,
    bas_decode,
    classification_accuracy,
    epsilon_init,
    gen_bas,
    train,
)
from isinglearn.training import derive_seed, evaluate_model


def classify(size, n_samples, epochs, learning_rate):
    machine = SimulatedAnnealer()
    data, matrices = gen_bas(size, n_samples, seed=0)
    test, _ = gen_bas(size, n_samples, seed=derive_seed(0, 9, 0, 1))

    print(f"{size}x{size} matrices, {n_samples} train + {n_samples} test samples")
    print("two training examples:")
    for matrix in matrices[:2]:
        print(f"--- {matrix.label}")
        print(matrix.to_text())

    state = ModelState.fresh(size * size, scale=-0.3)
    state.offset = epsilon_init(data, -0.3, state, machine)
    print(f"\nfirst-round offset: {state.offset:.3f}")

    report = train(
        data,
        state,
        TrainConfig(learning_rate=learning_rate, epochs=epochs),
        machine,
        test_set=test,
    )
    print("\nepoch  train_mse  test_mse  train_acc  test_acc")
    for r in report.records:
        print(f"{r.epoch:5d} {r.train_mse:10.3f} {r.test_mse:9.3f} "
              f"{r.train_accuracy:10.3f} {r.test_accuracy:9.3f}")

    final_train = evaluate_model(report.final_state, data, machine)
    final_test = evaluate_model(report.final_state, test, machine, base_seed=1)
    print(f"\nfinal model: train accuracy "
          f"{classification_accuracy(final_train, data.labels):.3f}, "
          f"test accuracy {classification_accuracy(final_test, test.labels):.3f}")

    sample = matrices[0]
    value = final_train[0]
    print(f"\nfirst training matrix is '{sample.label}'; model output "
          f"{value:.2f} decodes to '{bas_decode(value)}'")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--full", action="store_true",
                        help="run the 12x12 task instead of the quick 4x4 one")
    args = parser.parse_args()
    if args.full:
        classify(size=12, n_samples=80, epochs=8, learning_rate=0.02)
    else:
        classify(size=4, n_samples=24, epochs=12, learning_rate=0.03)


if __name__ == "__main__":
    main()
