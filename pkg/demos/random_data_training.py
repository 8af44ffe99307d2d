#!/usr/bin/env python3
"""Trainability on random data: the model fits noise it has no right to fit.

Twenty random input/target pairs in ten dimensions, trained with the solver's
own configurations as gradient estimates.  Also shows why the learning rate
matters: full-batch steps on this model can oscillate or blow up when the
rate is too aggressive, so the same dataset is trained at two rates.
"""

import numpy as np

from isinglearn import (
    ModelState,
    SimulatedAnnealer,
    TrainConfig,
    TrainingDiverged,
    epsilon_init,
    gen_random,
    train,
)


def run(dataset_seed, learning_rate):
    machine = SimulatedAnnealer()
    data = gen_random(10, 20, seed=dataset_seed)
    state = ModelState.fresh(10, scale=1.0)
    state.offset = epsilon_init(data, 1.0, state, machine, base_seed=dataset_seed)
    config = TrainConfig(
        learning_rate=learning_rate, epochs=50, base_seed=dataset_seed
    )
    try:
        report = train(data, state, config, machine)
    except TrainingDiverged as exc:
        print(f"  rate {learning_rate}: diverged ({exc})")
        return
    losses = [r.train_mse for r in report.records]
    print(f"  rate {learning_rate}: loss {losses[0]:.3f} -> {losses[-1]:.3f}")
    marks = "".join("#" if l > losses[0] else "." for l in losses)
    print(f"    above-start map: {marks}")


def main():
    print("one dataset, two learning rates (seed 0)")
    run(dataset_seed=0, learning_rate=0.2)
    run(dataset_seed=0, learning_rate=0.05)

    print("\nfive datasets at the conservative rate")
    machine = SimulatedAnnealer()
    finals = []
    for seed in range(5):
        data = gen_random(10, 20, seed=seed)
        state = ModelState.fresh(10, scale=1.0)
        state.offset = epsilon_init(data, 1.0, state, machine, base_seed=seed)
        report = train(
            data,
            state,
            TrainConfig(learning_rate=0.05, epochs=50, base_seed=seed),
            machine,
        )
        finals.append(report.final_mse / report.initial_mse)
        print(f"  dataset {seed}: loss ratio {finals[-1]:.3f}")
    print(f"mean final/initial ratio: {np.mean(finals):.3f}")


if __name__ == "__main__":
    main()
