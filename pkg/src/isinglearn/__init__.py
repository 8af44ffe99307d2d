"""Supervised learning with Ising machines.

The model output is the scaled, offset ground-state energy of an Ising
problem whose biases carry the input features and whose couplings are the
trainable parameters.  Training runs plain gradient descent, with the
machine's own solved configurations standing in for the derivative
computation.
"""

from .core import (
    Bounds,
    DimensionMismatch,
    IsingProblem,
    SolveResult,
    SpinConfiguration,
    Topology,
    complete_topology,
    energy,
    problem_from_text,
    problem_to_text,
    zero_coupling_ground_state,
)
from .datasets import (
    BasMatrix,
    Dataset,
    DatasetFormatError,
    attach_bas_labels,
    bas_decode,
    bas_encode,
    classification_accuracy,
    gen_bas,
    gen_function,
    gen_random,
    is_valid_bas,
    load_csv,
    save_csv,
)
from .model import (
    ModelState,
    Prediction,
    PreprocessSpec,
    build_problem,
    load_checkpoint,
    predict,
    preprocess,
    save_checkpoint,
)
from .solvers import (
    AnnealSchedule,
    CapacityLimit,
    ExactSolver,
    IsingMachine,
    SimulatedAnnealer,
    UnknownBackend,
    exact_solve,
    make_backend,
    sa_solve,
)
from .training import (
    EpochRecord,
    TrainConfig,
    TrainReport,
    TrainingAborted,
    TrainingDiverged,
    derive_seed,
    epsilon_init,
    epsilon_init_zero_couplings,
    evaluate_model,
    finite_difference_gradient,
    gamma_step,
    lambda_epsilon_step,
    mse_loss,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "AnnealSchedule",
    "BasMatrix",
    "Bounds",
    "CapacityLimit",
    "Dataset",
    "DatasetFormatError",
    "DimensionMismatch",
    "EpochRecord",
    "ExactSolver",
    "IsingMachine",
    "IsingProblem",
    "ModelState",
    "Prediction",
    "PreprocessSpec",
    "SimulatedAnnealer",
    "SolveResult",
    "SpinConfiguration",
    "Topology",
    "TrainConfig",
    "TrainReport",
    "TrainingAborted",
    "TrainingDiverged",
    "UnknownBackend",
    "attach_bas_labels",
    "bas_decode",
    "bas_encode",
    "build_problem",
    "classification_accuracy",
    "complete_topology",
    "derive_seed",
    "energy",
    "epsilon_init",
    "epsilon_init_zero_couplings",
    "evaluate_model",
    "exact_solve",
    "finite_difference_gradient",
    "gamma_step",
    "gen_bas",
    "gen_function",
    "gen_random",
    "is_valid_bas",
    "lambda_epsilon_step",
    "load_checkpoint",
    "load_csv",
    "make_backend",
    "mse_loss",
    "predict",
    "preprocess",
    "problem_from_text",
    "problem_to_text",
    "sa_solve",
    "save_checkpoint",
    "save_csv",
    "train",
    "zero_coupling_ground_state",
]
