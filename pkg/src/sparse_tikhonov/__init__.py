"""Semismooth Newton solvers for sparse Tikhonov-regularized least squares."""

from .apg import apg_solve, grid_oracle
from .datasets import Dataset, augment, compute_mu, load_csv, load_libsvm
from .dssn import dual_gradient, dual_objective, recover_primal, solve
from .estimator import SparseTikhonovRegressor
from .exceptions import (ConfigurationError, InvalidInputError, LibsvmParseError,
                         LineSearchError, NumericalError, UnsupportedSizeError)
from .problem import (ProblemData, SolveReport, SolverOptions, kkt_residual,
                      primal_objective)
from .pssn import pssn_solve
from .regularizers import Regularizer

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "Dataset", "InvalidInputError", "LibsvmParseError",
    "LineSearchError", "NumericalError", "ProblemData", "Regularizer",
    "SolveReport", "SolverOptions", "SparseTikhonovRegressor",
    "UnsupportedSizeError", "apg_solve", "augment", "compute_mu", "dual_gradient",
    "dual_objective", "grid_oracle", "kkt_residual", "load_csv", "load_libsvm",
    "primal_objective", "pssn_solve", "recover_primal", "solve",
]
