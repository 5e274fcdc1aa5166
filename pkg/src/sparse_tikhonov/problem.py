"""Problem data, solver options and reports shared by all solvers."""

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .exceptions import ConfigurationError, InvalidInputError
from .linsys import AUTO, STRATEGIES
from .regularizers import Regularizer, prox, reg_value


def as_design_matrix(A):
    """Return ``A`` as a float dense array or a CSC matrix, checking finiteness."""
    if sp.issparse(A):
        A = sp.csc_matrix(A, dtype=float)
        if not np.all(np.isfinite(A.data)):
            raise InvalidInputError("design matrix contains non-finite entries")
    else:
        A = np.asarray(A, dtype=float)
        if A.ndim != 2:
            raise InvalidInputError(f"design matrix must be 2-D, got ndim={A.ndim}")
        if not np.all(np.isfinite(A)):
            raise InvalidInputError("design matrix contains non-finite entries")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise InvalidInputError(f"design matrix must be non-empty, got {A.shape}")
    return A


@dataclass(frozen=True)
class ProblemData:
    """``min 0.5*||Ax - b||^2 + 0.5*lam*||x||^2 + reg(x)``."""

    A: object
    b: np.ndarray
    lam: float
    reg: Regularizer

    def __post_init__(self):
        A = as_design_matrix(self.A)
        b = np.asarray(self.b, dtype=float).ravel()
        if b.size != A.shape[0]:
            raise InvalidInputError(f"b has length {b.size}, expected {A.shape[0]}")
        if not np.all(np.isfinite(b)):
            raise InvalidInputError("b contains non-finite entries")
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ConfigurationError(f"lam must be a positive real, got {self.lam!r}")
        if not isinstance(self.reg, Regularizer):
            raise ConfigurationError("reg must be a Regularizer")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]

    def with_params(self, lam=None, reg=None):
        return ProblemData(self.A, self.b, self.lam if lam is None else lam,
                           self.reg if reg is None else reg)


@dataclass(frozen=True)
class SolverOptions:
    """Line-search, inexactness and stopping parameters.

    ``varrho`` and ``beta`` drive the Armijo test, ``eta_bar`` and ``zeta``
    the CG residual target ``min(eta_bar, ||g||**(1 + zeta))``.
    """

    varrho: float = 1e-4
    beta: float = 0.5
    eta_bar: float = 0.1
    zeta: float = 0.5
    eps: float = 1e-6
    max_iter: int = 200
    max_backtracks: int = 50
    strategy: str = AUTO
    cg_maxit: int | None = None
    keep_iterates: bool = False

    def __post_init__(self):
        if not 0 < self.varrho < 0.5:
            raise ConfigurationError("varrho must lie in (0, 1/2)")
        if not 0 < self.beta < 1:
            raise ConfigurationError("beta must lie in (0, 1)")
        if not 0 < self.eta_bar < 1:
            raise ConfigurationError("eta_bar must lie in (0, 1)")
        if not 0 < self.zeta <= 1:
            raise ConfigurationError("zeta must lie in (0, 1]")
        if not self.eps > 0:
            raise ConfigurationError("eps must be positive")
        if self.max_iter < 0 or self.max_backtracks < 0:
            raise ConfigurationError("iteration caps must be nonnegative")
        if self.strategy not in STRATEGIES:
            raise ConfigurationError(f"unknown linear-system strategy {self.strategy!r}")


@dataclass
class SolveReport:
    """Per-iteration histories of a solver run.

    ``eta_history``, ``objective_history`` and ``gap_history`` hold one entry
    per visited iterate (``iterations + 1`` in total); ``step_sizes`` and
    ``active_set_sizes`` hold one entry per Newton step taken.
    """

    solver: str = ""
    iterations: int = 0
    converged: bool = False
    message: str = ""
    eta_history: list = field(default_factory=list)
    objective_history: list = field(default_factory=list)
    gap_history: list = field(default_factory=list)
    grad_norm_history: list = field(default_factory=list)
    step_sizes: list = field(default_factory=list)
    active_set_sizes: list = field(default_factory=list)
    cg_iterations: list = field(default_factory=list)
    iterates: list = field(default_factory=list)
    wall_time: float = 0.0
    _t0: float = field(default=0.0, repr=False)

    @property
    def eta(self):
        return self.eta_history[-1] if self.eta_history else np.nan

    def start(self):
        self._t0 = time.perf_counter()

    def stop(self):
        self.wall_time = time.perf_counter() - self._t0


def primal_objective(p, x):
    """``0.5*||Ax - b||^2 + 0.5*lam*||x||^2 + reg(x)``."""
    x = np.asarray(x, dtype=float)
    r = p.A @ x - p.b
    return 0.5 * float(r @ r) + 0.5 * p.lam * float(x @ x) + reg_value(p.reg, x)


def kkt_residual(p, x):
    """Natural-map residual ``||x - prox(x - lam*x - A^T(Ax - b))||``."""
    x = np.asarray(x, dtype=float)
    y = x - p.lam * x - p.A.T @ (p.A @ x - p.b)
    return float(np.linalg.norm(x - prox(p.reg, 1.0, y)))
