"""scikit-learn estimator wrapping the solvers."""

import warnings

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils.validation import check_is_fitted, validate_data

from .bench import make_regularizer, solve_one
from .datasets import compute_mu
from .problem import ProblemData, SolverOptions
from .regularizers import NONNEG


class SparseTikhonovRegressor(RegressorMixin, BaseEstimator):
    """Least squares with a ridge term plus an l1 and/or nonnegativity penalty.

    Minimizes ``0.5*||Xw - y||^2 + 0.5*lam*||w||^2 + penalty(w)`` without an
    intercept.

    Parameters
    ----------
    lam : float, default=1.0
        Ridge weight, strictly positive.
    penalty : {"l1", "nonneg", "l1nonneg"}, default="l1"
    mu : float, optional
        Absolute l1 weight. Takes precedence over ``mu_c``.
    mu_c : float, default=1e-3
        Relative l1 weight; ``mu = mu_c * ||X^T y||_inf`` at fit time.
    solver : {"dssn", "pssn", "apg"}, default="dssn"
    eps : float, default=1e-6
        KKT-residual tolerance.
    max_iter : int, default=200
    linsys : {"auto", "chol", "smw", "cg"}, default="auto"
    warm_start : bool, default=False
        Reuse the previous solution as starting point on refit.

    Attributes
    ----------
    coef_ : ndarray of shape (n_features,)
    dual_coef_ : ndarray of shape (n_samples,)
        Dual solution; equals ``X @ coef_ - y`` at the optimum.
    mu_ : float
    n_iter_ : int
    report_ : SolveReport
    """

    def __init__(self, lam=1.0, penalty="l1", mu=None, mu_c=1e-3, solver="dssn",
                 eps=1e-6, max_iter=200, linsys="auto", warm_start=False):
        self.lam = lam
        self.penalty = penalty
        self.mu = mu
        self.mu_c = mu_c
        self.solver = solver
        self.eps = eps
        self.max_iter = max_iter
        self.linsys = linsys
        self.warm_start = warm_start

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.input_tags.sparse = True
        return tags

    def fit(self, X, y):
        X, y = validate_data(self, X, y, accept_sparse="csc", dtype=np.float64,
                             y_numeric=True)
        if self.penalty == NONNEG:
            mu = None
        elif self.mu is not None:
            mu = float(self.mu)
        else:
            mu = compute_mu(self.mu_c, X, y)
        p = ProblemData(X, y, self.lam, make_regularizer(self.penalty, mu))
        opts = SolverOptions(eps=self.eps, max_iter=self.max_iter, strategy=self.linsys)

        x0 = z0 = None
        if self.warm_start and hasattr(self, "coef_") and self.coef_.shape == (p.n,):
            x0 = self.coef_
            if self.dual_coef_.shape == (p.m,):
                z0 = self.dual_coef_
        x, z, report = solve_one(p, self.solver, opts, x0=x0, z0=z0,
                                 apg_max_iter=max(self.max_iter, 100000))
        if not report.converged:
            warnings.warn(f"{self.solver} did not converge: {report.message}",
                          ConvergenceWarning)
        self.coef_ = x
        self.dual_coef_ = z
        self.mu_ = 0.0 if mu is None else mu
        self.n_iter_ = report.iterations
        self.report_ = report
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = validate_data(self, X, accept_sparse="csc", dtype=np.float64, reset=False)
        return np.asarray(X @ self.coef_).ravel()
