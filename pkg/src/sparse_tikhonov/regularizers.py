"""Proximal calculus for the three supported regularizers.

Every routine takes a ``scale`` argument so that the same code evaluates
``Prox_{scale * phi}``; the dual Newton method uses ``scale = 1 / lam`` and
the primal method ``scale = 1``.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError, InvalidInputError

L1 = "l1"
NONNEG = "nonneg"
L1NONNEG = "l1nonneg"
KINDS = (L1, NONNEG, L1NONNEG)


@dataclass(frozen=True)
class Regularizer:
    """One of ``mu*||x||_1``, the nonnegative-orthant indicator, or their sum.

    Parameters
    ----------
    kind : {"l1", "nonneg", "l1nonneg"}
    mu : float, optional
        Positive weight of the l1 term. Must be omitted for ``"nonneg"``.
    """

    kind: str
    mu: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown regularizer kind {self.kind!r}")
        if self.kind == NONNEG:
            if self.mu is not None:
                raise ConfigurationError("nonneg regularizer takes no mu")
            return
        if self.mu is None or not np.isfinite(self.mu) or self.mu <= 0:
            raise ConfigurationError(f"mu must be a positive real, got {self.mu!r}")
        object.__setattr__(self, "mu", float(self.mu))

    @classmethod
    def l1(cls, mu):
        return cls(L1, mu)

    @classmethod
    def nonneg(cls):
        return cls(NONNEG)

    @classmethod
    def l1_nonneg(cls, mu):
        return cls(L1NONNEG, mu)

    @property
    def has_l1(self):
        return self.kind in (L1, L1NONNEG)

    @property
    def has_indicator(self):
        return self.kind in (NONNEG, L1NONNEG)

    def __call__(self, x):
        return reg_value(self, x)


@dataclass(frozen=True)
class JacobianDiag:
    """0/1 diagonal of a generalized-Jacobian element of a prox map."""

    theta: np.ndarray
    active: np.ndarray = field(init=False, repr=False)
    inactive: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=bool)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "active", np.flatnonzero(theta))
        object.__setattr__(self, "inactive", np.flatnonzero(~theta))

    def __len__(self):
        return self.theta.size

    def as_float(self):
        return self.theta.astype(float)


def _check(scale, u):
    if not scale > 0:
        raise ConfigurationError(f"scale must be positive, got {scale!r}")
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise InvalidInputError("prox argument contains non-finite entries")
    return u


def prox(reg, scale, u):
    """Proximal point of ``scale * reg`` at ``u``, coordinate-wise."""
    u = _check(scale, u)
    if reg.kind == NONNEG:
        return np.maximum(u, 0.0)
    t = scale * reg.mu
    if reg.kind == L1:
        return np.sign(u) * np.maximum(np.abs(u) - t, 0.0)
    # soft-threshold composed with the orthant projection
    return np.maximum(np.maximum(u, 0.0) - t, 0.0)


def prox_conjugate(reg, scale, u):
    """Proximal point of the conjugate of ``scale * reg`` via the Moreau identity."""
    u = _check(scale, u)
    return u - prox(reg, scale, u)


def reg_value(reg, x):
    """Value of the regularizer; ``inf`` outside the orthant when constrained."""
    x = np.asarray(x, dtype=float)
    if reg.has_indicator and np.any(x < 0):
        return np.inf
    if reg.has_l1:
        return reg.mu * float(np.abs(x).sum())
    return 0.0


def moreau_envelope(reg, scale, u):
    """Moreau envelope ``min_x scale*reg(x) + 0.5*||x - u||^2``."""
    u = _check(scale, u)
    p = prox(reg, scale, u)
    val = 0.5 * float(np.dot(p - u, p - u))
    if reg.has_l1:
        # p is feasible, so only the l1 part contributes
        val += scale * reg.mu * float(np.abs(p).sum())
    return val


def bsub_diag(reg, scale, u):
    """Select the 0/1 Jacobian element of ``Prox_{scale*reg}`` at ``u``.

    Ties at the breakpoints (``|u_i| == t`` or ``u_i == 0``) take 0.
    """
    u = _check(scale, u)
    if reg.kind == NONNEG:
        return JacobianDiag(u > 0)
    t = scale * reg.mu
    if reg.kind == L1:
        return JacobianDiag(np.abs(u) > t)
    # theta_l1 evaluated at max(u, 0) times theta_plus at u; collapses to u > t
    v = np.maximum(u, 0.0)
    return JacobianDiag((np.abs(v) > t) & (u > 0))
