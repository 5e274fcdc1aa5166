"""Reduced Newton systems and their solvers.

The dual system is ``(I_m + A_I A_I^T / lam) d = rhs``; the primal system is
the block-eliminated form of ``(I - Theta((1 - lam) I - A^T A)) d = -psi``.
Both operators are symmetric positive definite, so Cholesky, the
Sherman-Morrison-Woodbury identity and plain conjugate gradients all apply.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .exceptions import ConfigurationError, NumericalError

CHOL = "chol"
SMW = "smw"
CG = "cg"
AUTO = "auto"
STRATEGIES = (CHOL, SMW, CG, AUTO)

# Largest system we are willing to factor densely.
DENSE_LIMIT = 4000
CG_MAXIT_CAP = 10000


@dataclass
class CGReport:
    iterations: int = 0
    final_residual_norm: float = 0.0
    converged: bool = True
    strategy: str = ""


def select_strategy(m, k):
    """Pick a dual-system strategy from the row count and active-set size."""
    if m < 1 or k < 0:
        raise ConfigurationError(f"invalid system size m={m}, k={k}")
    if m <= min(k, DENSE_LIMIT):
        return CHOL
    if k <= min(m / 4, DENSE_LIMIT):
        return SMW
    return CG


def columns(A, idx):
    """Column submatrix ``A[:, idx]``; sparse input is returned as dense."""
    sub = A[:, idx]
    if sp.issparse(sub):
        return sub.toarray()
    return np.asarray(sub)


def _gram_rows(B):
    # B B^T as a dense array
    G = B @ B.T
    return G.toarray() if sp.issparse(G) else np.asarray(G)


def _cholesky_solve(M, rhs, strategy):
    try:
        c = scipy.linalg.cho_factor(M, lower=True, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"{strategy}: Cholesky factorization failed ({exc})",
                             strategy=strategy) from exc
    out = scipy.linalg.cho_solve(c, rhs, check_finite=False)
    if not np.all(np.isfinite(out)):
        raise NumericalError(f"{strategy}: non-finite solution", strategy=strategy)
    return out


def conjugate_gradient(matvec, rhs, tol, maxit, x0=None):
    """Unpreconditioned CG on an SPD operator.

    Stops when the residual 2-norm is at most ``tol`` (absolute). Returns the
    iterate with the smallest residual seen and a :class:`CGReport`.
    """
    x = np.zeros_like(rhs) if x0 is None else np.array(x0, dtype=float)
    r = rhs - matvec(x) if x0 is not None else rhs.copy()
    rr = float(r @ r)
    res = np.sqrt(rr)
    best_x, best_res = x.copy(), res
    it = 0
    p = r.copy()
    while res > tol and it < maxit:
        q = matvec(p)
        pq = float(p @ q)
        if not pq > 0:
            break
        alpha = rr / pq
        x += alpha * p
        r -= alpha * q
        rr_new = float(r @ r)
        res = np.sqrt(rr_new)
        it += 1
        if res < best_res:
            best_x, best_res = x.copy(), res
        p = r + (rr_new / rr) * p
        rr = rr_new
    if not np.isfinite(best_res):
        raise NumericalError("cg: non-finite residual", strategy=CG)
    return best_x, CGReport(it, float(best_res), bool(best_res <= tol), CG)


def _cg_maxit(size, cg_maxit):
    if cg_maxit is None:
        cg_maxit = 10 * size
    return int(min(max(cg_maxit, 1), CG_MAXIT_CAP))


def solve_dual_system(A_I, lam, rhs, strategy=AUTO, cg_tol=1e-10, cg_maxit=None):
    """Solve ``(I_m + A_I A_I^T / lam) d = rhs``.

    Parameters
    ----------
    A_I : (m, k) array or sparse matrix
        Active columns of the design matrix; ``k = 0`` is allowed.
    lam : float
    rhs : (m,) array
    strategy : {"auto", "chol", "smw", "cg"}
    cg_tol : float
        Absolute residual target for CG; ignored by direct strategies.
    cg_maxit : int, optional
        Defaults to ``10 * m``, capped at 10000.

    Returns
    -------
    d : (m,) array
    report : CGReport
    """
    if not lam > 0:
        raise ConfigurationError(f"lam must be positive, got {lam!r}")
    if strategy not in STRATEGIES:
        raise ConfigurationError(f"unknown strategy {strategy!r}")
    rhs = np.asarray(rhs, dtype=float)
    m, k = A_I.shape
    if k == 0:
        return rhs.copy(), CGReport(strategy=strategy)
    if strategy == AUTO:
        strategy = select_strategy(m, k)
    inv = 1.0 / lam

    if strategy == CHOL:
        M = inv * _gram_rows(A_I)
        M[np.diag_indices_from(M)] += 1.0
        return _cholesky_solve(M, rhs, CHOL), CGReport(strategy=CHOL)

    if strategy == SMW:
        K = inv * _gram_rows(A_I.T)
        K[np.diag_indices_from(K)] += 1.0
        t = _cholesky_solve(K, np.asarray(A_I.T @ rhs).ravel(), SMW)
        d = rhs - inv * np.asarray(A_I @ t).ravel()
        return d, CGReport(strategy=SMW)

    def matvec(v):
        return v + inv * np.asarray(A_I @ (A_I.T @ v)).ravel()

    return conjugate_gradient(matvec, rhs, cg_tol, _cg_maxit(m, cg_maxit))


def solve_primal_system(A, active, inactive, lam, psi, strategy=AUTO,
                        cg_tol=1e-10, cg_maxit=None):
    """Block-eliminated primal Newton system.

    The inactive block is fixed at ``d[inactive] = -psi[inactive]`` and the
    active block solves
    ``(lam I + A_I^T A_I) d_I = -psi_I - A_I^T A_{I0} d_{I0}``.

    ``"chol"`` factors the ``|I| x |I|`` matrix, ``"smw"`` factors the
    ``m x m`` matrix ``lam I + A_I A_I^T`` through the Woodbury identity, and
    ``"cg"`` iterates on ``v -> lam v + A_I^T (A_I v)``.
    """
    if not lam > 0:
        raise ConfigurationError(f"lam must be positive, got {lam!r}")
    if strategy not in STRATEGIES:
        raise ConfigurationError(f"unknown strategy {strategy!r}")
    psi = np.asarray(psi, dtype=float)
    active = np.asarray(active, dtype=np.intp)
    inactive = np.asarray(inactive, dtype=np.intp)
    n = psi.size
    if active.size + inactive.size != n:
        raise ConfigurationError("active and inactive sets must partition the columns")
    d = np.empty(n)
    d[inactive] = -psi[inactive]
    k = active.size
    if k == 0:
        return d

    m = A.shape[0]
    A_I = columns(A, active)
    rhs = -psi[active]
    if inactive.size:
        u = A[:, inactive] @ d[inactive]
        rhs -= A_I.T @ np.asarray(u).ravel()

    if strategy == AUTO:
        if m < k and m <= DENSE_LIMIT:
            strategy = SMW
        elif k <= DENSE_LIMIT:
            strategy = CHOL
        else:
            strategy = CG

    if strategy == CHOL:
        M = A_I.T @ A_I
        M[np.diag_indices_from(M)] += lam
        d[active] = _cholesky_solve(M, rhs, CHOL)
    elif strategy == SMW:
        # (lam I + B^T B)^{-1} = (I - B^T (lam I + B B^T)^{-1} B) / lam
        S = A_I @ A_I.T
        S[np.diag_indices_from(S)] += lam
        t = _cholesky_solve(S, A_I @ rhs, SMW)
        d[active] = (rhs - A_I.T @ t) / lam
    else:
        def matvec(v):
            return lam * v + A_I.T @ (A_I @ v)

        d[active], _ = conjugate_gradient(matvec, rhs, cg_tol, _cg_maxit(k, cg_maxit))
    return d
