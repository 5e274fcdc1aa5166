"""Dual semismooth Newton method.

The dual of the Tikhonov-regularized problem is the strongly convex, once
continuously differentiable program

    h(z) = 0.5*||z||^2 - lam * env(w) + 0.5*lam*||w||^2 + b^T z,
    w    = -A^T z / lam,

where ``env`` is the Moreau envelope of ``reg / lam``. Its gradient is
``z + b - A prox(w)`` and the primal solution is recovered as ``prox(w)``.
Newton steps use the generalized Jacobian ``I + A_I A_I^T / lam``.
"""

import numpy as np

from .exceptions import LineSearchError, NumericalError
from .linsys import solve_dual_system
from .problem import SolveReport, SolverOptions, kkt_residual, primal_objective
from .regularizers import bsub_diag, moreau_envelope, prox


def _h_from_atz(p, z, atz):
    # atz = A^T z; shares the product between h and the line search
    lam = p.lam
    w = -atz / lam
    val = (0.5 * float(z @ z) - lam * moreau_envelope(p.reg, 1.0 / lam, w)
           + 0.5 * lam * float(w @ w) + float(p.b @ z))
    if not np.isfinite(val):
        raise NumericalError("dual objective is not finite")
    return val


def dual_objective(p, z):
    """Dual objective ``h(z)``; ``-h(z)`` lower-bounds the primal optimum."""
    z = np.asarray(z, dtype=float)
    return _h_from_atz(p, z, p.A.T @ z)


def dual_gradient(p, z):
    """``grad h(z) = z + b - A prox(-A^T z / lam)``."""
    z = np.asarray(z, dtype=float)
    g = z + p.b - p.A @ recover_primal(p, z)
    if not np.all(np.isfinite(g)):
        raise NumericalError("dual gradient is not finite")
    return g


def recover_primal(p, z):
    """Primal point ``prox_{reg/lam}(-A^T z / lam)`` paired with ``z``."""
    z = np.asarray(z, dtype=float)
    return prox(p.reg, 1.0 / p.lam, -(p.A.T @ z) / p.lam)


def newton_direction(p, z, g, opts=None):
    """Semismooth Newton direction for the dual.

    Returns
    -------
    d : ndarray
        Solution of ``(I + A_I A_I^T / lam) d = -g`` up to the residual bound
        ``min(eta_bar, ||g||**(1 + zeta))``.
    theta : JacobianDiag
    cg : CGReport
    """
    opts = opts or SolverOptions()
    z = np.asarray(z, dtype=float)
    g = np.asarray(g, dtype=float)
    theta = bsub_diag(p.reg, 1.0 / p.lam, -(p.A.T @ z) / p.lam)
    gnorm = float(np.linalg.norm(g))
    tol = min(opts.eta_bar, gnorm ** (1.0 + opts.zeta))
    A_I = p.A[:, theta.active]
    d, cg = solve_dual_system(A_I, p.lam, -g, opts.strategy, cg_tol=tol,
                              cg_maxit=opts.cg_maxit)
    return d, theta, cg


def _armijo(p, z, d, atz, atd, slope, opts):
    """Smallest ``l >= 0`` with ``h(z + beta^l d) - h(z) <= varrho beta^l <g, d>``.

    For positively homogeneous regularizers ``h(z) = 0.5||z||^2 + b^T z +
    0.5*lam*||prox(w)||^2``, so the decrease is accumulated term by term and
    stays accurate even when it is far below the magnitude of ``h``.
    """
    lam = p.lam
    inv = 1.0 / lam
    w0 = -inv * atz
    dw = -inv * atd
    p0 = prox(p.reg, inv, w0)
    act0 = bsub_diag(p.reg, inv, w0).theta
    zd, dd, bd = float(z @ d), float(d @ d), float(p.b @ d)
    alpha = 1.0
    for _ in range(opts.max_backtracks + 1):
        w1 = w0 + alpha * dw
        p1 = prox(p.reg, inv, w1)
        # on a shared linear piece of the prox the change is exactly alpha*dw
        dp = p1 - p0
        same = act0 & bsub_diag(p.reg, inv, w1).theta & (np.sign(w0) == np.sign(w1))
        dp[same] = alpha * dw[same]
        dec = (alpha * (zd + bd) + 0.5 * alpha * alpha * dd
               + 0.5 * lam * float(np.dot(dp, 2.0 * p0 + dp)))
        if not np.isfinite(dec):
            raise NumericalError("dual objective is not finite")
        if dec <= opts.varrho * alpha * slope:
            return alpha, dec
        alpha *= opts.beta
    raise LineSearchError(
        f"no sufficient decrease after {opts.max_backtracks} backtracks "
        f"(slope {slope:.3e})")


def line_search(p, z, d, g, opts=None):
    """Armijo backtracking along ``d``.

    Returns
    -------
    alpha : float
        Accepted step ``beta**l``.
    z_new : ndarray
    h_new : float
    """
    opts = opts or SolverOptions()
    z = np.asarray(z, dtype=float)
    d = np.asarray(d, dtype=float)
    atz = p.A.T @ z
    slope = float(np.dot(g, d))
    alpha, dec = _armijo(p, z, d, atz, p.A.T @ d, slope, opts)
    return alpha, z + alpha * d, _h_from_atz(p, z, atz) + dec


def solve(p, opts=None, z0=None):
    """Run the dual semismooth Newton method.

    Parameters
    ----------
    p : ProblemData
    opts : SolverOptions, optional
    z0 : (m,) array, optional
        Starting dual point, zero by default.

    Returns
    -------
    x : (n,) array
        Primal iterate recovered from the final dual point.
    z : (m,) array
    report : SolveReport
        ``converged`` is True iff the KKT residual reached ``opts.eps``.
        Hitting ``max_iter`` or a failed line search returns the last
        iterate with ``converged=False`` and an explanatory ``message``.
    """
    opts = opts or SolverOptions()
    A, b, lam = p.A, p.b, p.lam
    inv = 1.0 / lam
    z = np.zeros(p.m) if z0 is None else np.array(z0, dtype=float)
    if z.shape != (p.m,) or not np.all(np.isfinite(z)):
        raise NumericalError("z0 must be a finite vector of length m")

    report = SolveReport(solver="dssn")
    report.start()
    atz = A.T @ z
    h = _h_from_atz(p, z, atz)
    j = 0
    while True:
        w = -inv * atz
        x = prox(p.reg, inv, w)
        g = z + b - A @ x
        eta = kkt_residual(p, x)
        f = primal_objective(p, x)
        report.eta_history.append(eta)
        report.objective_history.append(f)
        report.gap_history.append(f + h)
        report.grad_norm_history.append(float(np.linalg.norm(g)))
        if opts.keep_iterates:
            report.iterates.append(z.copy())
        if eta <= opts.eps:
            report.converged = True
            report.message = "kkt residual below tolerance"
            break
        if j >= opts.max_iter:
            report.message = f"iteration cap {opts.max_iter} reached"
            break

        d, theta, cg = newton_direction(p, z, g, opts)
        report.active_set_sizes.append(int(theta.active.size))
        report.cg_iterations.append(cg.iterations)
        slope = float(g @ d)
        if not slope < 0:
            report.message = f"non-descent direction (slope {slope:.3e})"
            break
        try:
            alpha, _ = _armijo(p, z, d, atz, A.T @ d, slope, opts)
        except LineSearchError as exc:
            report.message = f"line search failed: {exc}"
            break
        report.step_sizes.append(alpha)
        z = z + alpha * d
        atz = A.T @ z
        h = _h_from_atz(p, z, atz)
        j += 1

    report.iterations = j
    report.stop()
    return x, z, report
