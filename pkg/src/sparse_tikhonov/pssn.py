"""Primal semismooth Newton method on the natural residual.

Solves ``psi(x) = x - prox(x - lam*x - A^T(Ax - b)) = 0`` with Newton steps
on ``J = I - Theta((1 - lam) I - A^T A)`` and an Armijo search on the merit
function ``r(x) = ||psi(x)||^2``. Unlike the dual method this iteration has
no global convergence guarantee, so failures are reported, not raised.
"""

from dataclasses import dataclass

import numpy as np

from .dssn import dual_objective
from .exceptions import LineSearchError
from .linsys import solve_primal_system
from .problem import SolveReport, SolverOptions, primal_objective
from .regularizers import JacobianDiag, bsub_diag, prox


@dataclass
class MeritState:
    x: np.ndarray
    psi: np.ndarray
    r: float
    y: np.ndarray
    theta: JacobianDiag
    residual: np.ndarray  # Ax - b, reused for the duality gap

    @property
    def eta(self):
        return float(np.sqrt(self.r))


def psi(p, x):
    """Evaluate the natural residual and its Jacobian selection at ``x``."""
    x = np.asarray(x, dtype=float)
    res = p.A @ x - p.b
    y = x - p.lam * x - p.A.T @ res
    ps = x - prox(p.reg, 1.0, y)
    return MeritState(x, ps, float(ps @ ps), y, bsub_diag(p.reg, 1.0, y), res)


def _jacobian_tmatvec(p, theta, v):
    # J^T v = v - M (theta * v), M = (1 - lam) I - A^T A (symmetric)
    tv = theta.as_float() * v
    return v - (1.0 - p.lam) * tv + p.A.T @ (p.A @ tv)


def jacobian_matvec(p, theta, v):
    """``J v`` for ``J = I - Diag(theta)((1 - lam) I - A^T A)``."""
    v = np.asarray(v, dtype=float)
    Mv = (1.0 - p.lam) * v - p.A.T @ (p.A @ v)
    return v - theta.as_float() * Mv


def pssn_direction(p, ms, strategy="auto", cg_tol=1e-12, cg_maxit=None):
    """Newton direction ``J d = -psi`` through the block-reduced system."""
    return solve_primal_system(p.A, ms.theta.active, ms.theta.inactive, p.lam,
                               ms.psi, strategy, cg_tol=cg_tol, cg_maxit=cg_maxit)


def pssn_merit_gradient(p, ms):
    """Slope vector ``2 J^T psi`` used in place of ``grad r``.

    Equal to the gradient of ``r`` wherever ``psi`` is differentiable.
    """
    return 2.0 * _jacobian_tmatvec(p, ms.theta, ms.psi)


def _dual_gap(p, res, f):
    # z = Ax - b is the dual point paired with x
    return f + dual_objective(p, res)


def pssn_solve(p, opts=None, x0=None):
    """Run the primal semismooth Newton method.

    Parameters
    ----------
    p : ProblemData
    opts : SolverOptions, optional
    x0 : (n,) array, optional
        Starting point, zero by default.

    Returns
    -------
    x : (n,) array
    report : SolveReport
        ``converged`` is False when the iteration cap is hit or the line
        search fails; ``message`` says which.
    """
    opts = opts or SolverOptions()
    x = np.zeros(p.n) if x0 is None else np.array(x0, dtype=float)
    report = SolveReport(solver="pssn")
    report.start()
    ms = psi(p, x)
    j = 0
    while True:
        f = primal_objective(p, x)
        report.eta_history.append(ms.eta)
        report.objective_history.append(f)
        report.gap_history.append(_dual_gap(p, ms.residual, f))
        if opts.keep_iterates:
            report.iterates.append(x.copy())
        if ms.eta <= opts.eps:
            report.converged = True
            report.message = "kkt residual below tolerance"
            break
        if j >= opts.max_iter:
            report.message = f"iteration cap {opts.max_iter} reached"
            break

        tol = min(opts.eta_bar, ms.eta ** (1.0 + opts.zeta))
        d = pssn_direction(p, ms, opts.strategy, cg_tol=tol, cg_maxit=opts.cg_maxit)
        g = pssn_merit_gradient(p, ms)
        report.grad_norm_history.append(float(np.linalg.norm(g)))
        report.active_set_sizes.append(int(ms.theta.active.size))
        slope = float(g @ d)
        if not slope < 0:
            d = -g
            slope = -float(g @ g)
            if not slope < 0:
                report.message = "merit slope is zero at a non-solution"
                break
        try:
            alpha, ms = _merit_search(p, x, d, ms.r, slope, opts)
        except LineSearchError as exc:
            report.message = f"line search failed: {exc}"
            break
        report.step_sizes.append(alpha)
        x = ms.x
        j += 1

    report.iterations = j
    report.stop()
    return x, report


def _merit_search(p, x, d, r0, slope, opts):
    alpha = 1.0
    for _ in range(opts.max_backtracks + 1):
        ms = psi(p, x + alpha * d)
        if ms.r <= r0 + opts.varrho * alpha * slope:
            return alpha, ms
        alpha *= opts.beta
    raise LineSearchError(
        f"no sufficient merit decrease after {opts.max_backtracks} backtracks")
