"""Accelerated proximal gradient and brute-force reference solvers.

Both are deliberately simple: they exist to cross-check the Newton solvers,
not to compete with them.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, UnsupportedSizeError
from .problem import SolveReport, kkt_residual, primal_objective
from .regularizers import prox


@dataclass
class LipschitzEstimate:
    L: float
    power_iterations: int


def lipschitz_constant(A, lam, rtol=1e-6, maxit=10000, seed=0):
    """Upper estimate of ``sigma_max(A)**2 + lam`` by power iteration on ``A^T A``."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    s = 0.0
    it = 0
    for it in range(1, maxit + 1):
        w = A.T @ (A @ v)
        s_new = float(np.linalg.norm(w))
        if s_new == 0.0:
            break
        v = w / s_new
        if abs(s_new - s) <= rtol * s_new:
            s = s_new
            break
        s = s_new
    return LipschitzEstimate(1.01 * s + lam, it)


def apg_solve(p, eps=1e-8, max_iter=100000, x0=None):
    """FISTA with function-value restart.

    Parameters
    ----------
    p : ProblemData
    eps : float
        Stop once the KKT residual is at most ``eps``.
    max_iter : int
    x0 : (n,) array, optional

    Returns
    -------
    x : (n,) array
    report : SolveReport
        Histories are recorded every iteration; ``converged`` is False when
        ``max_iter`` is exhausted.
    """
    if not eps > 0:
        raise ConfigurationError("eps must be positive")
    A, b, lam = p.A, p.b, p.lam
    L = lipschitz_constant(A, lam).L
    step = 1.0 / L

    report = SolveReport(solver="apg")
    report.start()
    x = np.zeros(p.n) if x0 is None else np.array(x0, dtype=float)
    x = prox(p.reg, step, x) if p.reg.has_indicator else x
    f = primal_objective(p, x)
    y = x.copy()
    t = 1.0
    j = 0
    while True:
        eta = kkt_residual(p, x)
        report.eta_history.append(eta)
        report.objective_history.append(f)
        if eta <= eps:
            report.converged = True
            report.message = "kkt residual below tolerance"
            break
        if j >= max_iter:
            report.message = f"iteration cap {max_iter} reached"
            break
        grad = A.T @ (A @ y - b) + lam * y
        x_new = prox(p.reg, step, y - step * grad)
        f_new = primal_objective(p, x_new)
        if f_new > f and t > 1.0:
            # restart momentum from the last accepted point; a plain
            # proximal-gradient step (t == 1) is always accepted
            t = 1.0
            y = x.copy()
            report.step_sizes.append(0.0)
            j += 1
            continue
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        y = x_new + ((t - 1.0) / t_new) * (x_new - x)
        x, f, t = x_new, f_new, t_new
        report.step_sizes.append(step)
        j += 1

    report.iterations = j
    report.stop()
    return x, report


def grid_oracle(p, resolution=10001, budget=1_000_000):
    """Brute-force minimizer of the primal objective for ``n <= 3``.

    The search box has half-width ``2*||b|| / sqrt(lam)`` per coordinate,
    which contains the minimizer because ``f(x*) <= f(0)``; it is clipped to
    ``[0, inf)`` when the orthant constraint is present. For ``n = 1`` the
    grid is searched exhaustively at the requested resolution. For larger
    ``n`` an exhaustive coarse grid within ``budget`` points is zoomed
    until the spacing matches ``resolution``. A final coordinate pass over
    a ``resolution``-point line grid around each coordinate polishes the
    result.
    """
    n = p.n
    if n > 3:
        raise UnsupportedSizeError(f"grid oracle supports n <= 3, got n={n}")
    if resolution < 1001:
        raise ConfigurationError("resolution must be at least 1001")
    A, b, lam = _dense(p.A), p.b, p.lam
    R = 2.0 * float(np.linalg.norm(b)) / np.sqrt(lam)
    if R == 0.0:
        return np.zeros(n)
    lo = np.full(n, 0.0 if p.reg.has_indicator else -R)
    hi = np.full(n, R)
    target = (hi[0] - lo[0]) / (resolution - 1)

    def values(X, chunk=100_000):
        # objective at each row of X, evaluated in chunks to bound memory
        out = np.empty(X.shape[0])
        for s in range(0, X.shape[0], chunk):
            Xc = X[s:s + chunk]
            res = Xc @ A.T - b
            v = 0.5 * np.einsum("ij,ij->i", res, res) + 0.5 * lam * np.einsum("ij,ij->i", Xc, Xc)
            if p.reg.has_l1:
                v += p.reg.mu * np.abs(Xc).sum(axis=1)
            out[s:s + chunk] = v
        return out

    per_dim = min(resolution, int(budget ** (1.0 / n)))
    floor = 0.0 if p.reg.has_indicator else -np.inf
    h = (hi[0] - lo[0]) / (per_dim - 1)
    while True:
        axes = [np.arange(lo[i], hi[i] + 0.5 * h, h) for i in range(n)]
        X = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
        best = X[np.argmin(values(X))]
        if h <= target * (1 + 1e-9):
            break
        # zoom onto a window of +-10 cells around the current best
        lo = np.maximum(best - 10 * h, floor)
        hi = best + 10 * h
        h = max(20 * h / (per_dim - 1), target)

    x = best.copy()
    line = np.linspace(-10 * target, 10 * target, resolution)
    for i in range(n):
        cand = np.repeat(x[None, :], line.size, axis=0)
        cand[:, i] = x[i] + line
        if p.reg.has_indicator:
            cand = cand[cand[:, i] >= 0]
        x = cand[np.argmin(values(cand))]
    return x


def _dense(A):
    return A.toarray() if hasattr(A, "toarray") else np.asarray(A)
