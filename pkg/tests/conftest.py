import numpy as np
import pytest

from sparse_tikhonov.datasets import compute_mu
from sparse_tikhonov.problem import ProblemData
from sparse_tikhonov.regularizers import Regularizer

ACCEPTANCE_LINES = []


def make_instance(m, n, lam=1.0, kind="l1", mu_c=1e-3, seed=0, k=20, noise=0.01):
    """Gaussian design, ``k``-sparse planted signal, Gaussian noise."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    x0 = np.zeros(n)
    x0[rng.choice(n, size=min(k, n), replace=False)] = rng.standard_normal(min(k, n))
    b = A @ x0 + noise * rng.standard_normal(m)
    if kind == "nonneg":
        reg = Regularizer.nonneg()
    else:
        reg = Regularizer(kind, compute_mu(mu_c, A, b))
    return ProblemData(A, b, lam, reg)


def grid_prox_1d(kind, mu, scale, u, h=1e-4, width=None):
    """Per-coordinate brute-force prox on a uniform grid of spacing ``h``."""
    out = np.empty_like(u)
    for i, ui in enumerate(u):
        w = abs(ui) + 1.0 if width is None else width
        xs = np.arange(-w, w + h / 2, h)
        val = 0.5 * (xs - ui) ** 2
        if kind in ("l1", "l1nonneg"):
            val = val + scale * mu * np.abs(xs)
        if kind in ("nonneg", "l1nonneg"):
            val = np.where(xs < 0, np.inf, val)
        out[i] = xs[np.argmin(val)]
    return out


@pytest.fixture
def scalar_problem():
    """A = [1], b = 1, lam = 1, mu = 0.5: x* = 0.25, z* = -0.75, f* = 0.4375."""
    return ProblemData(np.array([[1.0]]), np.array([1.0]), 1.0, Regularizer.l1(0.5))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
