import numpy as np
import pytest

from sparse_tikhonov.dssn import (dual_gradient, dual_objective, line_search,
                                  newton_direction, recover_primal, solve)
from sparse_tikhonov.exceptions import NumericalError
from sparse_tikhonov.problem import (ProblemData, SolverOptions, kkt_residual,
                                     primal_objective)
from sparse_tikhonov.regularizers import Regularizer, prox

from conftest import make_instance


def test_scalar_solve(scalar_problem):
    x, z, rep = solve(scalar_problem)
    assert rep.converged
    assert x[0] == pytest.approx(0.25, abs=1e-12)
    assert z[0] == pytest.approx(-0.75, abs=1e-12)
    assert primal_objective(scalar_problem, x) == pytest.approx(0.4375)
    assert dual_objective(scalar_problem, z) == pytest.approx(-0.4375)


@pytest.mark.parametrize("z, h", [(-0.75, -0.4375), (-1.0, -0.375), (0.0, 0.0)])
def test_dual_objective_examples(scalar_problem, z, h):
    assert dual_objective(scalar_problem, np.array([z])) == pytest.approx(h, abs=1e-14)


def test_newton_direction_example(scalar_problem):
    z = np.array([-1.0])
    g = dual_gradient(scalar_problem, z)
    assert g[0] == pytest.approx(-0.5)
    d, theta, _ = newton_direction(scalar_problem, z, g)
    assert theta.theta.tolist() == [True]
    assert d[0] == pytest.approx(0.25)


def test_line_search_unit_and_backtracked(scalar_problem):
    z = np.array([-1.0])
    g = dual_gradient(scalar_problem, z)
    alpha, z_new, h_new = line_search(scalar_problem, z, np.array([0.25]), g)
    assert alpha == 1.0 and z_new[0] == pytest.approx(-0.75)
    assert h_new == pytest.approx(dual_objective(scalar_problem, z_new))
    alpha, z_new, h_new = line_search(scalar_problem, z, np.array([4.0]), g)
    assert alpha < 1.0
    assert h_new < dual_objective(scalar_problem, z)
    assert h_new == pytest.approx(dual_objective(scalar_problem, z_new), abs=1e-13)


def test_dual_objective_lambda_scaling():
    # lam = 2, A = [1], b = 1, mu = 0.5: x* = 0.5/3, z* = x* - 1, f* = -h(z*)
    p = ProblemData(np.array([[1.0]]), np.array([1.0]), 2.0, Regularizer.l1(0.5))
    xs = 1.0 / 6.0
    f = primal_objective(p, np.array([xs]))
    assert dual_objective(p, np.array([xs - 1.0])) == pytest.approx(-f, abs=1e-14)
    x, z, rep = solve(p, SolverOptions(eps=1e-12))
    assert x[0] == pytest.approx(xs, abs=1e-12)


@pytest.mark.parametrize("kind", ["l1", "nonneg", "l1nonneg"])
@pytest.mark.parametrize("lam", [0.3, 1.0, 5.0])
def test_homogeneous_dual_form(kind, lam):
    p = make_instance(15, 30, lam=lam, kind=kind, mu_c=0.1, seed=1)
    rng = np.random.default_rng(2)
    for _ in range(5):
        z = rng.standard_normal(15)
        xp = recover_primal(p, z)
        alt = 0.5 * z @ z + p.b @ z + 0.5 * lam * xp @ xp
        assert dual_objective(p, z) == pytest.approx(alt, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("kind", ["l1", "nonneg", "l1nonneg"])
def test_weak_duality(kind):
    p = make_instance(20, 40, lam=0.5, kind=kind, mu_c=0.05, seed=3)
    rng = np.random.default_rng(4)
    for _ in range(20):
        x = np.abs(rng.standard_normal(40))
        z = rng.standard_normal(20)
        assert primal_objective(p, x) + dual_objective(p, z) >= -1e-10


@pytest.mark.parametrize("kind", ["l1", "nonneg", "l1nonneg"])
@pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
def test_gradient_central_difference(kind, lam):
    p = make_instance(12, 25, lam=lam, kind=kind, mu_c=0.1, seed=5)
    rng = np.random.default_rng(6)
    h = 1e-6
    for _ in range(10):
        z = rng.standard_normal(12)
        v = rng.standard_normal(12)
        fd = (dual_objective(p, z + h * v) - dual_objective(p, z - h * v)) / (2 * h)
        assert fd == pytest.approx(dual_gradient(p, z) @ v, rel=1e-6, abs=1e-7)


@pytest.mark.parametrize("kind", ["l1", "nonneg", "l1nonneg"])
def test_monotone_descent_and_convergence(kind):
    p = make_instance(60, 300, lam=0.5, kind=kind, seed=7)
    x, z, rep = solve(p, SolverOptions(eps=1e-8))
    assert rep.converged and rep.eta <= 1e-8
    assert kkt_residual(p, x) == pytest.approx(rep.eta)
    f = np.array(rep.gap_history) - np.array(rep.objective_history)  # = h(z^j)
    assert np.all(np.diff(f) < 1e-12 * max(1.0, abs(f[0])))
    assert len(rep.eta_history) == rep.iterations + 1
    assert len(rep.step_sizes) == rep.iterations


def test_unique_solution_from_different_starts():
    p = make_instance(40, 200, seed=8)
    rng = np.random.default_rng(9)
    x_ref, _, _ = solve(p, SolverOptions(eps=1e-10))
    for _ in range(3):
        x, _, rep = solve(p, SolverOptions(eps=1e-10), z0=10 * rng.standard_normal(40))
        assert rep.converged
        np.testing.assert_allclose(x, x_ref, atol=1e-8)


@pytest.mark.parametrize("strategy", ["chol", "smw", "cg"])
def test_strategies_agree(strategy):
    p = make_instance(50, 150, seed=10)
    x_ref, _, _ = solve(p, SolverOptions(eps=1e-10, strategy="chol"))
    x, _, rep = solve(p, SolverOptions(eps=1e-10, strategy=strategy))
    assert rep.converged
    np.testing.assert_allclose(x, x_ref, atol=1e-8)


def test_zero_rhs_gives_zero():
    rng = np.random.default_rng(11)
    p = ProblemData(rng.standard_normal((5, 8)), np.zeros(5), 1.0, Regularizer.l1(0.1))
    x, z, rep = solve(p)
    assert rep.converged and rep.iterations == 0
    np.testing.assert_array_equal(x, 0.0)


def test_iteration_cap_reported():
    p = make_instance(60, 300, seed=12)
    x, z, rep = solve(p, SolverOptions(eps=1e-14, max_iter=1))
    assert not rep.converged
    assert "cap" in rep.message and rep.iterations == 1


def test_recover_primal_matches_prox():
    p = make_instance(10, 20, lam=2.0, seed=13)
    z = np.random.default_rng(0).standard_normal(10)
    np.testing.assert_array_equal(recover_primal(p, z),
                                  prox(p.reg, 0.5, -(p.A.T @ z) / 2.0))


def test_bad_start_rejected(scalar_problem):
    with pytest.raises(NumericalError):
        solve(scalar_problem, z0=np.array([np.inf]))
