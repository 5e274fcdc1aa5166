import warnings

import numpy as np
import pytest
import scipy.sparse as sp
from sklearn.base import clone
from sklearn.exceptions import ConvergenceWarning
from sklearn.model_selection import cross_val_score
from sklearn.utils.estimator_checks import parametrize_with_checks

from sparse_tikhonov import SparseTikhonovRegressor
from sparse_tikhonov.problem import ProblemData, kkt_residual
from sparse_tikhonov.regularizers import Regularizer


def _data(seed=0, m=60, n=150):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((m, n))
    w = np.zeros(n)
    w[:5] = [3, -2, 1.5, 1, -1]
    return X, X @ w + 0.01 * rng.standard_normal(m)


@parametrize_with_checks([SparseTikhonovRegressor(mu=0.01, max_iter=500)])
def test_sklearn_compatible(estimator, check):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        check(estimator)


def test_scalar():
    est = SparseTikhonovRegressor(lam=1.0, mu=0.5).fit([[1.0]], [1.0])
    assert est.coef_[0] == pytest.approx(0.25)
    assert est.dual_coef_[0] == pytest.approx(-0.75)
    assert est.predict([[2.0]])[0] == pytest.approx(0.5)


@pytest.mark.parametrize("solver", ["dssn", "pssn", "apg"])
@pytest.mark.parametrize("penalty", ["l1", "nonneg", "l1nonneg"])
def test_solvers_agree(solver, penalty):
    X, y = _data()
    ref = SparseTikhonovRegressor(penalty=penalty, eps=1e-9).fit(X, y)
    est = SparseTikhonovRegressor(penalty=penalty, solver=solver, eps=1e-8).fit(X, y)
    np.testing.assert_allclose(est.coef_, ref.coef_, atol=1e-5)
    reg = (Regularizer.nonneg() if penalty == "nonneg"
           else Regularizer(penalty, est.mu_))
    assert kkt_residual(ProblemData(X, y, 1.0, reg), est.coef_) <= 1e-8


def test_mu_from_mu_c():
    X, y = _data()
    est = SparseTikhonovRegressor(mu_c=0.1).fit(X, y)
    assert est.mu_ == pytest.approx(0.1 * np.max(np.abs(X.T @ y)))


def test_sparse_input_matches_dense():
    X, y = _data(1)
    X[np.abs(X) < 1.0] = 0.0
    dense = SparseTikhonovRegressor(eps=1e-10).fit(X, y)
    sparse = SparseTikhonovRegressor(eps=1e-10).fit(sp.csr_matrix(X), y)
    np.testing.assert_allclose(sparse.coef_, dense.coef_, atol=1e-9)
    np.testing.assert_allclose(sparse.predict(sp.csr_matrix(X)), dense.predict(X))


def test_params_and_clone():
    est = SparseTikhonovRegressor(lam=0.3, penalty="nonneg", solver="pssn")
    params = est.get_params()
    assert params["lam"] == 0.3 and params["penalty"] == "nonneg"
    c = clone(est)
    assert c.get_params() == params and not hasattr(c, "coef_")


def test_warm_start_reduces_work():
    X, y = _data(2)
    est = SparseTikhonovRegressor(lam=1.0, warm_start=True).fit(X, y)
    first = est.n_iter_
    est.set_params(lam=0.9).fit(X, y)
    cold = SparseTikhonovRegressor(lam=0.9).fit(X, y)
    assert est.n_iter_ <= cold.n_iter_
    np.testing.assert_allclose(est.coef_, cold.coef_, atol=1e-6)
    assert first > 0


def test_convergence_warning():
    X, y = _data(3)
    with pytest.warns(ConvergenceWarning):
        SparseTikhonovRegressor(lam=0.01, eps=1e-14, max_iter=1).fit(X, y)


def test_cross_validation():
    X, y = _data(4, m=100)
    scores = cross_val_score(SparseTikhonovRegressor(lam=0.1, mu_c=0.01), X, y, cv=3)
    assert np.all(scores > 0.9)
