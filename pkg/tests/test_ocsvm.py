import math

import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from ocal.kernel import gram
from ocal.ocsvm import OneClassSVM

from qp_oracle import dual_objective, kkt_violation, solve_dual


def fit_random(seed, n, d, nu, gamma):
    rng = np.random.default_rng(seed)
    X = rng.normal(0.0, 1.5, size=(n, d))
    return X, OneClassSVM(nu=nu, gamma=gamma).fit(X)


def test_single_sample_analytic_solution():
    # the constraint set {sum(a)=1, 0<=a<=1/nu} is the single point a=1,
    # so rho = K(x1, x1) = 1 and the training point sits on the boundary
    X = np.array([[2.0, -1.0]])
    model = OneClassSVM(nu=0.4, gamma=0.8).fit(X)
    assert model.alpha_.tolist() == [1.0]
    assert model.rho_ == pytest.approx(1.0, abs=1e-12)
    assert model.decision_values(X)[0] == pytest.approx(0.0, abs=1e-12)


def test_single_sample_far_query_is_outlier_side():
    X = np.array([[0.0, 0.0]])
    model = OneClassSVM(nu=0.4, gamma=0.8).fit(X)
    dv = model.decision_values(np.array([[50.0, 50.0]]))[0]
    assert dv == pytest.approx(1.0, abs=1e-9)
    assert dv > 0.0


def test_two_samples_nu_one_forced_point():
    # box bound 1/(nu*n) = 0.5 and sum(a) = 1 leave a single feasible point
    X = np.array([[0.0], [1.0]])
    model = OneClassSVM(nu=1.0, gamma=1.0).fit(X)
    assert model.alpha_.tolist() == [0.5, 0.5]
    assert model.kkt_violation_ == 0.0


@pytest.mark.parametrize("nu", [0.1, 0.3, 0.5, 1.0])
def test_model_invariants_after_training(nu):
    for seed in range(3):
        _, model = fit_random(seed, n=25, d=3, nu=nu, gamma=0.7)
        box = 1.0 / (nu * 25)
        assert model.alpha_.sum() == pytest.approx(1.0, abs=1e-6)
        assert model.alpha_.min() > 0.0
        assert model.alpha_.max() <= box + 1e-9
        assert model.alpha_.shape[0] == model.support_vectors_.shape[0]


@pytest.mark.parametrize("seed,nu,gamma", [(0, 0.1, 0.5), (1, 0.5, 0.5), (2, 0.1, 2.0), (3, 0.5, 2.0)])
def test_dual_objective_matches_projected_gradient_oracle(seed, nu, gamma):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 21))
    X = rng.normal(0.0, 1.5, size=(n, int(rng.integers(1, 6))))
    model = OneClassSVM(nu=nu, gamma=gamma).fit(X)
    box = 1.0 / (nu * n)
    Q = gram(X, X, gamma)
    reference = solve_dual(Q, box)
    assert abs(model.dual_objective_ - dual_objective(Q, reference)) < 1e-6
    assert model.kkt_violation_ < 1e-6

    # independent KKT recheck from the pruned coefficients
    alpha_full = np.zeros(n)
    alpha_full[model.support_] = model.alpha_
    assert kkt_violation(Q, alpha_full, box) < 1e-6


def test_free_support_vectors_sit_on_the_boundary():
    X, model = fit_random(5, n=40, d=2, nu=0.3, gamma=0.6)
    box = 1.0 / (0.3 * 40)
    free = (model.alpha_ > 1e-9) & (model.alpha_ < box - 1e-9)
    assert free.any()
    dv = model.decision_values(model.support_vectors_[free])
    assert np.abs(dv).max() < 1e-5


def test_batch_evaluation_matches_pointwise():
    X, model = fit_random(6, n=15, d=3, nu=0.2, gamma=1.1)
    queries = np.random.default_rng(9).normal(size=(7, 3))
    batch = model.decision_values(queries)
    single = [model.decision_values(row.reshape(1, -1))[0] for row in queries]
    assert np.allclose(batch, single, atol=0.0, rtol=0.0)


def test_decision_values_lipschitz_smoke():
    # with sum(a) = 1 the DV gradient norm is at most sqrt(2 * gamma / e)
    gamma = 0.9
    X, model = fit_random(7, n=30, d=2, nu=0.2, gamma=gamma)
    bound = math.sqrt(2.0 * gamma * math.exp(-1.0))
    rng = np.random.default_rng(13)
    A = rng.normal(0.0, 2.0, size=(64, 2))
    B = A + rng.normal(0.0, 0.5, size=(64, 2))
    gaps = np.abs(model.decision_values(A) - model.decision_values(B))
    steps = np.linalg.norm(A - B, axis=1)
    assert np.all(gaps <= bound * steps + 1e-12)


def test_nu_property_statistical_smoke():
    nu = 0.3
    rng = np.random.default_rng(21)
    X = rng.normal(size=(200, 2))
    model = OneClassSVM(nu=nu, gamma=0.5).fit(X)
    outside = float((model.decision_values(X) > 0.0).mean())
    sv_fraction = model.alpha_.shape[0] / 200.0
    assert outside <= nu + 0.05
    assert sv_fraction >= nu - 0.05


def test_nu_validation():
    X = np.zeros((3, 2))
    for bad in (0.0, -0.1, 1.5, float("nan")):
        with pytest.raises(ValueError):
            OneClassSVM(nu=bad).fit(X)


def test_nonfinite_features_rejected():
    with pytest.raises(ValueError):
        OneClassSVM().fit(np.array([[0.0], [float("inf")]]))


def test_dimension_mismatch_on_decision():
    _, model = fit_random(8, n=10, d=3, nu=0.5, gamma=1.0)
    with pytest.raises(ValueError):
        model.decision_values(np.zeros((2, 2)))


def test_requires_fit_before_decision():
    with pytest.raises(NotFittedError):
        OneClassSVM().decision_values(np.zeros((1, 2)))


def test_json_round_trip_is_exact():
    X, model = fit_random(10, n=22, d=4, nu=0.25, gamma=0.35)
    clone = OneClassSVM.from_json(model.to_json())
    assert clone.rho_ == model.rho_
    assert clone.alpha_.tolist() == model.alpha_.tolist()
    assert clone.support_vectors_.tolist() == model.support_vectors_.tolist()
    queries = np.random.default_rng(1).normal(size=(5, 4))
    assert clone.decision_values(queries).tolist() == model.decision_values(queries).tolist()


def test_predict_marks_far_points_as_outliers():
    rng = np.random.default_rng(12)
    X = rng.normal(size=(60, 2))
    model = OneClassSVM(nu=0.1, gamma=0.5).fit(X)
    marks = model.predict(np.array([[0.0, 0.0], [25.0, 25.0]]))
    assert marks.tolist() == [0, 1]


def test_get_params_round_trip():
    model = OneClassSVM(nu=0.2, gamma=3.0)
    params = model.get_params()
    assert params["nu"] == 0.2 and params["gamma"] == 3.0
    rebuilt = OneClassSVM(**params)
    assert rebuilt.get_params() == params
