"""Estimator-wrapper tests: fit/predict surface and sklearn conventions."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from sobolev_pqc.estimators import IntervalScaler, PQCRegressor


def linear_data(n=10):
    X = np.linspace(-np.pi, np.pi, n)
    return X, X / (2.0 * np.pi)


def test_interval_scaler_maps_onto_named_interval():
    X, _ = linear_data()
    scaler = IntervalScaler("full").fit(X)
    out = scaler.transform(X)
    assert out.min() == -np.pi and out.max() == np.pi
    back = scaler.inverse_transform(out)
    assert np.max(np.abs(back.ravel() - X)) < 1e-12


def test_interval_scaler_validation():
    with pytest.raises(NotFittedError):
        IntervalScaler().transform([0.0])
    with pytest.raises(ValueError):
        IntervalScaler().fit(np.ones(5))  # degenerate axis
    with pytest.raises(ValueError):
        IntervalScaler("quarters").fit(np.linspace(0, 1, 5))


def test_regressor_fits_linear_target():
    X, y = linear_data()
    reg = PQCRegressor(epochs=60).fit(X, y)
    assert reg.final_loss_ < reg.initial_loss_
    assert reg.score(X, y) > 0.9
    pred = reg.predict(X)
    assert pred.shape == (10,)


def test_regressor_is_deterministic_and_seed_sensitive():
    X, y = linear_data()
    a = PQCRegressor(epochs=5).fit(X, y).predict(X)
    b = PQCRegressor(epochs=5).fit(X, y).predict(X)
    c = PQCRegressor(epochs=5, random_state=1).fit(X, y).predict(X)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_regressor_series_view_matches_predict():
    X, y = linear_data()
    reg = PQCRegressor(epochs=10).fit(X, y)
    series = reg.to_series()
    scaled = reg.normalizer_.transform(X)
    assert np.max(np.abs(series(scaled) - reg.predict(X))) < 1e-10


def test_regressor_h1_uses_derivative_labels():
    X, y = linear_data()
    dy = np.full_like(X, 1.0 / (2.0 * np.pi))
    reg = PQCRegressor(loss="h1", epochs=10).fit(X, y, dy=dy)
    assert np.isfinite(reg.final_loss_)
    with pytest.raises(ValueError):
        PQCRegressor(loss="h1").fit(X, y)


def test_regressor_explicit_domain():
    X, y = linear_data()
    reg = PQCRegressor(epochs=2, domain=((-np.pi, np.pi),)).fit(X[2:-2], y[2:-2])
    # domain wider than the training points: endpoints still map cleanly
    assert np.all(np.isfinite(reg.predict(X)))


def test_regressor_validation():
    X, y = linear_data()
    with pytest.raises(ValueError):
        PQCRegressor(loss="l1").fit(X, y)
    with pytest.raises(ValueError):
        PQCRegressor(normalization="off").fit(X, y)
    with pytest.raises(ValueError):
        PQCRegressor().fit(X, y[:-1])
    with pytest.raises(ValueError):
        PQCRegressor().fit(np.ones(5), np.ones(5))  # degenerate domain
    with pytest.raises(NotFittedError):
        PQCRegressor().predict(X)


def test_clone_and_params_round_trip():
    reg = PQCRegressor(n_layers=2, epochs=7, loss="h1", random_state=4)
    params = reg.get_params()
    assert params["n_layers"] == 2 and params["epochs"] == 7
    cloned = clone(reg)
    assert cloned.get_params() == params
    reg.set_params(epochs=9)
    assert reg.epochs == 9
