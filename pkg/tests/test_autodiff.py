"""Parameter-shift gradients against finite-difference and spectral oracles."""

import numpy as np
import pytest

from sobolev_pqc.autodiff import (
    batch_gradients,
    finite_difference_theta,
    finite_difference_x,
    grad_theta,
    grad_x,
    gradient_report,
)
from sobolev_pqc.pqc import CircuitSpec, surrogate_series
from sobolev_pqc.statevector import Observable

TWO_PI = 2.0 * np.pi


def test_grad_theta_matches_finite_difference():
    rng = np.random.default_rng(40)
    spec = CircuitSpec()
    for _ in range(5):
        theta = rng.uniform(0, TWO_PI, spec.n_params)
        x = rng.uniform(-np.pi, np.pi)
        shift = grad_theta(spec, theta, x)
        fd = finite_difference_theta(spec, theta, x)
        assert np.max(np.abs(shift - fd)) < 1e-7


def test_grad_x_triad():
    rng = np.random.default_rng(41)
    spec = CircuitSpec()
    for _ in range(5):
        theta = rng.uniform(0, TWO_PI, spec.n_params)
        x = rng.uniform(-np.pi, np.pi)
        shift = grad_x(spec, theta, x)[0]
        fd = finite_difference_x(spec, theta, x)[0]
        spectral = surrogate_series(spec, theta).differentiate((1,))(x)
        assert abs(shift - fd) < 1e-7
        assert abs(shift - spectral) < 1e-7
        assert abs(fd - spectral) < 1e-7


def test_mixed_second_derivatives_match_finite_difference():
    rng = np.random.default_rng(42)
    spec = CircuitSpec(n_qubits=2, n_layers=2)
    theta = rng.uniform(0, TWO_PI, spec.n_params)
    x = np.array([[0.43]])
    res = batch_gradients(spec, theta, x, mixed=True)
    h = 1e-5
    fd = (
        grad_theta(spec, theta, x[0] + h) - grad_theta(spec, theta, x[0] - h)
    ) / (2 * h)
    assert np.max(np.abs(res["mixed"][0, 0, :, 0] - fd)) < 1e-6


def test_evaluation_counts():
    spec = CircuitSpec()
    P, E = spec.n_params, spec.n_encoding_gates
    theta = np.zeros((2, P))
    xs = np.array([[0.1], [0.2], [0.3]])
    base = batch_gradients(spec, theta, xs)
    assert base["n_evaluations"] == 2 * 3 * (1 + 2 * P)
    with_x = batch_gradients(spec, theta, xs, with_input=True)
    assert with_x["n_evaluations"] == 2 * 3 * (1 + 2 * P + 2 * E)
    full = batch_gradients(spec, theta, xs, mixed=True)
    assert full["n_evaluations"] == 2 * 3 * (1 + 2 * P + 2 * E + 4 * P * E)


def test_gradient_report_budget():
    spec = CircuitSpec()
    report = gradient_report(spec, np.linspace(0, 1, spec.n_params), 0.3)
    assert report.n_evaluations == 1 + 2 * spec.n_params + 2 * spec.n_encoding_gates
    assert report.grad_theta.shape == (spec.n_params,)
    assert report.grad_x.shape == (1,)
    assert np.isfinite(report.value)


def test_batch_shapes():
    rng = np.random.default_rng(43)
    spec = CircuitSpec()
    thetas = rng.uniform(0, TWO_PI, (3, spec.n_params))
    xs = rng.uniform(0, TWO_PI, (4, 1))
    res = batch_gradients(spec, thetas, xs, mixed=True)
    assert res["values"].shape == (3, 4)
    assert res["grad_theta"].shape == (3, 4, spec.n_params)
    assert res["grad_x"].shape == (3, 4, 1)
    assert res["mixed"].shape == (3, 4, spec.n_params, 1)
    # batched rows agree with per-configuration calls
    for r in range(3):
        for i in range(4):
            assert np.allclose(
                res["grad_theta"][r, i], grad_theta(spec, thetas[r], xs[i]), atol=1e-13
            )


def test_gradients_scale_with_observable():
    rng = np.random.default_rng(44)
    base = CircuitSpec()
    scaled = CircuitSpec(
        observable=Observable.from_terms([(1.5, (0,)), (1.5, (1,))])  # 3 x mean_z
    )
    theta = rng.uniform(0, TWO_PI, base.n_params)
    x = 0.77
    g1 = grad_theta(base, theta, x)
    g3 = grad_theta(scaled, theta, x)
    assert np.max(np.abs(g3 - 3.0 * g1)) < 1e-12
    assert abs(grad_x(scaled, theta, x)[0] - 3.0 * grad_x(base, theta, x)[0]) < 1e-12


def test_grad_x_integrates_to_zero_over_period():
    rng = np.random.default_rng(45)
    spec = CircuitSpec()
    theta = rng.uniform(0, TWO_PI, spec.n_params)
    xs = np.linspace(0.0, TWO_PI, 201).reshape(-1, 1)
    res = batch_gradients(spec, theta, xs, with_input=True)
    integral = np.trapezoid(res["grad_x"][0, :, 0], xs[:, 0])
    assert abs(integral) < 1e-8


def test_multivariate_grad_x():
    rng = np.random.default_rng(46)
    spec = CircuitSpec(n_qubits=2, n_layers=2, input_dim=2)
    theta = rng.uniform(0, TWO_PI, spec.n_params)
    x = rng.uniform(0, TWO_PI, 2)
    shift = grad_x(spec, theta, x)
    fd = finite_difference_x(spec, theta, x)
    assert shift.shape == (2,)
    assert np.max(np.abs(shift - fd)) < 1e-7


def test_encoding_scale_enters_chain_rule():
    rng = np.random.default_rng(47)
    spec = CircuitSpec(encoding_scale=2.0)
    theta = rng.uniform(0, TWO_PI, spec.n_params)
    x = 0.31
    shift = grad_x(spec, theta, x)[0]
    fd = finite_difference_x(spec, theta, x)[0]
    assert abs(shift - fd) < 1e-7


def test_theta_shape_validation():
    spec = CircuitSpec()
    with pytest.raises(ValueError):
        batch_gradients(spec, np.zeros((2, 5)), np.array([[0.0]]))
