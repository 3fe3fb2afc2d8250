"""Fast cross-module invariant suite.

Each check is a small deterministic assertion of a structural property:
unitarity of the simulator, DFT round-trips, norm orderings, percentile
monotonicity, byte-determinism of outputs, gradient-rule agreement.  The
whole suite is meant to finish well under a minute.
"""

from __future__ import annotations

import time

import numpy as np

from . import autodiff, bounds, datatable, metrics, pqc, statevector, trainer, trigseries


def check_unitarity():
    rng = np.random.default_rng(11)
    spec = pqc.CircuitSpec()
    for _ in range(5):
        theta = rng.uniform(0.0, 2.0 * np.pi, spec.n_params)
        x = rng.uniform(0.0, 2.0 * np.pi)
        state = statevector.init_zero(spec.n_qubits)
        for gate in pqc.gate_sequence(spec, theta, x):
            state = statevector.apply_gate(state, gate)
        assert abs(state.norm() - 1.0) < 1e-12, f"norm drifted to {state.norm()}"


def check_cnot_involution():
    rng = np.random.default_rng(12)
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)
    amps /= np.linalg.norm(amps)
    state = statevector.StateVector(2, amps)
    twice = statevector.apply_gate(statevector.apply_gate(state, statevector.cnot(0, 1)), statevector.cnot(0, 1))
    assert np.allclose(twice.amplitudes, state.amplitudes, atol=1e-15), "CNOT^2 != I"


def check_dft_round_trip():
    rng = np.random.default_rng(13)
    series = bounds.random_series(rng, 5)
    recovered = trigseries.extract_series(series, 5)
    assert np.allclose(
        recovered.coefficients, series.coefficients, atol=1e-12
    ), "DFT extraction does not invert series evaluation"


def check_norm_orderings():
    rng = np.random.default_rng(14)
    xs = rng.uniform(0.0, 2.0 * np.pi, 20)
    data = metrics.Dataset(xs, rng.normal(size=20))
    f = lambda x: np.zeros_like(x)
    assert metrics.loss_linf(data, f) >= metrics.loss_l2(data, f) >= 0.0

    grid = metrics.GridSpec(((0.0, 2.0 * np.pi),), 1001)
    g = bounds.random_series(rng, 4)
    h = bounds.random_series(rng, 4)
    d1 = metrics.dist_lp(g, h, 1, grid)
    d2 = metrics.dist_lp(g, h, 2, grid)
    d4 = metrics.dist_lp(g, h, 4, grid)
    c0 = metrics.dist_c0(g, h, grid)
    assert d1 <= d2 + 1e-12 and d2 <= d4 + 1e-12, "Lp distance not monotone in p"
    assert c0 >= d4 - 1e-9, "C0 distance below Lp distance"


def check_loss_hk_monotone():
    rng = np.random.default_rng(15)
    xs = rng.uniform(0.0, 2.0 * np.pi, 12)
    target = bounds.random_series(rng, 4)
    model = bounds.random_series(rng, 4)
    dy = np.column_stack([target.differentiate((a,))(xs) for a in (1, 2)])
    data = metrics.Dataset(xs, target(xs), dy, 2)
    losses = [metrics.loss_hk(data, model, k) for k in (0, 1, 2)]
    assert losses[0] <= losses[1] <= losses[2], f"h^k loss not monotone in k: {losses}"


def check_gradient_triad():
    rng = np.random.default_rng(16)
    spec = pqc.CircuitSpec()
    for _ in range(3):
        theta = rng.uniform(0.0, 2.0 * np.pi, spec.n_params)
        x = rng.uniform(0.0, 2.0 * np.pi)
        shift = autodiff.grad_x(spec, theta, x)[0]
        fd = autodiff.finite_difference_x(spec, theta, x)[0]
        spectral = pqc.surrogate_series(spec, theta).differentiate((1,))(x)
        assert abs(shift - fd) < 1e-7, f"shift vs finite difference: {shift} vs {fd}"
        assert abs(shift - spectral) < 1e-7, f"shift vs spectral: {shift} vs {spectral}"
        gt = autodiff.grad_theta(spec, theta, x)
        fd_t = autodiff.finite_difference_theta(spec, theta, x)
        assert np.max(np.abs(gt - fd_t)) < 1e-7, "theta gradients disagree"


def check_evaluation_count():
    spec = pqc.CircuitSpec()
    report = autodiff.gradient_report(spec, np.zeros(spec.n_params), 0.3)
    expected = 1 + 2 * spec.n_params + 2 * spec.n_encoding_gates
    assert report.n_evaluations == expected, (
        f"evaluation count {report.n_evaluations}, expected {expected}"
    )


def check_fejer_weights():
    series = trigseries.TrigSeries([[0], [1], [-1], [2], [-2]], [0.5, 0.2, 0.2, 0.1, 0.1])
    mean = trigseries.fejer_mean(series, 2)
    assert abs(mean.coefficient(0) - 0.5) < 1e-15
    assert abs(mean.coefficient(1) - 0.1) < 1e-15  # weight 1 - 1/2
    assert abs(mean.coefficient(2) - 0.0) < 1e-15  # weight 1 - 2/2


def check_normalizer_exactness():
    norm = trainer.Normalizer.from_name(((-np.pi, np.pi),), "half")
    assert norm.transform(np.pi) == 0.5 * np.pi, "endpoint does not map exactly"
    assert norm.transform(-np.pi) == -0.5 * np.pi
    assert norm.transform(0.0) == 0.0
    data = trainer.make_dataset(
        trainer.ExperimentConfig(loss="h1", n_points=7, repeats=1, epochs=1)
    )
    scaled = norm.transform_dataset(data)
    # chain rule on the linear target: slope 1/2 doubles the derivative label
    assert np.allclose(scaled.dy, data.dy / norm.slopes[0], rtol=0, atol=1e-15)


def check_percentiles_and_determinism():
    cfg = trainer.ExperimentConfig(repeats=3, epochs=3, n_points=5, eval_points=51)
    a = trainer.run_experiment(cfg)
    b = trainer.run_experiment(cfg)
    assert np.all(a.percentiles[0] <= a.percentiles[1]) and np.all(
        a.percentiles[1] <= a.percentiles[2]
    ), "percentile curves not monotone"
    ha, ra = a.to_table()
    hb, rb = b.to_table()
    assert datatable.format_table(ha, ra) == datatable.format_table(hb, rb), (
        "repeated run is not byte-identical"
    )


def check_bound_scaling():
    base = bounds.BoundInputs(13, 2, 1.0, 2.0, 4.0, 1.0, 10, 0.05)
    quad = bounds.BoundInputs(13, 2, 1.0, 2.0, 4.0, 1.0, 40, 0.05)
    assert abs(bounds.bound_term(quad) - 0.5 * bounds.bound_term(base)) < 1e-12
    assert bounds.classify_regime(1, 1, float("inf")).case == "C0"
    assert bounds.classify_regime(2, 1, 4).case == "Lp-case-2"
    assert bounds.classify_regime(4, 1, 3).case == "Lp-case-1"
    assert bounds.classify_regime(3, 0, float("inf")).case == "invalid"


def check_dat_round_trip():
    rng = np.random.default_rng(17)
    rows = rng.normal(size=(5, 3)) * 10.0 ** rng.integers(-8, 8, size=(5, 3))
    text = datatable.format_table(["a", "b", "c"], rows)
    header, parsed = datatable.parse_table(text)
    assert header == ["a", "b", "c"]
    assert np.array_equal(parsed, rows), "17-digit round-trip lost precision"


CHECKS = [
    check_unitarity,
    check_cnot_involution,
    check_dft_round_trip,
    check_norm_orderings,
    check_loss_hk_monotone,
    check_gradient_triad,
    check_evaluation_count,
    check_fejer_weights,
    check_normalizer_exactness,
    check_percentiles_and_determinism,
    check_bound_scaling,
    check_dat_round_trip,
]


def run_all(verbose: bool = True) -> bool:
    """Run every check; report one line each; True iff all passed."""
    t0 = time.perf_counter()
    all_ok = True
    for check in CHECKS:
        name = check.__name__.removeprefix("check_")
        try:
            check()
        except AssertionError as exc:
            all_ok = False
            if verbose:
                print(f"FAIL  {name}: {exc}")
        else:
            if verbose:
                print(f"ok    {name}")
    if verbose:
        print(f"{'all checks passed' if all_ok else 'FAILURES above'} "
              f"({time.perf_counter() - t0:.1f} s)")
    return all_ok
