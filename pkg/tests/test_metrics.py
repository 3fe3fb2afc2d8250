"""Distance and loss tests against analytic and brute-force oracles."""

import itertools
import math

import numpy as np
import pytest

from sobolev_pqc.bounds import random_series
from sobolev_pqc.metrics import (
    Dataset,
    GridSpec,
    count_derivatives,
    dist_c0,
    dist_hk,
    dist_lp,
    loss_hk,
    loss_hk_squared,
    loss_l2,
    loss_l2_squared,
    loss_linf,
    multi_indices,
)

TWO_PI = 2.0 * np.pi


def test_multi_indices_graded_lex_order():
    assert multi_indices(2, 2) == ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    assert multi_indices(1, 3) == ((1,), (2,), (3,))
    assert multi_indices(2, 1, min_order=0) == ((0, 0), (1, 0), (0, 1))
    assert multi_indices(3, 1) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    with pytest.raises(ValueError):
        multi_indices(0, 1)


def test_count_derivatives_matches_enumeration():
    # brute-force oracle: count every multi-index with 1 <= |alpha| <= k
    def brute(n, k):
        total = 0
        for grade in range(1, k + 1):
            total += sum(
                1
                for combo in itertools.product(range(grade + 1), repeat=n)
                if sum(combo) == grade
            )
        return total

    for n in (1, 2, 3, 4):
        for k in (0, 1, 2, 3):
            assert count_derivatives(n, k) == brute(n, k)
            assert count_derivatives(n, k) == len(multi_indices(n, k))
    assert count_derivatives(1, 1) == 1
    assert count_derivatives(2, 2) == 5
    assert count_derivatives(3, 2) == 9


def test_grid_spec_weights_and_points():
    grid = GridSpec(((0.0, 1.0), (0.0, 2.0)), 5)
    assert grid.input_dim == 2
    assert grid.volume == 2.0
    pts = grid.points()
    assert pts.shape == (25, 2)
    w = grid.quad_weights()
    assert abs(np.sum(w) - 1.0) < 1e-14
    raw = grid.quad_weights(normalized=False)
    assert abs(np.sum(raw) - grid.volume) < 1e-13
    fine = grid.refined(2)
    assert fine.points_per_axis == 9
    with pytest.raises(ValueError):
        GridSpec(((1.0, 0.0),), 5)
    with pytest.raises(ValueError):
        GridSpec(((0.0, 1.0),), 1)


def test_dist_lp_analytic_sine():
    grid = GridSpec(((0.0, TWO_PI),), 1001)
    zero = lambda x: np.zeros_like(x)
    # smooth periodic integrands: trapezoid is exact to roundoff for p = 2, 4
    assert abs(dist_lp(np.sin, zero, 2, grid) - math.sqrt(0.5)) < 1e-12
    assert abs(dist_lp(np.sin, zero, 4, grid) - (3.0 / 8.0) ** 0.25) < 1e-12
    # |sin| has kinks, so p = 1 converges at the usual quadratic rate
    assert abs(dist_lp(np.sin, zero, 1, grid) - 2.0 / math.pi) < 1e-5
    with pytest.raises(ValueError):
        dist_lp(np.sin, zero, 0.5, grid)


def test_dist_lp_grid_refinement_stable():
    rng = np.random.default_rng(30)
    f = random_series(rng, 4)
    g = random_series(rng, 4)
    grid = GridSpec(((0.0, TWO_PI),), 501)
    for p in (1, 2, 4):
        coarse = dist_lp(f, g, p, grid)
        fine = dist_lp(f, g, p, grid.refined(2))
        assert abs(coarse - fine) / fine < 1e-4


def test_dist_lp_monotone_in_p_and_below_c0():
    rng = np.random.default_rng(31)
    grid = GridSpec(((0.0, TWO_PI),), 1001)
    for _ in range(5):
        f = random_series(rng, 4)
        g = random_series(rng, 4)
        d = [dist_lp(f, g, p, grid) for p in (1, 2, 4)]
        c0 = dist_c0(f, g, grid)
        assert d[0] <= d[1] + 1e-12 <= d[2] + 2e-12
        assert c0 >= d[2] - 1e-9


def test_dist_hk_matches_coefficient_oracle():
    # for trig series on the torus with uniform probability measure,
    # D_Hk^2 = sum_j (sum_{a<=k} j^(2a)) |c_j(f) - c_j(g)|^2 exactly
    rng = np.random.default_rng(32)
    f = random_series(rng, 4)
    g = random_series(rng, 4)
    grid = GridSpec(((0.0, TWO_PI),), 1001)
    for k in (0, 1, 2):
        total = 0.0
        for j in range(-4, 5):
            dc = abs(f.coefficient(j) - g.coefficient(j)) ** 2
            total += dc * sum(float(j) ** (2 * a) for a in range(k + 1))
        oracle = math.sqrt(total)
        got = dist_hk(f, g, k, grid)
        assert abs(got - oracle) < 1e-10 * max(1.0, oracle)


def test_dist_hk_increasing_in_k():
    rng = np.random.default_rng(33)
    f = random_series(rng, 3)
    g = random_series(rng, 3)
    grid = GridSpec(((0.0, TWO_PI),), 801)
    d = [dist_hk(f, g, k, grid) for k in (0, 1, 2)]
    assert d[0] <= d[1] <= d[2]


def test_dist_hk_accepts_mappings():
    grid = GridSpec(((0.0, TWO_PI),), 501)
    f = {(0,): np.sin, (1,): np.cos}
    zero = {(0,): lambda x: np.zeros_like(x), (1,): lambda x: np.zeros_like(x)}
    got = dist_hk(f, zero, 1, grid)
    assert abs(got - 1.0) < 1e-12  # sqrt(1/2 + 1/2)
    with pytest.raises(ValueError):
        dist_hk({(0,): np.sin}, zero, 1, grid)  # derivative missing
    with pytest.raises(TypeError):
        dist_hk(3.5, zero, 1, grid)


def test_dataset_shapes_and_validation():
    xs = np.linspace(0.0, 1.0, 7)
    data = Dataset(xs, xs**2)
    assert data.n_points == 7 and data.input_dim == 1
    assert data.dy is None and data.indices == ()
    with pytest.raises(ValueError):
        Dataset(xs, xs[:-1])
    with pytest.raises(ValueError):
        Dataset(xs, xs, None, 1)  # derivative labels missing
    d2 = Dataset(xs, xs, xs.reshape(-1, 1), 1)
    assert d2.indices == ((1,),)


def test_dataset_save_load_round_trip(tmp_path):
    rng = np.random.default_rng(34)
    xs = rng.uniform(0, 1, (6, 2))
    dy = rng.normal(size=(6, 5))
    data = Dataset(xs, rng.normal(size=6), dy, 2)
    path = str(tmp_path / "set.dat")
    data.save(path)
    again = Dataset.load(path)
    assert again.deriv_order == 2
    assert np.array_equal(again.x, data.x)
    assert np.array_equal(again.y, data.y)
    assert np.array_equal(again.dy, data.dy)
    header, _ = data.to_table()
    assert header == ["x1", "x2", "y", "d1", "d2", "d3", "d4", "d5"]


def test_loss_l2_naive_oracle():
    rng = np.random.default_rng(35)
    xs = rng.uniform(0, TWO_PI, 9)
    ys = rng.normal(size=9)
    data = Dataset(xs, ys)
    f = np.cos
    acc = 0.0
    for x, y in zip(xs, ys):
        acc += (y - math.cos(x)) ** 2
    assert abs(loss_l2_squared(data, f) - acc / 9) < 1e-14
    assert abs(loss_l2(data, f) - math.sqrt(acc / 9)) < 1e-14


def test_loss_linf_dominates_l2():
    rng = np.random.default_rng(36)
    for _ in range(10):
        xs = rng.uniform(0, 1, 8)
        data = Dataset(xs, rng.normal(size=8))
        f = lambda x: np.zeros_like(x)
        assert loss_linf(data, f) >= loss_l2(data, f) >= 0.0


def test_loss_hk_prefix_and_monotone():
    rng = np.random.default_rng(37)
    xs = rng.uniform(0, TWO_PI, 11)
    target = random_series(rng, 3)
    model = random_series(rng, 3)
    dy = np.column_stack([target.differentiate((a,))(xs) for a in (1, 2)])
    data = Dataset(xs, target(xs), dy, 2)
    assert abs(loss_hk(data, model, 0) - loss_l2(data, model)) < 1e-14
    losses = [loss_hk(data, model, k) for k in (0, 1, 2)]
    assert losses[0] <= losses[1] <= losses[2]
    # squared form really is the mean of pointwise sums
    manual = np.mean(
        (data.y - model(xs)) ** 2
        + (dy[:, 0] - model.differentiate((1,))(xs)) ** 2
        + (dy[:, 1] - model.differentiate((2,))(xs)) ** 2
    )
    assert abs(loss_hk_squared(data, model, 2) - manual) < 1e-12


def test_loss_hk_needs_enough_labels():
    xs = np.linspace(0, 1, 5)
    data = Dataset(xs, xs, xs.reshape(-1, 1), 1)
    with pytest.raises(ValueError):
        loss_hk(data, {(0,): lambda x: x}, 2)
