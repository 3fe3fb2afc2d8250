"""Generalization-bound evaluation and empirical bound/embedding checks.

The headline quantity is the sample-complexity term

    r = xi * B * L * sqrt(|O| * (ln|O| + ln Btilde) / I) + c * sqrt(ln(1/d) / I)

with all big-O constants set to one so the expression is computable and
its I-scaling testable.  The empirical studies fit band-limited series
models to random band-limited targets, measure the gap between continuous
Sobolev distances and their sampled counterparts, and probe the constant
of the sup-norm-under-Sobolev embedding on the same model class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .metrics import (
    Dataset,
    GridSpec,
    count_derivatives,
    dist_c0,
    dist_hk,
    loss_hk,
)
from .trigseries import TrigSeries

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class BoundInputs:
    """Scalar inputs of the generalization-bound term."""

    n_frequencies: int  # |O|, size of the frequency set
    xi: int  # number of derivative multi-indices with |alpha| <= k
    sup_bound: float  # B, sup-norm bound of the model class
    coeff_bound: float  # Btilde, coefficient-norm bound
    loss_bound: float  # c, uniform bound on the pointwise loss
    lipschitz: float  # L, Lipschitz constant of the loss
    n_samples: int  # I
    delta: float  # confidence level, in (0, 1)

    def __post_init__(self):
        pos = (
            self.n_frequencies,
            self.xi,
            self.sup_bound,
            self.coeff_bound,
            self.lipschitz,
            self.n_samples,
        )
        if any(v <= 0 for v in pos) or self.loss_bound < 0:
            raise ValueError("bound inputs must be positive (loss bound nonnegative)")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")


def bound_term(inputs: BoundInputs) -> float:
    """Two-term sample-complexity bound with unit constants."""
    omega = float(inputs.n_frequencies)
    log_part = omega * (math.log(omega) + math.log(inputs.coeff_bound))
    if log_part < 0.0:
        raise ValueError("|O| * (ln|O| + ln Btilde) is negative; bound undefined")
    first = (
        inputs.xi
        * inputs.sup_bound
        * inputs.lipschitz
        * math.sqrt(log_part / inputs.n_samples)
    )
    second = inputs.loss_bound * math.sqrt(math.log(1.0 / inputs.delta) / inputs.n_samples)
    return first + second


@dataclass(frozen=True)
class RegimeCheck:
    """Which convergence regime a (dimension, order, exponent) triple is in."""

    input_dim: int
    order: int
    p: float
    case: str  # "Lp-case-1", "Lp-case-2", "C0", "invalid"


def classify_regime(input_dim: int, order: int, p: float) -> RegimeCheck:
    """Regime of convergence for H^order models in dimension input_dim.

    "Lp-case-1": N(1/2 - 1/p) < k < N/2 with 1 <= p < N.
    "Lp-case-2": k >= N/2 with 1 <= p < infinity.
    "C0":        p = infinity with k > N/2.
    """
    n, k = input_dim, order
    if n < 1 or k < 0 or p < 1:
        raise ValueError("need input_dim >= 1, order >= 0, p >= 1")
    if math.isinf(p):
        case = "C0" if k > n / 2.0 else "invalid"
    elif k >= n / 2.0:
        case = "Lp-case-2"
    elif n * (0.5 - 1.0 / p) < k and p < n:
        case = "Lp-case-1"
    else:
        case = "invalid"
    return RegimeCheck(n, k, float(p), case)


# -- band-limited model fitting -------------------------------------------------


def _design_matrix(xs: np.ndarray, degree: int, deriv_order: int) -> np.ndarray:
    """Stacked value (and derivative) rows of the real trigonometric basis."""
    js = np.arange(1, degree + 1, dtype=float)
    value_rows = np.hstack(
        [
            np.ones((xs.size, 1)),
            np.cos(np.outer(xs, js)),
            np.sin(np.outer(xs, js)),
        ]
    )
    if deriv_order == 0:
        return value_rows
    deriv_rows = np.hstack(
        [
            np.zeros((xs.size, 1)),
            -js * np.sin(np.outer(xs, js)),
            js * np.cos(np.outer(xs, js)),
        ]
    )
    return np.vstack([value_rows, deriv_rows])


def fit_series(data: Dataset, degree: int, deriv_order: int = 0) -> TrigSeries:
    """Least-squares trigonometric fit of degree K to values (and slopes).

    With deriv_order 1 the residual being minimized is the discretized h^1
    loss: value rows and first-derivative rows enter the same system.
    """
    if data.input_dim != 1:
        raise ValueError("series fitting implemented for univariate data")
    if deriv_order not in (0, 1):
        raise ValueError("deriv_order must be 0 or 1")
    if deriv_order == 1 and data.deriv_order < 1:
        raise ValueError("dataset carries no derivative labels")
    xs = data.x[:, 0]
    rhs = data.y if deriv_order == 0 else np.concatenate([data.y, data.dy[:, 0]])
    design = _design_matrix(xs, degree, deriv_order)
    params, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    const, a, b = params[0], params[1 : degree + 1], params[degree + 1 :]
    freqs = np.arange(-degree, degree + 1).reshape(-1, 1)
    coefs = np.empty(2 * degree + 1, dtype=complex)
    coefs[degree] = const
    coefs[degree + 1 :] = 0.5 * (a - 1j * b)
    coefs[:degree] = np.conj(coefs[degree + 1 :])[::-1]
    return TrigSeries(freqs, coefs)


def random_series(rng: np.random.Generator, degree: int, decay: float = 1.0) -> TrigSeries:
    """Random real series with |c_j| ~ (1 + |j|)^(-decay) and random phases."""
    freqs = np.arange(-degree, degree + 1).reshape(-1, 1)
    coefs = np.empty(2 * degree + 1, dtype=complex)
    mags = rng.uniform(0.5, 1.0, degree + 1) / (1.0 + np.arange(degree + 1)) ** decay
    phases = rng.uniform(0.0, _TWO_PI, degree + 1)
    coefs[degree] = mags[0] * np.cos(phases[0])
    positive = 0.5 * mags[1:] * np.exp(1j * phases[1:])
    coefs[degree + 1 :] = positive
    coefs[:degree] = np.conj(positive)[::-1]
    return TrigSeries(freqs, coefs)


def _pointwise_loss_sup(f: TrigSeries, g: TrigSeries, order: int, grid: GridSpec) -> float:
    """Grid sup of the pointwise h^order loss between two series."""
    pts = grid.points()[:, 0]
    total = (f(pts) - g(pts)) ** 2
    for a in range(1, order + 1):
        alpha = (a,)
        total = total + (f.differentiate(alpha)(pts) - g.differentiate(alpha)(pts)) ** 2
    return float(np.max(total))


# -- generalization-gap study -----------------------------------------------------


@dataclass(frozen=True)
class GapStudyConfig:
    model_degree: int = 1
    target_degree: int = 12
    sample_sizes: tuple[int, ...] = (10, 40, 160, 640)
    n_seeds: int = 20
    deriv_order: int = 1
    target_decay: float = 1.0
    base_seed: int = 0
    delta: float = 0.05
    grid_points: int = 1001

    def __post_init__(self):
        if self.deriv_order != 1:
            raise ValueError("the gap study is defined for first-order Sobolev loss")
        if min(self.sample_sizes) < 2 or self.n_seeds < 2:
            raise ValueError("need at least 2 samples and 2 seeds")


@dataclass
class GapStudyResult:
    """Signed gaps per (size, seed) plus magnitude statistics.

    ``gaps`` keeps the signed values D_H1 - D_h1 (the empirical loss can
    overshoot the continuous distance, so signs vary at large I).  The
    summary statistics and the fitted slope use the gap magnitudes, which
    track the I^{-1/2} concentration rate; the signed mean instead decays
    like 1/I because the zero-mean fluctuations cancel.
    """

    config: GapStudyConfig
    gaps: np.ndarray  # (n_sizes, n_seeds) continuous-minus-empirical h1 gaps
    c0_gaps: np.ndarray  # (n_sizes, n_seeds) C0-minus-empirical gaps
    bound_values: np.ndarray  # (n_sizes,)
    bound_holds: np.ndarray  # (n_sizes, n_seeds) D_H1 <= D_h1 + bound, diagnostic
    slope: float = field(init=False)

    def __post_init__(self):
        means = np.abs(self.gaps).mean(axis=1)
        sizes = np.asarray(self.config.sample_sizes, dtype=float)
        if np.any(means <= 0):
            self.slope = float("nan")
        else:
            self.slope = float(np.polyfit(np.log(sizes), np.log(means), 1)[0])

    def table(self) -> tuple[list[str], np.ndarray]:
        sizes = np.abs(self.gaps)
        rows = np.column_stack(
            [
                np.asarray(self.config.sample_sizes, dtype=float),
                sizes.mean(axis=1),
                np.percentile(sizes, 25.0, axis=1),
                np.percentile(sizes, 75.0, axis=1),
                self.bound_values,
            ]
        )
        return ["I", "gap_mean", "gap_p25", "gap_p75", "bound_value"], rows


def empirical_gap_study(config: GapStudyConfig = GapStudyConfig()) -> GapStudyResult:
    """Continuous vs sampled Sobolev distance across sample sizes.

    For each seed a random target with a much wider band than the model
    class is fixed; for each sample size I, a model is least-squares fitted
    to I uniform points (values and slopes) and the gap between the
    continuous H^1 distance and the empirical h^1 loss is recorded.  The
    narrow model band keeps the fit well conditioned at the smallest I, so
    the gap magnitudes are dominated by sampling fluctuation rather than by
    overfit variance and scale like I^{-1/2}.  The bound column evaluates
    ``bound_term`` with B, Btilde and c measured on the fitted models
    (Btilde = 2B, integer-spectrum default) at each sample size.
    """
    k = config.deriv_order
    grid = GridSpec(((0.0, _TWO_PI),), config.grid_points)
    sizes = config.sample_sizes
    n_sizes, n_seeds = len(sizes), config.n_seeds
    gaps = np.zeros((n_sizes, n_seeds))
    c0_gaps = np.zeros((n_sizes, n_seeds))
    bound_values = np.zeros(n_sizes)
    bound_holds = np.zeros((n_sizes, n_seeds), dtype=bool)

    targets = [
        random_series(
            np.random.default_rng([config.base_seed, s, 0xA]),
            config.target_degree,
            config.target_decay,
        )
        for s in range(n_seeds)
    ]

    for i, n_samples in enumerate(sizes):
        sup_bound = 0.0
        loss_bound = 0.0
        for s, target in enumerate(targets):
            rng = np.random.default_rng([config.base_seed, s, n_samples])
            xs = rng.uniform(0.0, _TWO_PI, n_samples)
            dy = target.differentiate((1,))(xs).reshape(-1, 1)
            data = Dataset(xs, target(xs), dy, 1)
            model = fit_series(data, config.model_degree, deriv_order=1)

            emp = loss_hk(data, model, k)
            cont = dist_hk(target, model, k, grid)
            gaps[i, s] = cont - emp
            c0_gaps[i, s] = dist_c0(target, model, grid) - emp

            b_est, _ = model.coefficient_norms()
            sup_bound = max(sup_bound, b_est)
            loss_bound = max(loss_bound, _pointwise_loss_sup(target, model, k, grid))

        inputs = BoundInputs(
            n_frequencies=2 * config.model_degree + 1,
            xi=count_derivatives(1, k) + 1,
            sup_bound=sup_bound,
            coeff_bound=2.0 * sup_bound,
            loss_bound=loss_bound,
            lipschitz=1.0,
            n_samples=n_samples,
            delta=config.delta,
        )
        bound_values[i] = bound_term(inputs)
        bound_holds[i] = gaps[i] <= bound_values[i]

    return GapStudyResult(config, gaps, c0_gaps, bound_values, bound_holds)


# -- embedding-constant probe ------------------------------------------------------


@dataclass
class EmbeddingProbeResult:
    constant: float  # C fitted on the calibration pairs
    calibration_ratios: np.ndarray
    eval_ratios: np.ndarray
    cv: float = field(init=False)  # coefficient of variation of calibration ratios
    holds: bool = field(init=False)  # dist_C0 <= C * dist_H1 on every eval pair

    def __post_init__(self):
        self.cv = float(np.std(self.calibration_ratios) / np.mean(self.calibration_ratios))
        self.holds = bool(np.all(self.eval_ratios <= self.constant))


def extremal_embedding_series(degree: int) -> TrigSeries:
    """Band-limited maximizer of sup-norm over H^1-norm: c_j = 1/(1 + j^2).

    By Cauchy-Schwarz the ratio of any degree-K series is at most
    sqrt(sum_{|j|<=K} 1/(1+j^2)), attained exactly by this kernel, so a
    calibration set containing it pins the class-wide constant.
    """
    freqs = np.arange(-degree, degree + 1).reshape(-1, 1)
    coefs = (1.0 / (1.0 + freqs.astype(float) ** 2)).astype(complex).ravel()
    return TrigSeries(freqs, coefs)


def embedding_probe(
    degree: int = 6,
    n_calibration: int = 10,
    n_seeds: int = 20,
    pairs_per_seed: int = 5,
    base_seed: int = 0,
    grid_points: int = 10001,
) -> EmbeddingProbeResult:
    """Fit the sup-norm embedding constant on one set of series pairs and
    verify dist_C0 <= C * dist_H1 on a disjoint set.

    The calibration set includes the analytic extremal kernel, so the
    fitted C equals the class maximum and the check can only fail through
    numerical error.
    """
    grid = GridSpec(((0.0, _TWO_PI),), grid_points)

    def ratio(f: TrigSeries, g: TrigSeries) -> float:
        return dist_c0(f, g, grid) / dist_hk(f, g, 1, grid)

    zero = TrigSeries(np.zeros((1, 1), dtype=int), [0.0])
    cal = [ratio(extremal_embedding_series(degree), zero)]
    rng = np.random.default_rng([base_seed, 0xCA1])
    for _ in range(n_calibration - 1):
        cal.append(ratio(random_series(rng, degree, 2.0), random_series(rng, degree, 2.0)))

    eval_ratios = []
    for s in range(n_seeds):
        rng_s = np.random.default_rng([base_seed, 0xE7A1, s])
        for _ in range(pairs_per_seed):
            f = random_series(rng_s, degree, 2.0)
            g = random_series(rng_s, degree, 2.0)
            eval_ratios.append(ratio(f, g))

    cal = np.asarray(cal)
    return EmbeddingProbeResult(float(np.max(cal)), cal, np.asarray(eval_ratios))
