"""Input normalization, Adam, and the repeated-regression experiments.

An experiment draws a small labelled dataset from a named target on the
raw domain, min-max rescales the inputs into one of three symmetric
intervals, trains the circuit by full-batch Adam on a squared empirical
loss (values only, or values plus first derivatives), repeats over seeded
initializations, and reports pointwise percentile curves on a dense
evaluation grid.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import datatable
from .autodiff import batch_gradients
from .metrics import Dataset
from .pqc import CircuitSpec, evaluate_batch

THREADS_ENV_VAR = "SOBOLEV_PQC_THREADS"

# target intervals for min-max scaling, keyed by the names used in configs
TARGET_INTERVALS = {
    "half": (-0.5 * np.pi, 0.5 * np.pi),
    "full": (-np.pi, np.pi),
    "double": (-2.0 * np.pi, 2.0 * np.pi),
}

_RUN_CHUNK = 25


def resolve_threads(value: int | None = None) -> int:
    """Explicit thread count, else the SOBOLEV_PQC_THREADS env var, else 1."""
    if value is None:
        raw = os.environ.get(THREADS_ENV_VAR, "").strip()
        value = int(raw) if raw else 1
    if value < 1:
        raise ValueError("thread count must be >= 1")
    return value


@dataclass(frozen=True)
class Normalizer:
    """Per-axis affine min-max map from a source box onto a target box."""

    source: tuple[tuple[float, float], ...]
    target: tuple[tuple[float, float], ...]

    def __post_init__(self):
        src = tuple((float(a), float(b)) for a, b in np.atleast_2d(self.source))
        tgt = tuple((float(a), float(b)) for a, b in np.atleast_2d(self.target))
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "target", tgt)
        if len(src) != len(tgt):
            raise ValueError("source and target need the same number of axes")
        if any(a >= b for a, b in src) or any(a >= b for a, b in tgt):
            raise ValueError("intervals must be increasing")

    @staticmethod
    def from_name(source, name: str) -> "Normalizer":
        if name not in TARGET_INTERVALS:
            raise ValueError(f"unknown normalization {name!r}; options: {sorted(TARGET_INTERVALS)}")
        src = tuple((float(a), float(b)) for a, b in np.atleast_2d(source))
        return Normalizer(src, tuple(TARGET_INTERVALS[name] for _ in src))

    @property
    def input_dim(self) -> int:
        return len(self.source)

    @property
    def slopes(self) -> np.ndarray:
        return np.array(
            [(t1 - t0) / (s1 - s0) for (s0, s1), (t0, t1) in zip(self.source, self.target)]
        )

    def _ratio(self, x: np.ndarray) -> np.ndarray:
        lo = np.array([s0 for s0, _ in self.source])
        hi = np.array([s1 for _, s1 in self.source])
        span = hi - lo
        if np.any(x < lo - 1e-12 * span) or np.any(x > hi + 1e-12 * span):
            raise ValueError("point outside the source interval; clamping is not performed")
        return (x - lo) / span

    def transform(self, x):
        """Affine image of points in the source box; endpoints map exactly."""
        pts = np.asarray(x, dtype=float)
        scalar = pts.ndim == 0
        single = pts.ndim == 1 and self.input_dim > 1
        pts = pts.reshape(-1, self.input_dim)
        t_lo = np.array([t0 for t0, _ in self.target])
        t_hi = np.array([t1 for _, t1 in self.target])
        out = t_lo + self._ratio(pts) * (t_hi - t_lo)
        if scalar:
            return float(out[0, 0])
        return out[0] if single else (out[:, 0] if self.input_dim == 1 else out)

    def inverse(self, x):
        flipped = Normalizer(self.target, self.source)
        return flipped.transform(x)

    def transform_dataset(self, data: Dataset) -> Dataset:
        """Rescale points and divide derivative labels by the slope powers."""
        x_new = np.asarray(self.transform(data.x)).reshape(data.n_points, self.input_dim)
        dy_new = None
        if data.deriv_order >= 1:
            dy_new = data.dy.copy()
            for col, alpha in enumerate(data.indices):
                factor = float(np.prod(self.slopes ** np.asarray(alpha, dtype=float)))
                dy_new[:, col] /= factor
        return Dataset(x_new, data.y.copy(), dy_new, data.deriv_order)


# -- targets -------------------------------------------------------------------


@dataclass(frozen=True)
class Target:
    """Univariate regression target with an analytic first derivative."""

    name: str
    value: callable
    derivative: callable


TARGETS = {
    "linear": Target(
        "linear",
        value=lambda x: np.asarray(x, dtype=float) / (2.0 * np.pi),
        derivative=lambda x: np.full(np.shape(np.asarray(x)), 1.0 / (2.0 * np.pi)),
    ),
}


# -- optimizer ------------------------------------------------------------------


@dataclass(frozen=True)
class AdamParams:
    learning_rate: float = 0.1
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        if not (0 < self.learning_rate and 0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValueError("invalid Adam hyperparameters")


class Adam:
    """Plain Adam with bias correction; state shapes follow the parameters."""

    def __init__(self, params: AdamParams = AdamParams()):
        self.p = params
        self.m = None
        self.v = None
        self.t = 0

    def step(self, theta: np.ndarray, grad: np.ndarray) -> np.ndarray:
        if self.m is None:
            self.m = np.zeros_like(theta)
            self.v = np.zeros_like(theta)
        self.t += 1
        p = self.p
        self.m = p.beta1 * self.m + (1 - p.beta1) * grad
        self.v = p.beta2 * self.v + (1 - p.beta2) * grad * grad
        m_hat = self.m / (1 - p.beta1**self.t)
        v_hat = self.v / (1 - p.beta2**self.t)
        return theta - p.learning_rate * m_hat / (np.sqrt(v_hat) + p.eps)


# -- experiment configuration ----------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    circuit: CircuitSpec = field(default_factory=CircuitSpec)
    target: str = "linear"
    normalization: str = "half"
    loss: str = "l2"  # "l2" or "h1"
    n_points: int = 10
    epochs: int = 100
    repeats: int = 100
    adam: AdamParams = field(default_factory=AdamParams)
    base_seed: int = 0
    domain: tuple[float, float] = (-np.pi, np.pi)
    eval_points: int = 1001
    sampling: str = "grid"  # "grid" or "random"

    def __post_init__(self):
        if self.epochs < 1 or self.repeats < 1 or self.n_points < 1:
            raise ValueError("epochs, repeats and n_points must be >= 1")
        if self.loss not in ("l2", "h1"):
            raise ValueError("loss must be 'l2' or 'h1' (higher orders are not trainable)")
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}; options: {sorted(TARGETS)}")
        if self.normalization not in TARGET_INTERVALS:
            raise ValueError(f"unknown normalization {self.normalization!r}")
        if self.sampling not in ("grid", "random"):
            raise ValueError("sampling must be 'grid' or 'random'")
        if self.eval_points < 2:
            raise ValueError("eval_points must be >= 2")
        if float(self.domain[0]) >= float(self.domain[1]):
            raise ValueError("domain must be an increasing interval")

    @property
    def deriv_order(self) -> int:
        return 1 if self.loss == "h1" else 0

    def to_dict(self) -> dict:
        return {
            "circuit": self.circuit.to_dict(),
            "target": self.target,
            "normalization": self.normalization,
            "loss": self.loss,
            "n_points": self.n_points,
            "epochs": self.epochs,
            "repeats": self.repeats,
            "adam": {
                "learning_rate": self.adam.learning_rate,
                "beta1": self.adam.beta1,
                "beta2": self.adam.beta2,
                "eps": self.adam.eps,
            },
            "base_seed": self.base_seed,
            "domain": list(self.domain),
            "eval_points": self.eval_points,
            "sampling": self.sampling,
        }

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        kwargs = dict(d)
        if "circuit" in kwargs:
            kwargs["circuit"] = CircuitSpec.from_dict(kwargs["circuit"])
        if "adam" in kwargs:
            kwargs["adam"] = AdamParams(**kwargs["adam"])
        if "domain" in kwargs:
            kwargs["domain"] = tuple(float(v) for v in kwargs["domain"])
        return ExperimentConfig(**kwargs)


def make_dataset(config: ExperimentConfig) -> Dataset:
    """Labelled training set on the raw (pre-normalization) domain."""
    a, b = config.domain
    if config.sampling == "grid":
        xs = np.linspace(a, b, config.n_points)
    else:
        rng = np.random.default_rng([config.base_seed, 0xD])
        xs = np.sort(rng.uniform(a, b, config.n_points))
    target = TARGETS[config.target]
    y = np.asarray(target.value(xs), dtype=float)
    dy = None
    if config.deriv_order >= 1:
        dy = np.asarray(target.derivative(xs), dtype=float).reshape(-1, 1)
    return Dataset(xs, y, dy, config.deriv_order)


# -- training -------------------------------------------------------------------


def _empirical_grad(res: dict, data: Dataset, use_h1: bool) -> tuple[np.ndarray, np.ndarray]:
    """Per-run squared-loss values and theta gradients from one batch pass."""
    resid = res["values"] - data.y  # (R, I)
    n = data.n_points
    loss_sq = np.mean(resid**2, axis=1)
    grad = (2.0 / n) * np.einsum("ri,rip->rp", resid, res["grad_theta"])
    if use_h1:
        dresid = res["grad_x"] - data.dy[None, :, :]  # (R, I, N)
        loss_sq = loss_sq + np.mean(np.sum(dresid**2, axis=2), axis=1)
        grad = grad + (2.0 / n) * np.einsum("rid,ripd->rp", dresid, res["mixed"])
    return loss_sq, grad


def _train_runs(
    spec: CircuitSpec,
    data: Dataset,
    loss: str,
    epochs: int,
    adam_params: AdamParams,
    seeds: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Train one vectorized chunk of runs; returns thetas and loss traces."""
    use_h1 = loss == "h1"
    theta = np.stack(
        [np.random.default_rng(int(s)).uniform(0.0, 2.0 * np.pi, spec.n_params) for s in seeds]
    )
    opt = Adam(adam_params)
    initial = final = None
    for _ in range(epochs):
        res = batch_gradients(spec, theta, data.x, with_input=use_h1, mixed=use_h1)
        loss_sq, grad = _empirical_grad(res, data, use_h1)
        if initial is None:
            initial = loss_sq
        theta = opt.step(theta, grad)
    res = batch_gradients(spec, theta, data.x, with_input=use_h1, mixed=use_h1)
    final, _ = _empirical_grad(res, data, use_h1)
    return theta, np.sqrt(initial), np.sqrt(final), res["values"]


def train(config: ExperimentConfig, data: Dataset, seed: int | None = None) -> np.ndarray:
    """One training run; the seed defaults to the config's base seed."""
    seeds = np.array([config.base_seed if seed is None else seed])
    theta, _, _, _ = _train_runs(
        config.circuit, data, config.loss, config.epochs, config.adam, seeds
    )
    return theta[0]


@dataclass
class RunResult:
    """Curves and summaries of one repeated experiment."""

    config: ExperimentConfig
    x_grid: np.ndarray  # (G,) raw-domain evaluation points
    target_values: np.ndarray  # (G,)
    thetas: np.ndarray  # (R, P)
    curves: np.ndarray  # (R, G) model values on the grid
    initial_losses: np.ndarray  # (R,) rooted loss before training
    final_losses: np.ndarray  # (R,) rooted loss after training
    percentiles: np.ndarray = field(init=False)  # (3, G): p25, p50, p75

    def __post_init__(self):
        self.percentiles = np.percentile(self.curves, [25.0, 50.0, 75.0], axis=0)

    @property
    def median_curve(self) -> np.ndarray:
        return self.percentiles[1]

    def median_dist_c0(self) -> float:
        return float(np.max(np.abs(self.median_curve - self.target_values)))

    def iqr_band_area(self) -> float:
        return float(np.trapezoid(self.percentiles[2] - self.percentiles[0], self.x_grid))

    def to_table(self) -> tuple[list[str], np.ndarray]:
        rows = np.column_stack(
            [
                self.x_grid,
                self.target_values,
                self.percentiles[1],
                self.percentiles[2],
                self.percentiles[0],
            ]
        )
        return list(datatable.FIGURE_COLUMNS), rows


def boundary_error_ratio(
    x: np.ndarray, error: np.ndarray, outer: float = 0.1, inner: float = 0.8
) -> float:
    """Mean |error| on the outermost fraction over the central fraction."""
    x = np.asarray(x, dtype=float)
    error = np.abs(np.asarray(error, dtype=float))
    lo, hi = float(x.min()), float(x.max())
    span = hi - lo
    outer_mask = (x < lo + 0.5 * outer * span) | (x > hi - 0.5 * outer * span)
    pad = 0.5 * (1.0 - inner) * span
    inner_mask = (x >= lo + pad) & (x <= hi - pad)
    return float(np.mean(error[outer_mask]) / np.mean(error[inner_mask]))


def run_experiment(config: ExperimentConfig, threads: int | None = None) -> RunResult:
    """R seeded runs plus pointwise 25/50/75 percentile curves.

    Per-run results do not depend on the thread count or chunking; runs are
    vectorized in fixed-size chunks and chunks may execute concurrently.
    """
    n_threads = resolve_threads(threads)
    raw_data = make_dataset(config)
    norm = Normalizer.from_name((config.domain,), config.normalization)
    data = norm.transform_dataset(raw_data)

    seeds = config.base_seed + np.arange(config.repeats)
    chunks = [seeds[i : i + _RUN_CHUNK] for i in range(0, config.repeats, _RUN_CHUNK)]

    def work(chunk_seeds):
        return _train_runs(
            config.circuit, data, config.loss, config.epochs, config.adam, chunk_seeds
        )

    if n_threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]

    thetas = np.concatenate([p[0] for p in parts])
    initial = np.concatenate([p[1] for p in parts])
    final = np.concatenate([p[2] for p in parts])

    x_grid = np.linspace(config.domain[0], config.domain[1], config.eval_points)
    x_tilde = norm.transform(x_grid)
    target_vals = np.asarray(TARGETS[config.target].value(x_grid), dtype=float)
    R, G = config.repeats, config.eval_points
    rep_thetas = np.repeat(thetas, G, axis=0)
    tiled_x = np.tile(x_tilde, R).reshape(-1, 1)
    curves = evaluate_batch(config.circuit, rep_thetas, tiled_x).reshape(R, G)

    return RunResult(config, x_grid, target_vals, thetas, curves, initial, final)
