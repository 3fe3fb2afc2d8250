"""Truncated trigonometric series: the classical surrogate layer.

A :class:`TrigSeries` is a finite set of integer frequency vectors with
complex coefficients, constrained to be conjugate-symmetric so the series
is real valued on the torus [0, 2pi]^N.  The module provides coefficient
extraction by uniform-grid DFT, l1-weighted Fejer means, smooth periodic
extensions of functions given on a subdomain, spectral differentiation and
the two coefficient norms used by the generalization machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_TWO_PI = 2.0 * np.pi
_SYMMETRY_TOL = 1e-12
_IMAG_TOL = 1e-10
_EVAL_CHUNK = 4096


def _canonical_order(freqs: np.ndarray) -> np.ndarray:
    return np.lexsort(freqs.T[::-1])


class TrigSeries:
    """Finite trigonometric series sum_w c_w exp(i w.x), real valued."""

    def __init__(self, frequencies, coefficients, tol: float = _SYMMETRY_TOL):
        freqs = np.atleast_2d(np.asarray(frequencies, dtype=np.int64))
        if freqs.ndim != 2:
            raise ValueError("frequencies must be a 2-D array of integer vectors")
        coefs = np.asarray(coefficients, dtype=complex).ravel()
        if coefs.shape[0] != freqs.shape[0]:
            raise ValueError("one coefficient per frequency required")
        order = _canonical_order(freqs)
        freqs, coefs = freqs[order], coefs[order]
        if len({tuple(f) for f in freqs}) != len(freqs):
            raise ValueError("duplicate frequencies")
        self.frequencies = freqs
        self.coefficients = self._symmetrize(freqs, coefs, tol)
        self.input_dim = freqs.shape[1]

    @staticmethod
    def _symmetrize(freqs: np.ndarray, coefs: np.ndarray, tol: float) -> np.ndarray:
        index = {tuple(f): i for i, f in enumerate(freqs)}
        scale = max(1.0, float(np.max(np.abs(coefs)))) if coefs.size else 1.0
        out = coefs.copy()
        for i, f in enumerate(freqs):
            j = index.get(tuple(-f))
            if j is None:
                raise ValueError(f"frequency {tuple(f)} has no mirror; set is not symmetric")
            if abs(coefs[i] - np.conj(coefs[j])) > tol * scale:
                raise ValueError("coefficients violate conjugate symmetry beyond tolerance")
            out[i] = 0.5 * (coefs[i] + np.conj(coefs[j]))
        return out

    def __len__(self) -> int:
        return len(self.coefficients)

    def coefficient(self, freq) -> complex:
        freq = tuple(int(v) for v in np.atleast_1d(freq))
        match = np.all(self.frequencies == np.array(freq), axis=1)
        idx = np.nonzero(match)[0]
        return complex(self.coefficients[idx[0]]) if idx.size else 0.0 + 0.0j

    def _points(self, x) -> tuple[np.ndarray, bool]:
        pts = np.asarray(x, dtype=float)
        scalar = pts.ndim == 0 or (pts.ndim == 1 and self.input_dim > 1)
        if self.input_dim == 1:
            pts = pts.reshape(-1, 1)
        else:
            pts = pts.reshape(-1, self.input_dim)
        return pts, scalar

    def __call__(self, x):
        pts, scalar = self._points(x)
        out = np.empty(pts.shape[0])
        w = self.frequencies.astype(float)
        scale = float(np.sum(np.abs(self.coefficients))) + 1.0
        for lo in range(0, pts.shape[0], _EVAL_CHUNK):
            chunk = pts[lo : lo + _EVAL_CHUNK]
            vals = np.exp(1j * (chunk @ w.T)) @ self.coefficients
            if np.max(np.abs(vals.imag), initial=0.0) > _IMAG_TOL * scale:
                raise ValueError("series evaluated to a non-real value; coefficients corrupt")
            out[lo : lo + _EVAL_CHUNK] = vals.real
        return float(out[0]) if scalar else out

    def differentiate(self, alpha) -> "TrigSeries":
        """Spectral derivative D^alpha: multiply c_w by prod_d (i w_d)^alpha_d."""
        alpha = tuple(int(a) for a in np.atleast_1d(alpha))
        if len(alpha) != self.input_dim or any(a < 0 for a in alpha):
            raise ValueError("alpha must be a nonnegative multi-index of length input_dim")
        factors = np.ones(len(self), dtype=complex)
        for d, a in enumerate(alpha):
            if a:
                factors *= (1j * self.frequencies[:, d].astype(float)) ** a
        return TrigSeries(self.frequencies, self.coefficients * factors, tol=np.inf)

    def coefficient_norms(self, n_grid: int = 2048) -> tuple[float, float]:
        """(sup-norm grid estimate, exact sine-cosine coefficient norm).

        The second value is sqrt(a_0^2 + sum_{w in O+} a_w^2 + b_w^2) for
        the representation a_0/2 + sum a_w cos(w.x) + b_w sin(w.x), where
        O+ holds one frequency of each +/- pair.
        """
        sq = 0.0
        for f, c in zip(self.frequencies, self.coefficients):
            nonzero = np.nonzero(f)[0]
            if nonzero.size == 0:
                sq += 4.0 * float(c.real) ** 2  # a_0 = 2 c_0
            elif f[nonzero[0]] > 0:
                sq += 4.0 * float(np.abs(c)) ** 2  # a_w^2 + b_w^2 = 4 |c_w|^2
        b_tilde = float(np.sqrt(sq))
        grid = _uniform_grid(self.input_dim, n_grid)
        b_est = float(np.max(np.abs(self(grid))))
        return b_est, b_tilde

    def to_dict(self) -> dict:
        return {
            "input_dim": self.input_dim,
            "frequencies": self.frequencies.tolist(),
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
        }

    @staticmethod
    def from_dict(d: dict) -> "TrigSeries":
        coefs = [complex(re, im) for re, im in d["coefficients"]]
        return TrigSeries(d["frequencies"], coefs)


def _uniform_grid(input_dim: int, n_per_axis: int) -> np.ndarray:
    axes = [np.linspace(0.0, _TWO_PI, n_per_axis, endpoint=False) for _ in range(input_dim)]
    if input_dim == 1:
        return axes[0].reshape(-1, 1)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _sample(f, input_dim: int, n_per_axis: int) -> np.ndarray:
    """Sample a callable or pass through a sample grid of shape (G,)*N."""
    shape = (n_per_axis,) * input_dim
    if callable(f):
        pts = _uniform_grid(input_dim, n_per_axis)
        vals = np.asarray(f(pts[:, 0] if input_dim == 1 else pts), dtype=float)
        return vals.reshape(shape)
    vals = np.asarray(f, dtype=float)
    if vals.shape != shape:
        raise ValueError(f"samples must have shape {shape}, got {vals.shape}")
    return vals


def _dft_coefficients(samples: np.ndarray, degree: int) -> np.ndarray:
    """Coefficients c_j on Z_degree^N from samples on the uniform grid.

    Plain FFT over the periodic rectangle grid; this equals the trapezoid
    quadrature of (2pi)^-N int f exp(-i j.x) dx with endpoint identification.
    """
    n_axes = samples.ndim
    g = samples.shape[0]
    if g < 2 * degree + 1:
        raise ValueError("grid too coarse for the requested degree")
    spec_full = np.fft.fftn(samples) / samples.size
    take = np.concatenate([np.arange(0, degree + 1), np.arange(g - degree, g)])
    for axis in range(n_axes):
        spec_full = np.take(spec_full, take, axis=axis)
    # reorder each axis from [0..K, -K..-1] to [-K..K]
    order = np.argsort(np.concatenate([np.arange(0, degree + 1), np.arange(-degree, 0)]))
    for axis in range(n_axes):
        spec_full = np.take(spec_full, order, axis=axis)
    return spec_full


def _degree_frequencies(degree: int, input_dim: int) -> np.ndarray:
    axes = [np.arange(-degree, degree + 1)] * input_dim
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def extract_series(f, degree: int, input_dim: int = 1, n_grid: int | None = None) -> TrigSeries:
    """Coefficients of f on Z_degree^N via uniform-grid DFT.

    Exact for targets band-limited to the requested degree; otherwise the
    coefficients carry the usual aliasing of the chosen grid.  ``f`` is a
    callable (a 1-D array of points for input_dim 1, an (M, N) array
    otherwise) or a pre-sampled (G,)*N grid matching ``n_grid``.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    g = n_grid if n_grid is not None else 2 * degree + 2
    samples = _sample(f, input_dim, g)
    coefs = _dft_coefficients(samples, degree).ravel()
    freqs = _degree_frequencies(degree, input_dim)
    return TrigSeries(freqs, coefs, tol=1e-8)


def fejer_mean(target, degree: int, input_dim: int = 1, n_grid: int = 4096) -> TrigSeries:
    """l1-weighted Fejer mean: c_j = (1 - |j|_1 / (N K)) fhat_j on Z_K^N.

    ``target`` may be a TrigSeries (its coefficients are used directly,
    missing frequencies count as zero) or a callable / sample grid whose
    coefficients are extracted on an ``n_grid``-point axis.
    """
    if degree <= 0:
        raise ValueError("degree must be positive")
    if isinstance(target, TrigSeries):
        if target.input_dim != input_dim:
            raise ValueError("input_dim mismatch with target series")
        freqs = _degree_frequencies(degree, input_dim)
        coefs = np.array([target.coefficient(f) for f in freqs])
    else:
        base = extract_series(target, degree, input_dim, n_grid=n_grid)
        freqs, coefs = base.frequencies, base.coefficients
    weights = 1.0 - np.sum(np.abs(freqs), axis=1) / (input_dim * degree)
    return TrigSeries(freqs, coefs * weights, tol=np.inf)


# -- smooth periodic extension ------------------------------------------------

_BUMP_RESOLUTION = 4096


def _bump_cdf_table() -> tuple[np.ndarray, np.ndarray]:
    t = np.linspace(-1.0, 1.0, _BUMP_RESOLUTION)
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        psi = np.where(np.abs(t) < 1.0, np.exp(-1.0 / np.maximum(1.0 - t * t, 1e-300)), 0.0)
    dt = t[1] - t[0]
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (psi[1:] + psi[:-1]) * dt)])
    return t, cdf / cdf[-1]


_BUMP_T, _BUMP_CDF = _bump_cdf_table()


def mollifier_cdf(t) -> np.ndarray:
    """Integral of the normalized smooth bump on [-1, 1]; 0 below, 1 above."""
    return np.interp(t, _BUMP_T, _BUMP_CDF, left=0.0, right=1.0)


def _edge_ramp(x: np.ndarray, lo: float, hi: float, delta: float) -> np.ndarray:
    # convolution of the indicator of [lo - delta, hi + delta] with the
    # width-delta bump: exactly 1 on [lo, hi], exactly 0 outside the
    # 2*delta neighborhood, smooth in between
    return mollifier_cdf((hi + delta - x) / delta) - mollifier_cdf((lo - delta - x) / delta)


@dataclass
class PeriodicExtension:
    """Grid function on [0, 2pi)^N extending a function given on a box U.

    Built as (extension of f) * (mollified indicator); equals f on U,
    vanishes outside the 2*delta neighborhood of U, periodic across faces.
    """

    u_lo: np.ndarray
    u_hi: np.ndarray
    delta: float
    axes: np.ndarray  # (n_grid,) shared per-axis grid on [0, 2pi)
    values: np.ndarray  # (n_grid,) * N

    @property
    def input_dim(self) -> int:
        return self.u_lo.shape[0]

    def __call__(self, x):
        pts = np.asarray(x, dtype=float)
        scalar = pts.ndim == 0
        pts = np.atleast_1d(pts)
        if self.input_dim != 1:
            raise NotImplementedError("pointwise evaluation implemented for 1-D extensions")
        grid = np.concatenate([self.axes, [_TWO_PI]])
        vals = np.concatenate([self.values, [self.values[0]]])
        out = np.interp(np.mod(pts, _TWO_PI), grid, vals)
        return float(out[0]) if scalar else out

    def fourier_coefficients(self, degree: int) -> TrigSeries:
        coefs = _dft_coefficients(self.values, degree).ravel()
        freqs = _degree_frequencies(degree, self.input_dim)
        return TrigSeries(freqs, coefs, tol=1e-8)


def periodic_extension(f, u, delta: float, n_grid: int = 4096) -> PeriodicExtension:
    """Smooth periodic extension of ``f`` from the box ``u`` to the torus.

    ``u`` is (lo, hi) in 1-D or a sequence of per-axis (lo, hi) pairs; the
    2*delta neighborhood of the box must stay inside (0, 2pi)^N.  ``f`` is
    a callable (evaluated wherever the mollified indicator is positive; its
    values off U act as the continuous extension) or a 1-D array of samples
    uniform on [lo, hi], interpolated linearly and clamped at the edges.
    """
    bounds = np.atleast_2d(np.asarray(u, dtype=float))
    if bounds.shape[1] != 2 or np.any(bounds[:, 0] >= bounds[:, 1]):
        raise ValueError("u must be one (lo, hi) pair per axis with lo < hi")
    if delta <= 0:
        raise ValueError("delta must be positive")
    lo, hi = bounds[:, 0], bounds[:, 1]
    if np.any(lo - 2 * delta <= 0.0) or np.any(hi + 2 * delta >= _TWO_PI):
        raise ValueError("2*delta neighborhood of u must stay inside (0, 2pi)")
    n_axes = bounds.shape[0]
    axes = np.linspace(0.0, _TWO_PI, n_grid, endpoint=False)

    ramps = [_edge_ramp(axes, lo[d], hi[d], delta) for d in range(n_axes)]
    window = ramps[0]
    for r in ramps[1:]:
        window = np.multiply.outer(window, r)

    if callable(f):
        source = f
    else:
        samples = np.asarray(f, dtype=float)
        if n_axes != 1 or samples.ndim != 1:
            raise ValueError("sample-array input is supported for 1-D extensions only")
        xs = np.linspace(lo[0], hi[0], samples.size)

        def source(pts, xs=xs, samples=samples):
            return np.interp(pts, xs, samples)

    values = np.zeros((n_grid,) * n_axes)
    mask = window > 0.0
    if n_axes == 1:
        values[mask] = np.asarray(source(axes[mask]), dtype=float)
    else:
        mesh = np.meshgrid(*([axes] * n_axes), indexing="ij")
        pts = np.stack([m[mask] for m in mesh], axis=-1)
        values[mask] = np.asarray(source(pts), dtype=float)
    values *= window
    return PeriodicExtension(lo, hi, float(delta), axes, values)


@dataclass
class FejerStudyResult:
    """Convergence table of Fejer means against a periodic extension."""

    degrees: tuple[int, ...]
    dist_l2: np.ndarray  # torus L2 distance to the extension, per degree
    dist_c0: np.ndarray  # max error against the raw target on U, per degree
    extension: PeriodicExtension

    def table(self) -> tuple[list[str], np.ndarray]:
        rows = np.column_stack(
            [np.asarray(self.degrees, dtype=float), self.dist_l2, self.dist_c0]
        )
        return ["K", "dist_l2", "dist_c0"], rows


def fejer_convergence_study(
    f,
    u,
    delta: float,
    degrees=(4, 8, 16, 32),
    n_grid: int = 4096,
    lp_points: int = 1001,
    c0_points: int = 10001,
) -> FejerStudyResult:
    """Fejer means of the periodic extension of ``f`` at increasing degree.

    Reports, per degree, the L2 distance to the extension over the whole
    torus (uniform probability measure) and the maximum error against the
    raw target on the original box U; both shrink as the degree grows.
    Univariate only, matching the experiment pipelines.
    """
    from .metrics import GridSpec, dist_c0, dist_lp

    ext = periodic_extension(f, u, delta, n_grid=n_grid)
    if ext.input_dim != 1:
        raise ValueError("the convergence study is univariate")
    lo, hi = ext.u_lo[0], ext.u_hi[0]
    torus = GridSpec(((0.0, _TWO_PI),), lp_points)
    box = GridSpec(((lo, hi),), c0_points)
    torus_pts = torus.points()[:, 0]
    box_pts = box.points()[:, 0]
    ext_vals = ext(torus_pts)
    f_vals = np.asarray(f(box_pts), dtype=float) if callable(f) else ext(box_pts)

    l2, c0 = [], []
    for degree in degrees:
        mean = fejer_mean(ext.values, int(degree), n_grid=n_grid)
        l2.append(dist_lp(ext_vals, mean(torus_pts), 2, torus))
        c0.append(dist_c0(f_vals, mean(box_pts), box))
    return FejerStudyResult(tuple(int(k) for k in degrees), np.asarray(l2), np.asarray(c0), ext)


def magnitude_decay_exponent(s: TrigSeries, j_min: int, j_max: int) -> float:
    """Log-log slope of 1-D coefficient magnitude versus frequency.

    Magnitudes of the +j and -j coefficients are averaged; frequencies with
    negligible magnitude (< 1e-300) are skipped.
    """
    if s.input_dim != 1:
        raise ValueError("decay measurement implemented for 1-D series")
    js, mags = [], []
    for j in range(j_min, j_max + 1):
        m = 0.5 * (abs(s.coefficient(j)) + abs(s.coefficient(-j)))
        if m > 1e-300:
            js.append(j)
            mags.append(m)
    if len(js) < 2:
        raise ValueError("not enough nonzero coefficients in the requested range")
    slope = np.polyfit(np.log(np.asarray(js, dtype=float)), np.log(mags), 1)[0]
    return float(slope)
