"""Continuous distances (L^p, C0, H^k) and discrete empirical losses.

Continuous distances integrate over a uniform probability measure on a
rectangular domain with composite trapezoid quadrature; empirical losses
average over a finite labelled dataset.  Derivative bookkeeping uses
graded-lexicographic multi-indices, the same order the dataset text format
uses for its derivative columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import datatable

DEFAULT_LP_POINTS = 1001
DEFAULT_C0_POINTS = 10001


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def multi_indices(input_dim: int, order: int, min_order: int = 1) -> tuple[tuple[int, ...], ...]:
    """Multi-indices alpha with min_order <= |alpha| <= order, graded-lex.

    Grades ascend; within a grade, indices are lexicographically descending,
    so for N=2, k=2: (1,0), (0,1), (2,0), (1,1), (0,2).
    """
    if input_dim < 1 or order < 0 or min_order < 0:
        raise ValueError("input_dim >= 1 and 0 <= min_order <= order required")
    out = []
    for grade in range(min_order, order + 1):
        out.extend(_compositions(grade, input_dim))
    return tuple(out)


def count_derivatives(input_dim: int, order: int) -> int:
    """Number of distinct partial derivatives of orders 1..order."""
    if input_dim < 1 or order < 0:
        raise ValueError("input_dim >= 1 and order >= 0 required")
    return sum(math.comb(a + input_dim - 1, input_dim - 1) for a in range(1, order + 1))


@dataclass(frozen=True)
class GridSpec:
    """Uniform tensor grid with inclusive endpoints for quadrature and sup."""

    bounds: tuple[tuple[float, float], ...]
    points_per_axis: int

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in np.atleast_2d(self.bounds))
        object.__setattr__(self, "bounds", bounds)
        if any(lo >= hi for lo, hi in bounds):
            raise ValueError("each axis needs lo < hi")
        if self.points_per_axis < 2:
            raise ValueError("at least two points per axis")

    @property
    def input_dim(self) -> int:
        return len(self.bounds)

    @property
    def volume(self) -> float:
        return float(np.prod([hi - lo for lo, hi in self.bounds]))

    def axes(self) -> list[np.ndarray]:
        return [np.linspace(lo, hi, self.points_per_axis) for lo, hi in self.bounds]

    def points(self) -> np.ndarray:
        axes = self.axes()
        if self.input_dim == 1:
            return axes[0].reshape(-1, 1)
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def quad_weights(self, normalized: bool = True) -> np.ndarray:
        """Flattened trapezoid weights; normalized ones sum to 1 exactly."""
        per_axis = []
        for lo, hi in self.bounds:
            dx = (hi - lo) / (self.points_per_axis - 1)
            w = np.full(self.points_per_axis, dx)
            w[0] = w[-1] = 0.5 * dx
            per_axis.append(w)
        weights = per_axis[0]
        for w in per_axis[1:]:
            weights = np.multiply.outer(weights, w)
        weights = weights.ravel()
        return weights / self.volume if normalized else weights

    def refined(self, factor: int) -> "GridSpec":
        return GridSpec(self.bounds, (self.points_per_axis - 1) * factor + 1)


def _evaluate(f, pts: np.ndarray) -> np.ndarray:
    if callable(f):
        x = pts[:, 0] if pts.shape[1] == 1 else pts
        vals = np.asarray(f(x), dtype=float)
    else:
        vals = np.asarray(f, dtype=float)
    if vals.shape != (pts.shape[0],):
        raise ValueError(f"expected {pts.shape[0]} values, got shape {vals.shape}")
    return vals


def _deriv_table(obj, order: int, input_dim: int) -> dict:
    """Normalize a derivative source to {alpha: callable-or-values}."""
    if hasattr(obj, "keys"):
        table = dict(obj)
    elif hasattr(obj, "differentiate"):
        table = {alpha: obj.differentiate(alpha) for alpha in multi_indices(input_dim, order)}
        table[(0,) * input_dim] = obj
    else:
        raise TypeError("need a mapping of multi-indices or an object with differentiate()")
    for alpha in multi_indices(input_dim, order, min_order=0):
        if alpha not in table:
            raise ValueError(f"missing derivative for multi-index {alpha}")
    return table


def dist_lp(f, g, p: float, grid: GridSpec) -> float:
    """(integral of |f - g|^p against the uniform probability measure)^(1/p)."""
    if p < 1:
        raise ValueError("p must be >= 1")
    pts = grid.points()
    diff = np.abs(_evaluate(f, pts) - _evaluate(g, pts))
    return float(np.sum(grid.quad_weights() * diff**p) ** (1.0 / p))


def dist_c0(f, g, grid: GridSpec) -> float:
    """Grid maximum of |f - g| (sup-norm estimate, not a certified sup)."""
    pts = grid.points()
    return float(np.max(np.abs(_evaluate(f, pts) - _evaluate(g, pts))))


def dist_hk(f_and_derivs, g_and_derivs, k: int, grid: GridSpec) -> float:
    """Sobolev distance: (sum over |alpha| <= k of the squared L2 gaps)^(1/2)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    pts = grid.points()
    w = grid.quad_weights()
    ftab = _deriv_table(f_and_derivs, k, grid.input_dim)
    gtab = _deriv_table(g_and_derivs, k, grid.input_dim)
    total = 0.0
    for alpha in multi_indices(grid.input_dim, k, min_order=0):
        diff = _evaluate(ftab[alpha], pts) - _evaluate(gtab[alpha], pts)
        total += float(np.sum(w * diff**2))
    return math.sqrt(total)


# -- datasets and empirical losses --------------------------------------------


@dataclass
class Dataset:
    """Labelled sample: points, values, optional derivative labels.

    ``dy`` holds one column per multi-index of ``multi_indices(N, k)`` in
    graded-lexicographic order, matching the text serialization d1..dM.
    """

    x: np.ndarray
    y: np.ndarray
    dy: np.ndarray | None = None
    deriv_order: int = 0
    indices: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        self.x = x
        self.y = np.asarray(self.y, dtype=float).ravel()
        if self.x.shape[0] != self.y.shape[0] or self.y.shape[0] < 1:
            raise ValueError("need matching x, y with at least one point")
        if self.deriv_order < 0:
            raise ValueError("deriv_order must be >= 0")
        self.indices = multi_indices(self.input_dim, self.deriv_order)
        if self.deriv_order >= 1:
            m = count_derivatives(self.input_dim, self.deriv_order)
            if self.dy is None:
                raise ValueError("derivative labels required when deriv_order >= 1")
            self.dy = np.asarray(self.dy, dtype=float).reshape(self.n_points, m)
        else:
            self.dy = None

    @property
    def n_points(self) -> int:
        return self.x.shape[0]

    @property
    def input_dim(self) -> int:
        return self.x.shape[1]

    def to_table(self) -> tuple[list[str], np.ndarray]:
        if self.input_dim == 1:
            header = ["x"]
        else:
            header = [f"x{d + 1}" for d in range(self.input_dim)]
        header.append("y")
        cols = [self.x, self.y.reshape(-1, 1)]
        if self.dy is not None:
            header.extend(f"d{i + 1}" for i in range(self.dy.shape[1]))
            cols.append(self.dy)
        return header, np.hstack(cols)

    def save(self, path: str) -> None:
        header, rows = self.to_table()
        datatable.write_dat(path, header, rows)

    @staticmethod
    def load(path: str) -> "Dataset":
        header, rows = datatable.read_dat(path)
        n_x = sum(1 for h in header if h == "x" or (h.startswith("x") and h[1:].isdigit()))
        n_d = sum(1 for h in header if h.startswith("d") and h[1:].isdigit())
        if n_x < 1 or header[n_x] != "y" or n_x + 1 + n_d != len(header):
            raise ValueError(f"unrecognized dataset header {header}")
        order = _order_from_count(n_x, n_d)
        dy = rows[:, n_x + 1 :] if n_d else None
        return Dataset(rows[:, :n_x], rows[:, n_x], dy, order)


def _order_from_count(input_dim: int, n_columns: int) -> int:
    order = 0
    while count_derivatives(input_dim, order) < n_columns:
        order += 1
    if count_derivatives(input_dim, order) != n_columns:
        raise ValueError(f"{n_columns} derivative columns match no order for N={input_dim}")
    return order


def _predictions(data: Dataset, f) -> np.ndarray:
    return _evaluate(f, data.x)


def loss_l2_squared(data: Dataset, f) -> float:
    resid = data.y - _predictions(data, f)
    return float(np.mean(resid**2))


def loss_l2(data: Dataset, f) -> float:
    """Root mean squared residual over the dataset."""
    return math.sqrt(loss_l2_squared(data, f))


def loss_linf(data: Dataset, f) -> float:
    """Largest absolute residual over the dataset."""
    return float(np.max(np.abs(data.y - _predictions(data, f))))


def loss_hk_squared(data: Dataset, f_and_derivs, k: int) -> float:
    if k > data.deriv_order:
        raise ValueError(f"dataset carries derivatives to order {data.deriv_order}, need {k}")
    table = _deriv_table(f_and_derivs, k, data.input_dim)
    zero = (0,) * data.input_dim
    total = (data.y - _evaluate(table[zero], data.x)) ** 2
    for col, alpha in enumerate(multi_indices(data.input_dim, k)):
        resid = data.dy[:, col] - _evaluate(table[alpha], data.x)
        total = total + resid**2
    return float(np.mean(total))


def loss_hk(data: Dataset, f_and_derivs, k: int) -> float:
    """Rooted mean of value plus derivative squared residuals up to order k."""
    return math.sqrt(loss_hk_squared(data, f_and_derivs, k))
