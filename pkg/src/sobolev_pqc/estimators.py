"""Scikit-learn style wrappers around the circuit regression pipeline.

These give the trainer a fit/predict surface so the model can sit inside
sklearn pipelines and grid searches.  The heavy lifting stays in
``trainer``; the wrappers only handle domain inference, input scaling and
parameter bookkeeping.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.exceptions import NotFittedError

from .metrics import Dataset
from .pqc import CircuitSpec, evaluate_batch, surrogate_series
from .trainer import AdamParams, Normalizer, TARGET_INTERVALS, _train_runs


def _as_points(X) -> np.ndarray:
    pts = np.asarray(X, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2:
        raise ValueError("X must be a 1-D or 2-D array of points")
    return pts


class IntervalScaler(TransformerMixin, BaseEstimator):
    """Min-max scale every input axis onto a named symmetric interval.

    The target interval is one of the keys of ``TARGET_INTERVALS``
    ("half", "full", "double").  The source box is learned from the data.
    """

    def __init__(self, normalization: str = "half"):
        self.normalization = normalization

    def fit(self, X, y=None):
        pts = _as_points(X)
        source = tuple((float(c.min()), float(c.max())) for c in pts.T)
        if any(a >= b for a, b in source):
            raise ValueError("every input axis needs at least two distinct values")
        self.normalizer_ = Normalizer.from_name(source, self.normalization)
        return self

    def _check_fitted(self):
        if not hasattr(self, "normalizer_"):
            raise NotFittedError("this scaler has not been fitted")

    def transform(self, X):
        self._check_fitted()
        pts = _as_points(X)
        return np.asarray(self.normalizer_.transform(pts)).reshape(pts.shape)

    def inverse_transform(self, X):
        self._check_fitted()
        pts = _as_points(X)
        return np.asarray(self.normalizer_.inverse(pts)).reshape(pts.shape)


class PQCRegressor(RegressorMixin, BaseEstimator):
    """Band-limited circuit regressor trained by full-batch Adam.

    Inputs are min-max scaled onto the ``normalization`` interval before
    entering the encoding gates; the model is the observable expectation
    of the layered circuit, a trigonometric series of bounded degree.
    With ``loss="h1"`` the fit also matches first-derivative labels.
    """

    def __init__(
        self,
        n_qubits: int = 2,
        n_layers: int = 3,
        encoding_scale: float = 1.0,
        loss: str = "l2",
        epochs: int = 100,
        learning_rate: float = 0.1,
        normalization: str = "half",
        domain=None,
        random_state: int = 0,
    ):
        self.n_qubits = n_qubits
        self.n_layers = n_layers
        self.encoding_scale = encoding_scale
        self.loss = loss
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.normalization = normalization
        self.domain = domain
        self.random_state = random_state

    def fit(self, X, y, dy=None):
        if self.loss not in ("l2", "h1"):
            raise ValueError("loss must be 'l2' or 'h1'")
        if self.normalization not in TARGET_INTERVALS:
            raise ValueError(f"unknown normalization {self.normalization!r}")
        pts = _as_points(X)
        y = np.asarray(y, dtype=float).ravel()
        if y.size != pts.shape[0]:
            raise ValueError("X and y disagree on the number of samples")

        if self.domain is not None:
            source = tuple((float(a), float(b)) for a, b in np.atleast_2d(self.domain))
        else:
            source = tuple((float(c.min()), float(c.max())) for c in pts.T)
        if any(a >= b for a, b in source):
            raise ValueError("degenerate input domain; pass domain= explicitly")
        self.normalizer_ = Normalizer.from_name(source, self.normalization)

        order = 1 if self.loss == "h1" else 0
        if order == 1:
            if dy is None:
                raise ValueError("loss='h1' needs derivative labels dy")
            dy = np.asarray(dy, dtype=float).reshape(pts.shape[0], pts.shape[1])
        raw = Dataset(pts, y, dy if order else None, order)
        data = self.normalizer_.transform_dataset(raw)

        self.spec_ = CircuitSpec(
            n_qubits=self.n_qubits,
            n_layers=self.n_layers,
            encoding_scale=self.encoding_scale,
            input_dim=pts.shape[1],
        )
        adam = AdamParams(learning_rate=self.learning_rate)
        seeds = np.array([self.random_state])
        thetas, initial, final, _ = _train_runs(
            self.spec_, data, self.loss, self.epochs, adam, seeds
        )
        self.theta_ = thetas[0]
        self.initial_loss_ = float(initial[0])
        self.final_loss_ = float(final[0])
        self.n_features_in_ = pts.shape[1]
        return self

    def _check_fitted(self):
        if not hasattr(self, "theta_"):
            raise NotFittedError("this regressor has not been fitted")

    def predict(self, X):
        self._check_fitted()
        pts = _as_points(X)
        scaled = np.asarray(self.normalizer_.transform(pts)).reshape(pts.shape)
        return evaluate_batch(
            self.spec_, np.tile(self.theta_, (pts.shape[0], 1)), scaled
        )

    def to_series(self):
        """Exact trigonometric series of the fitted model (scaled inputs)."""
        self._check_fitted()
        return surrogate_series(self.spec_, self.theta_)
