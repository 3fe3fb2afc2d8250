"""Layered data-reuploading circuits and their frequency content.

The default family has, per layer and per qubit, an X rotation carrying
the (scaled) input followed by a trainable Z-then-Y rotation pair, then a
fixed CNOT pattern.  The Z rotation matters: with purely real trainable
gates (Y rotations and CNOTs have real matrices) the expectation would be
an even function of the input for every parameter choice, since conjugating
the circuit flips only the sign of the X-encoding angles.  The phase gate
unlocks the sine half of the accessible series.

The expectation of a Z-string observable on such a circuit is a
trigonometric polynomial in the inputs; ``model_degree`` gives its maximal
integer frequency and ``frequency_spectrum`` the generic spectrum of an
encoding Hamiltonian (all pairwise eigenvalue differences).

Multivariate inputs use parallel encoding: the qubit register is split
into ``input_dim`` contiguous blocks and block ``d`` encodes coordinate
``x_d`` in every layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .statevector import Observable, apply_gate, cnot, init_zero, rx, ry, rz

# trainable rotations applied to each qubit in each layer, in circuit order
TRAIN_ROTATIONS = ("rz", "ry")


def default_entanglers(n_qubits: int) -> tuple[tuple[int, int], ...]:
    """Per-layer CNOT pattern: (0,1),(1,0) for a pair, a forward ring otherwise."""
    if n_qubits == 1:
        return ()
    if n_qubits == 2:
        return ((0, 1), (1, 0))
    return tuple((q, (q + 1) % n_qubits) for q in range(n_qubits))


@dataclass(frozen=True)
class CircuitSpec:
    n_qubits: int = 2
    n_layers: int = 3
    encoding_scale: float = 1.0
    input_dim: int = 1
    entanglers: tuple[tuple[int, int], ...] | None = None
    observable: Observable | None = None

    def __post_init__(self) -> None:
        if self.n_qubits < 1 or self.n_layers < 1:
            raise ValueError("n_qubits and n_layers must be >= 1")
        if self.input_dim < 1 or self.n_qubits % self.input_dim != 0:
            raise ValueError("n_qubits must be a positive multiple of input_dim")
        for c, t in self.entangler_pattern:
            if c == t or not (0 <= c < self.n_qubits and 0 <= t < self.n_qubits):
                raise ValueError(f"bad entangler pair ({c}, {t})")

    @property
    def entangler_pattern(self) -> tuple[tuple[int, int], ...]:
        if self.entanglers is not None:
            return self.entanglers
        return default_entanglers(self.n_qubits)

    @property
    def obs(self) -> Observable:
        return self.observable if self.observable is not None else Observable.mean_z(self.n_qubits)

    @property
    def n_params(self) -> int:
        return len(TRAIN_ROTATIONS) * self.n_qubits * self.n_layers

    @property
    def block_size(self) -> int:
        return self.n_qubits // self.input_dim

    def input_index(self, qubit: int) -> int:
        """Input coordinate encoded on a given qubit."""
        return qubit // self.block_size

    @property
    def n_encoding_gates(self) -> int:
        return self.n_qubits * self.n_layers

    def to_dict(self) -> dict:
        d = {
            "n_qubits": self.n_qubits,
            "n_layers": self.n_layers,
            "encoding_scale": self.encoding_scale,
            "input_dim": self.input_dim,
        }
        if self.entanglers is not None:
            d["entanglers"] = [list(pair) for pair in self.entanglers]
        if self.observable is not None:
            d["observable"] = [[c, list(qs)] for c, qs in self.observable.terms]
        return d

    @staticmethod
    def from_dict(d: dict) -> "CircuitSpec":
        kwargs = {
            "n_qubits": int(d.get("n_qubits", 2)),
            "n_layers": int(d.get("n_layers", 3)),
            "encoding_scale": float(d.get("encoding_scale", 1.0)),
            "input_dim": int(d.get("input_dim", 1)),
        }
        if "entanglers" in d and d["entanglers"] is not None:
            kwargs["entanglers"] = tuple(tuple(int(q) for q in pair) for pair in d["entanglers"])
        if "observable" in d and d["observable"] is not None:
            kwargs["observable"] = Observable.from_terms(
                (float(c), tuple(int(q) for q in qs)) for c, qs in d["observable"]
            )
        return CircuitSpec(**kwargs)


def _as_theta_grid(spec: CircuitSpec, theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (spec.n_params,):
        raise ValueError(f"theta must have length {spec.n_params}, got shape {theta.shape}")
    if not np.all(np.isfinite(theta)):
        raise ValueError("theta entries must be finite")
    # layout: theta[(l * n_qubits + q) * 2 + r] drives rotation r (0 = RZ,
    # 1 = RY) on qubit q in layer l
    return theta.reshape(spec.n_layers, spec.n_qubits, len(TRAIN_ROTATIONS))


def _as_input(spec: CircuitSpec, x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (spec.input_dim,):
        raise ValueError(f"input must have {spec.input_dim} coordinates, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("input coordinates must be finite")
    return x


def gate_sequence(spec: CircuitSpec, theta: np.ndarray, x) -> list:
    """Explicit gate list for one evaluation (reference path)."""
    th = _as_theta_grid(spec, theta)
    xv = _as_input(spec, x)
    gates = []
    for layer in range(spec.n_layers):
        for q in range(spec.n_qubits):
            gates.append(rx(q, spec.encoding_scale * xv[spec.input_index(q)]))
        for q in range(spec.n_qubits):
            gates.append(rz(q, th[layer, q, 0]))
            gates.append(ry(q, th[layer, q, 1]))
        for c, t in spec.entangler_pattern:
            gates.append(cnot(c, t))
    return gates


def evaluate(spec: CircuitSpec, theta: np.ndarray, x) -> float:
    """Observable expectation of the circuit at one (theta, x)."""
    state = init_zero(spec.n_qubits)
    for gate in gate_sequence(spec, theta, x):
        state = apply_gate(state, gate)
    diag = spec.obs.diagonal(spec.n_qubits)
    return float(np.dot(state.probabilities(), diag))


# -- batched kernel -----------------------------------------------------------
#
# All gradient rules reduce to evaluating the same circuit topology at many
# angle configurations; doing that as one vectorized pass over a batch axis
# is what keeps full experiments fast.


def _rotate_batch(psi: np.ndarray, kind: str, angles: np.ndarray, qubit: int) -> np.ndarray:
    # psi: (B, 2, ..., 2); angles: (B,)
    axis = qubit + 1
    s = np.moveaxis(psi, axis, -1)
    shape = (psi.shape[0],) + (1,) * (psi.ndim - 2)
    c = np.cos(angles / 2.0).reshape(shape)
    sn = np.sin(angles / 2.0).reshape(shape)
    s0, s1 = s[..., 0], s[..., 1]
    if kind == "rx":
        new0 = c * s0 - 1j * sn * s1
        new1 = -1j * sn * s0 + c * s1
    elif kind == "rz":
        new0 = (c - 1j * sn) * s0
        new1 = (c + 1j * sn) * s1
    else:  # ry
        new0 = c * s0 - sn * s1
        new1 = sn * s0 + c * s1
    return np.moveaxis(np.stack((new0, new1), axis=-1), -1, axis)


def _cnot_batch(psi: np.ndarray, control: int, target: int) -> np.ndarray:
    s = np.moveaxis(psi, (control + 1, target + 1), (-2, -1)).copy()
    s[..., 1, :] = s[..., 1, ::-1]
    return np.moveaxis(s, (-2, -1), (control + 1, target + 1))


def expectation_batch(
    spec: CircuitSpec, enc_angles: np.ndarray, train_angles: np.ndarray
) -> np.ndarray:
    """Expectations for a batch of per-gate angle configurations.

    enc_angles: (B, n_layers, n_qubits) encoding RX angles; train_angles:
    (B, n_layers, n_qubits, 2) trainable (RZ, RY) angles.
    """
    n, L = spec.n_qubits, spec.n_layers
    B = enc_angles.shape[0]
    n_rot = len(TRAIN_ROTATIONS)
    if enc_angles.shape != (B, L, n) or train_angles.shape != (B, L, n, n_rot):
        raise ValueError("angle arrays must have shapes (B, L, n) and (B, L, n, 2)")
    psi = np.zeros((B,) + (2,) * n, dtype=complex)
    psi[(slice(None),) + (0,) * n] = 1.0
    for layer in range(L):
        for q in range(n):
            psi = _rotate_batch(psi, "rx", enc_angles[:, layer, q], q)
        for q in range(n):
            for r, kind in enumerate(TRAIN_ROTATIONS):
                psi = _rotate_batch(psi, kind, train_angles[:, layer, q, r], q)
        for c, t in spec.entangler_pattern:
            psi = _cnot_batch(psi, c, t)
    probs = np.abs(psi.reshape(B, -1)) ** 2
    return probs @ spec.obs.diagonal(n)


def encoding_angles(spec: CircuitSpec, xs: np.ndarray) -> np.ndarray:
    """Map inputs (B, input_dim) to encoding-gate angles (B, L, n_qubits)."""
    xs = np.asarray(xs, dtype=float)
    if xs.ndim == 1:
        xs = xs[:, None]
    if xs.shape[1] != spec.input_dim:
        raise ValueError(f"inputs must have {spec.input_dim} columns")
    per_qubit = xs[:, [spec.input_index(q) for q in range(spec.n_qubits)]]
    angles = spec.encoding_scale * per_qubit  # (B, n_qubits)
    return np.repeat(angles[:, None, :], spec.n_layers, axis=1)


def evaluate_batch(spec: CircuitSpec, thetas: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Vectorized ``evaluate`` over rows of thetas (B, P) and xs (B, N)."""
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim == 1:
        thetas = thetas[None, :]
    B = thetas.shape[0]
    if thetas.shape != (B, spec.n_params):
        raise ValueError(f"thetas must have {spec.n_params} columns")
    enc = encoding_angles(spec, xs)
    if enc.shape[0] != B:
        raise ValueError("thetas and xs must have the same batch length")
    train = thetas.reshape(B, spec.n_layers, spec.n_qubits, len(TRAIN_ROTATIONS))
    return expectation_batch(spec, enc, train)


def surrogate_series(spec: CircuitSpec, theta: np.ndarray, n_grid: int | None = None):
    """Exact trigonometric-series form of the model at fixed theta.

    The expectation is band-limited to the accessible integer frequencies,
    so a DFT on a fine-enough grid recovers its coefficients exactly (up to
    roundoff) and the returned series matches ``evaluate`` pointwise.
    """
    from .trigseries import extract_series

    theta = np.asarray(theta, dtype=float)
    degree = model_degree(spec)

    def f(pts):
        pts2 = np.asarray(pts, dtype=float).reshape(-1, spec.input_dim)
        thetas = np.broadcast_to(theta, (pts2.shape[0], spec.n_params))
        return evaluate_batch(spec, thetas, pts2)

    return extract_series(f, degree, spec.input_dim, n_grid=n_grid)


# -- frequency content --------------------------------------------------------


def frequency_spectrum(eigenvalues, tol: float = 1e-9) -> np.ndarray:
    """All pairwise eigenvalue differences, deduplicated and sorted.

    This is the frequency set generated by one application of an encoding
    Hamiltonian with the given spectrum; it always contains 0 and is
    symmetric about it.
    """
    lam = np.asarray(list(eigenvalues), dtype=float)
    if lam.size == 0:
        raise ValueError("eigenvalue list must be nonempty")
    diffs = (lam[:, None] - lam[None, :]).ravel()
    diffs = np.sort(diffs)
    keep = [diffs[0]]
    for d in diffs[1:]:
        if d - keep[-1] > tol:
            keep.append(d)
    out = np.array(keep)
    return np.where(np.abs(out) <= tol, 0.0, out)


def model_degree(spec: CircuitSpec) -> int:
    """Maximal integer frequency per input coordinate.

    Each of the ``block_size * n_layers`` half-angle X encodings of a
    coordinate contributes eigenvalue differences in {-1, 0, 1} times the
    encoding scale, so the accessible degree is their count times the
    scale.  Requires an integer encoding scale; otherwise the spectrum is
    not integer and callers should use ``accessible_frequencies``.
    """
    k = spec.block_size * spec.n_layers * spec.encoding_scale
    if abs(k - round(k)) > 1e-12:
        raise ValueError(
            "encoding scale yields a non-integer spectrum; "
            "use accessible_frequencies for the rational frequency list"
        )
    return int(round(k))


def accessible_frequencies(spec: CircuitSpec) -> np.ndarray:
    """Reachable frequencies per input coordinate (any real encoding scale)."""
    reps = spec.block_size * spec.n_layers
    return spec.encoding_scale * np.arange(-reps, reps + 1, dtype=float)
