"""Exact model derivatives via the parameter-shift rule.

Every gate in the circuit family is a half-angle Pauli rotation, so the
derivative with respect to any single gate angle a is exactly
[f(a + pi/2) - f(a - pi/2)] / 2.  Input derivatives sum that rule over all
encoding-gate instances carrying the coordinate (product rule), scaled by
the encoding scale.  Mixed theta/x second derivatives nest the two rules.
All shifted evaluations of one call are assembled into a single batch.

Higher-order input derivatives are not nested here; callers differentiate
the band-limited series surrogate instead, which is exact and cheaper.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pqc import TRAIN_ROTATIONS, CircuitSpec, encoding_angles, expectation_batch

_SHIFT = 0.5 * np.pi


@dataclass(frozen=True)
class GradientReport:
    """Gradients at one (theta, x) plus the circuit-evaluation budget."""

    value: float
    grad_theta: np.ndarray
    grad_x: np.ndarray
    n_evaluations: int


def _encoding_instances(spec: CircuitSpec) -> list[tuple[int, int, int]]:
    # (layer, qubit, coordinate) for every encoding-gate instance
    return [
        (layer, q, spec.input_index(q))
        for layer in range(spec.n_layers)
        for q in range(spec.n_qubits)
    ]


def batch_gradients(
    spec: CircuitSpec,
    thetas: np.ndarray,
    xs: np.ndarray,
    with_input: bool = False,
    mixed: bool = False,
) -> dict:
    """Values and gradients for every (run, point) pair in one batch.

    thetas: (R, P) parameter rows; xs: (I, N) input rows.  Returns values
    (R, I), grad_theta (R, I, P), with ``with_input`` also grad_x (R, I, N),
    and with ``mixed`` also the second derivatives d2f/dtheta dx (R, I, P, N).
    """
    with_input = with_input or mixed
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    R, P = thetas.shape
    if P != spec.n_params:
        raise ValueError(f"thetas must have {spec.n_params} columns")
    xs = np.asarray(xs, dtype=float)
    if xs.ndim == 1:
        xs = xs[:, None]
    I = xs.shape[0]
    L, n = spec.n_layers, spec.n_qubits
    n_rot = len(TRAIN_ROTATIONS)
    E = spec.n_encoding_gates
    instances = _encoding_instances(spec)

    def param_slot(j: int) -> tuple[int, int, int]:
        lq, r = divmod(j, n_rot)
        l, q = divmod(lq, n)
        return l, q, r

    enc0 = np.broadcast_to(encoding_angles(spec, xs), (R, I, L, n))
    tr0 = np.broadcast_to(thetas.reshape(R, 1, L, n, n_rot), (R, I, L, n, n_rot))

    enc_blocks = [enc0.reshape(-1, L, n)]
    tr_blocks = [tr0.reshape(-1, L, n, n_rot)]

    tr_shift = np.broadcast_to(tr0, (P, 2, R, I, L, n, n_rot)).copy()
    enc_base = np.broadcast_to(enc0, (P, 2, R, I, L, n))
    for j in range(P):
        l, q, r = param_slot(j)
        tr_shift[j, 0, :, :, l, q, r] += _SHIFT
        tr_shift[j, 1, :, :, l, q, r] -= _SHIFT
    enc_blocks.append(enc_base.reshape(-1, L, n))
    tr_blocks.append(tr_shift.reshape(-1, L, n, n_rot))

    if with_input:
        enc_shift = np.broadcast_to(enc0, (E, 2, R, I, L, n)).copy()
        tr_base = np.broadcast_to(tr0, (E, 2, R, I, L, n, n_rot))
        for e, (l, q, _) in enumerate(instances):
            enc_shift[e, 0, :, :, l, q] += _SHIFT
            enc_shift[e, 1, :, :, l, q] -= _SHIFT
        enc_blocks.append(enc_shift.reshape(-1, L, n))
        tr_blocks.append(tr_base.reshape(-1, L, n, n_rot))

    if mixed:
        enc_mixed = np.broadcast_to(enc_shift[None, None], (P, 2, E, 2, R, I, L, n)).copy()
        tr_mixed = np.broadcast_to(tr0, (P, 2, E, 2, R, I, L, n, n_rot)).copy()
        for j in range(P):
            l, q, r = param_slot(j)
            tr_mixed[j, 0, :, :, :, :, l, q, r] += _SHIFT
            tr_mixed[j, 1, :, :, :, :, l, q, r] -= _SHIFT
        enc_blocks.append(enc_mixed.reshape(-1, L, n))
        tr_blocks.append(tr_mixed.reshape(-1, L, n, n_rot))

    vals = expectation_batch(spec, np.concatenate(enc_blocks), np.concatenate(tr_blocks))

    sizes = [R * I, P * 2 * R * I]
    if with_input:
        sizes.append(E * 2 * R * I)
    if mixed:
        sizes.append(P * 2 * E * 2 * R * I)
    splits = np.split(vals, np.cumsum(sizes)[:-1])

    out = {"values": splits[0].reshape(R, I)}
    v_theta = splits[1].reshape(P, 2, R, I)
    out["grad_theta"] = np.moveaxis(0.5 * (v_theta[:, 0] - v_theta[:, 1]), 0, -1)
    out["n_evaluations"] = int(vals.shape[0])

    if with_input:
        scale = spec.encoding_scale
        v_x = splits[2].reshape(E, 2, R, I)
        per_instance = 0.5 * scale * (v_x[:, 0] - v_x[:, 1])  # (E, R, I)
        grad_x = np.zeros((R, I, spec.input_dim))
        for e, (_, _, d) in enumerate(instances):
            grad_x[:, :, d] += per_instance[e]
        out["grad_x"] = grad_x

    if mixed:
        v_m = splits[3].reshape(P, 2, E, 2, R, I)
        per_pair = 0.25 * scale * (
            v_m[:, 0, :, 0] - v_m[:, 0, :, 1] - v_m[:, 1, :, 0] + v_m[:, 1, :, 1]
        )  # (P, E, R, I)
        mixed = np.zeros((R, I, P, spec.input_dim))
        for e, (_, _, d) in enumerate(instances):
            mixed[:, :, :, d] += np.moveaxis(per_pair[:, e], 0, -1)
        out["mixed"] = mixed
    return out


def grad_theta(spec: CircuitSpec, theta: np.ndarray, x) -> np.ndarray:
    """Gradient of the expectation with respect to each trainable angle."""
    res = batch_gradients(spec, np.asarray(theta, dtype=float), np.atleast_2d(x)[:1])
    return res["grad_theta"][0, 0]


def grad_x(spec: CircuitSpec, theta: np.ndarray, x) -> np.ndarray:
    """Gradient with respect to each input coordinate (product-rule sum)."""
    res = batch_gradients(spec, np.asarray(theta, dtype=float), np.atleast_2d(x)[:1], True)
    return res["grad_x"][0, 0]


def gradient_report(spec: CircuitSpec, theta: np.ndarray, x) -> GradientReport:
    """Value plus both first-order gradients at one configuration.

    The evaluation count is 1 + 2 * n_params + 2 * n_encoding_gates: the
    base value, two shifts per trainable angle, two per encoding instance.
    """
    res = batch_gradients(spec, np.asarray(theta, dtype=float), np.atleast_2d(x)[:1], True)
    return GradientReport(
        value=float(res["values"][0, 0]),
        grad_theta=res["grad_theta"][0, 0],
        grad_x=res["grad_x"][0, 0],
        n_evaluations=res["n_evaluations"],
    )


def finite_difference_theta(spec: CircuitSpec, theta, x, h: float = 1e-5) -> np.ndarray:
    """Central-difference oracle for grad_theta."""
    from .pqc import evaluate

    theta = np.asarray(theta, dtype=float)
    out = np.empty_like(theta)
    for j in range(theta.size):
        up, dn = theta.copy(), theta.copy()
        up[j] += h
        dn[j] -= h
        out[j] = (evaluate(spec, up, x) - evaluate(spec, dn, x)) / (2 * h)
    return out


def finite_difference_x(spec: CircuitSpec, theta, x, h: float = 1e-5) -> np.ndarray:
    """Central-difference oracle for grad_x."""
    from .pqc import evaluate

    xv = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(xv)
    for d in range(xv.size):
        up, dn = xv.copy(), xv.copy()
        up[d] += h
        dn[d] -= h
        out[d] = (evaluate(spec, theta, up) - evaluate(spec, theta, dn)) / (2 * h)
    return out
