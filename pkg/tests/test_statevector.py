"""Simulator unit tests: gate algebra, basis conventions, observables."""

import numpy as np
import pytest

from sobolev_pqc.statevector import (
    Gate,
    Observable,
    StateVector,
    apply_circuit,
    apply_gate,
    cnot,
    expectation,
    init_zero,
    rx,
    ry,
    rz,
    _rotation_matrix,
)


def random_state(rng, n_qubits):
    amps = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    amps /= np.linalg.norm(amps)
    return StateVector(n_qubits, amps)


def test_rotations_preserve_norm():
    rng = np.random.default_rng(0)
    makers = (rx, ry, rz)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        state = random_state(rng, n)
        gate = makers[rng.integers(3)](int(rng.integers(n)), rng.uniform(-10, 10))
        out = apply_gate(state, gate)
        assert abs(out.norm() - 1.0) < 1e-13


def test_cnot_preserves_norm_and_is_involution():
    rng = np.random.default_rng(1)
    for _ in range(50):
        n = int(rng.integers(2, 5))
        c, t = rng.choice(n, size=2, replace=False)
        state = random_state(rng, n)
        once = apply_gate(state, cnot(int(c), int(t)))
        twice = apply_gate(once, cnot(int(c), int(t)))
        assert abs(once.norm() - 1.0) < 1e-13
        assert np.allclose(twice.amplitudes, state.amplitudes, atol=1e-14)


def test_rotation_matrices_have_4pi_period():
    for kind in ("rx", "ry", "rz"):
        for phi in (-2.0, 0.3, 5.0):
            a = _rotation_matrix(kind, phi)
            b = _rotation_matrix(kind, phi + 4.0 * np.pi)
            assert np.max(np.abs(a - b)) < 1e-12


def test_rotation_matrices_at_2pi_flip_sign():
    # half-angle convention: a 2*pi rotation is -identity, not identity
    for kind in ("rx", "ry", "rz"):
        m = _rotation_matrix(kind, 2.0 * np.pi)
        assert np.max(np.abs(m + np.eye(2))) < 1e-12


def test_rx_ry_rz_on_zero_state():
    phi = 0.8
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    zero = init_zero(1)
    out = apply_gate(zero, rx(0, phi))
    assert np.allclose(out.amplitudes, [c, -1j * s], atol=1e-15)
    out = apply_gate(zero, ry(0, phi))
    assert np.allclose(out.amplitudes, [c, s], atol=1e-15)
    out = apply_gate(zero, rz(0, phi))
    # pure phase on a basis state: probabilities unchanged
    assert np.allclose(out.amplitudes, [c - 1j * s, 0.0], atol=1e-15)
    assert np.allclose(out.probabilities(), zero.probabilities(), atol=1e-15)


def test_cnot_truth_table_qubit0_msb():
    # basis index = b0 b1 with qubit 0 the most significant bit
    for control, target, perm in (
        ((0, 1), None, [0, 1, 3, 2]),  # flips b1 when b0 = 1
        ((1, 0), None, [0, 3, 2, 1]),  # flips b0 when b1 = 1
    ):
        gate = cnot(*control)
        for src, dst in enumerate(perm):
            amps = np.zeros(4, dtype=complex)
            amps[src] = 1.0
            out = apply_gate(StateVector(2, amps), gate)
            expected = np.zeros(4, dtype=complex)
            expected[dst] = 1.0
            assert np.array_equal(out.amplitudes, expected), (control, src)


def test_cnot_nonadjacent_qubits():
    # |100> -> |101> for cnot(0, 2) on three qubits
    amps = np.zeros(8, dtype=complex)
    amps[0b100] = 1.0
    out = apply_gate(StateVector(3, amps), cnot(0, 2))
    assert out.amplitudes[0b101] == 1.0


def test_apply_gate_is_pure():
    state = init_zero(2)
    before = state.amplitudes.copy()
    apply_gate(state, ry(0, 1.0))
    apply_gate(state, cnot(0, 1))
    assert np.array_equal(state.amplitudes, before)


def test_expectation_z_eigenvalues():
    z0 = Observable.from_terms([(1.0, (0,))])
    assert expectation(init_zero(1), z0) == 1.0
    flipped = apply_gate(init_zero(1), rx(0, np.pi))
    assert abs(expectation(flipped, z0) + 1.0) < 1e-15


def test_expectation_linear_in_coefficients():
    rng = np.random.default_rng(2)
    state = random_state(rng, 3)
    za = Observable.from_terms([(1.0, (0,)), (0.5, (1, 2))])
    zb = Observable.from_terms([(0.25, (2,)), (1.0, ())])
    for a, b in ((2.0, -1.0), (0.3, 0.7)):
        combo = Observable.from_terms(
            [(a * c, qs) for c, qs in za.terms] + [(b * c, qs) for c, qs in zb.terms]
        )
        lhs = expectation(state, combo)
        rhs = a * expectation(state, za) + b * expectation(state, zb)
        assert abs(lhs - rhs) < 1e-12


def test_mean_z_observable_bounded():
    for n in (1, 2, 4):
        obs = Observable.mean_z(n)
        diag = obs.diagonal(n)
        assert diag.shape == (1 << n,)
        assert obs.norm(n) <= 1.0 + 1e-15
        assert diag[0] == 1.0  # all-zeros bitstring
        assert diag[-1] == -1.0  # all-ones bitstring


def test_observable_identity_term_and_support_check():
    ident = Observable.from_terms([(2.5, ())])
    assert np.array_equal(ident.diagonal(2), np.full(4, 2.5))
    with pytest.raises(ValueError):
        Observable.from_terms([(1.0, (3,))]).diagonal(2)


def test_apply_circuit_composes_left_to_right():
    gates = [ry(0, 0.4), ry(0, 0.6)]
    combined = apply_circuit(init_zero(1), gates)
    single = apply_gate(init_zero(1), ry(0, 1.0))
    assert np.allclose(combined.amplitudes, single.amplitudes, atol=1e-15)


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("rx", (0, 1), 0.5)
    with pytest.raises(ValueError):
        Gate("ry", (0,), None)
    with pytest.raises(ValueError):
        Gate("cnot", (1, 1))
    with pytest.raises(ValueError):
        Gate("cnot", (0, 1), 0.5)
    with pytest.raises(ValueError):
        Gate("hadamard", (0,), None)
    with pytest.raises(ValueError):
        apply_gate(init_zero(1), ry(1, 0.5))


def test_state_validation():
    with pytest.raises(ValueError):
        init_zero(0)
    with pytest.raises(ValueError):
        init_zero(13)
    with pytest.raises(ValueError):
        StateVector(2, np.zeros(3, dtype=complex))
