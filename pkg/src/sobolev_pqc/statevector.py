"""Dense statevector simulation of few-qubit circuits with Pauli-Z observables.

Basis convention: qubit 0 is the most significant bit, so basis index
``i`` encodes the bitstring ``b_0 b_1 ... b_{n-1}`` with
``i = sum(b_q << (n - 1 - q))``.  After ``amplitudes.reshape([2] * n)``,
axis ``q`` is qubit ``q``.

Everything here is pure: gate application returns a new state.  Global
phase is unconstrained; only moduli and expectation values are meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 12

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class Gate:
    """A single circuit element: RX/RY rotation or a CNOT.

    RX(phi) = exp(-i phi X / 2), RY(phi) = exp(-i phi Y / 2),
    RZ(phi) = exp(-i phi Z / 2).  CNOT targets are an ordered
    (control, target) pair.
    """

    kind: str  # "rx", "ry", "rz" or "cnot"
    targets: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self) -> None:
        if self.kind in ("rx", "ry", "rz"):
            if len(self.targets) != 1:
                raise ValueError(f"{self.kind} acts on exactly one qubit")
            if self.angle is None:
                raise ValueError(f"{self.kind} requires an angle")
        elif self.kind == "cnot":
            if len(self.targets) != 2 or self.targets[0] == self.targets[1]:
                raise ValueError("cnot needs distinct (control, target) qubits")
            if self.angle is not None:
                raise ValueError("cnot takes no angle")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")


def rx(qubit: int, angle: float) -> Gate:
    return Gate("rx", (qubit,), float(angle))


def ry(qubit: int, angle: float) -> Gate:
    return Gate("ry", (qubit,), float(angle))


def rz(qubit: int, angle: float) -> Gate:
    return Gate("rz", (qubit,), float(angle))


def cnot(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


@dataclass(frozen=True)
class Observable:
    """Real linear combination of Pauli-Z strings, diagonal in the Z basis.

    ``terms`` is a sequence of (coefficient, qubit support) pairs; the
    operator is ``sum_t coef_t * prod_{q in support_t} Z_q``.  An empty
    support is the identity term.
    """

    terms: tuple[tuple[float, tuple[int, ...]], ...]

    @staticmethod
    def from_terms(terms) -> "Observable":
        normalized = tuple(
            (float(c), tuple(sorted(set(int(q) for q in qs)))) for c, qs in terms
        )
        return Observable(normalized)

    @staticmethod
    def mean_z(n_qubits: int) -> "Observable":
        """Average of single-qubit Z terms; spectrum in [-1, 1]."""
        coef = 1.0 / n_qubits
        return Observable.from_terms([(coef, (q,)) for q in range(n_qubits)])

    def max_support(self) -> int:
        return max((max(qs) for _, qs in self.terms if qs), default=-1)

    def diagonal(self, n_qubits: int) -> np.ndarray:
        """Diagonal of the operator over the 2^n computational basis."""
        if self.max_support() >= n_qubits:
            raise ValueError("observable acts on qubits beyond the register")
        dim = 1 << n_qubits
        idx = np.arange(dim)
        diag = np.zeros(dim)
        for coef, qs in self.terms:
            signs = np.ones(dim)
            for q in qs:
                bit = (idx >> (n_qubits - 1 - q)) & 1
                signs *= 1.0 - 2.0 * bit
            diag += coef * signs
        return diag

    def norm(self, n_qubits: int) -> float:
        """Operator norm: max absolute diagonal entry."""
        return float(np.max(np.abs(self.diagonal(n_qubits))))


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}")
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError("amplitude length must be 2^n_qubits")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def init_zero(n_qubits: int) -> StateVector:
    """All-zeros basis state |0...0>."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}")
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def _check_targets(gate: Gate, n_qubits: int) -> None:
    for q in gate.targets:
        if not 0 <= q < n_qubits:
            raise ValueError(f"gate target {q} out of range for {n_qubits} qubits")


def _rotation_matrix(kind: str, angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    if kind == "rx":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == "rz":
        return np.array([[c - 1j * s, 0.0], [0.0, c + 1j * s]], dtype=complex)
    return np.array([[c, -s], [s, c]], dtype=complex)  # ry


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply one gate, returning a fresh state."""
    n = state.n_qubits
    _check_targets(gate, n)
    psi = state.amplitudes.reshape([2] * n)
    if gate.kind == "cnot":
        control, target = gate.targets
        psi = np.moveaxis(psi, (control, target), (-2, -1)).copy()
        psi[..., 1, :] = psi[..., 1, ::-1]
        psi = np.moveaxis(psi, (-2, -1), (control, target))
    else:
        mat = _rotation_matrix(gate.kind, gate.angle)
        (q,) = gate.targets
        psi = np.moveaxis(np.tensordot(mat, psi, axes=([1], [q])), 0, q)
    return StateVector(n, np.ascontiguousarray(psi.reshape(-1)))


def apply_circuit(state: StateVector, gates) -> StateVector:
    for gate in gates:
        state = apply_gate(state, gate)
    return state


def expectation(state: StateVector, obs: Observable) -> float:
    """<state| obs |state> for a diagonal Z-string observable."""
    diag = obs.diagonal(state.n_qubits)
    value = float(np.dot(state.probabilities(), diag))
    # diagonal real observable on a normalized state: exactly real
    return value
