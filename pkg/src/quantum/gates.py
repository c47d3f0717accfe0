"""Gate definitions and their action on states and density matrices."""

from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Iterable, List, Optional

import numpy as np

from ..errors import InvalidGateError
from .state import DensityMatrix, QuantumState

MAX_DENSE_QUBITS = 12


class GateKind(str, Enum):
    """Supported gate kinds."""

    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    CNOT = "CNOT"
    H = "H"
    X = "X"

    @property
    def is_rotation(self) -> bool:
        return self in (GateKind.RX, GateKind.RY, GateKind.RZ)


IDENTITY = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
PROJECTOR_0 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
PROJECTOR_1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)


@dataclass(frozen=True)
class Gate:
    """One gate application: kind, target, rotation angle or CNOT control."""

    kind: GateKind
    target: int
    angle: Optional[float] = None
    control: Optional[int] = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.target < 0:
            raise InvalidGateError(f"Negative target qubit {self.target}")
        if kind.is_rotation and self.angle is None:
            raise InvalidGateError(f"{kind.value} requires an angle")
        if not kind.is_rotation and self.angle is not None:
            raise InvalidGateError(f"{kind.value} does not take an angle")
        if kind is GateKind.CNOT:
            if self.control is None:
                raise InvalidGateError("CNOT requires a control qubit")
            if self.control < 0 or self.control == self.target:
                raise InvalidGateError(
                    f"Invalid CNOT control {self.control} for target {self.target}"
                )
        elif self.control is not None:
            raise InvalidGateError(f"{kind.value} does not take a control qubit")

    @classmethod
    def rotation(cls, kind: GateKind, target: int, angle: float) -> "Gate":
        return cls(GateKind(kind), target, angle=float(angle))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CNOT, target, control=control)

    @property
    def qubits(self) -> List[int]:
        return [self.target] if self.control is None else [self.control, self.target]

    def check(self, num_qubits: int) -> None:
        """Raise if the gate does not fit a register of ``num_qubits``."""
        for qubit in self.qubits:
            if qubit >= num_qubits:
                raise InvalidGateError(
                    f"{self.kind.value} on qubit {qubit} exceeds {num_qubits}-qubit register"
                )

    def inverse(self) -> "Gate":
        if self.kind.is_rotation:
            return Gate(self.kind, self.target, angle=-self.angle)
        return self


def rotation_matrix(kind: GateKind, angle: float) -> np.ndarray:
    """R(angle) = exp(-i angle P / 2) for P in {X, Y, Z}."""
    c, s = np.cos(angle / 2.0), np.sin(angle / 2.0)
    if kind is GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if kind is GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    if kind is GateKind.RZ:
        return np.array([[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=np.complex128)
    raise InvalidGateError(f"{kind} is not a rotation")


def gate_matrix(gate: Gate) -> np.ndarray:
    """Dense matrix of a gate on its own qubits.

    Single-qubit gates give a 2x2 matrix. CNOT gives a 4x4 matrix on the
    (control, target) pair with the control as the least significant bit.
    """
    if gate.kind.is_rotation:
        return rotation_matrix(gate.kind, gate.angle)
    if gate.kind is GateKind.H:
        return HADAMARD
    if gate.kind is GateKind.X:
        return PAULI_X
    return np.array(
        [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=np.complex128
    )


def _apply_axis(tensor: np.ndarray, matrix: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(matrix, tensor, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def apply_matrix(amplitudes: np.ndarray, num_qubits: int, matrix: np.ndarray, target: int) -> np.ndarray:
    """Apply a 2x2 matrix to one qubit of a raw amplitude vector."""
    tensor = amplitudes.reshape([2] * num_qubits)
    return _apply_axis(tensor, matrix, num_qubits - 1 - target).reshape(-1)


def left_multiply_density(entries: np.ndarray, num_qubits: int, matrix: np.ndarray, target: int) -> np.ndarray:
    """M rho for a 2x2 matrix M acting on ``target``."""
    tensor = entries.reshape([2] * (2 * num_qubits))
    tensor = _apply_axis(tensor, matrix, num_qubits - 1 - target)
    dim = 2**num_qubits
    return tensor.reshape(dim, dim)


def conjugate_density(entries: np.ndarray, num_qubits: int, matrix: np.ndarray, target: int) -> np.ndarray:
    """M rho M^dagger for a 2x2 matrix M acting on ``target``."""
    tensor = entries.reshape([2] * (2 * num_qubits))
    tensor = _apply_axis(tensor, matrix, num_qubits - 1 - target)
    tensor = _apply_axis(tensor, matrix.conj(), 2 * num_qubits - 1 - target)
    dim = 2**num_qubits
    return tensor.reshape(dim, dim)


def _cnot_permutation(num_qubits: int, control: int, target: int) -> np.ndarray:
    index = np.arange(2**num_qubits)
    return np.where((index >> control) & 1, index ^ (1 << target), index)


def apply_gate(state: QuantumState, gate: Gate) -> QuantumState:
    """Evolve a pure state by one gate.

    Args:
        state: Input state
        gate: Gate whose qubits fit the state

    Returns:
        New state U|psi>

    Raises:
        InvalidGateError: If a gate index is out of range
    """
    gate.check(state.num_qubits)
    n = state.num_qubits
    if gate.kind is GateKind.CNOT:
        amplitudes = state.amplitudes[_cnot_permutation(n, gate.control, gate.target)]
    else:
        amplitudes = apply_matrix(state.amplitudes, n, gate_matrix(gate), gate.target)
    return QuantumState(n, amplitudes)


def apply_gates(state: QuantumState, gates: Iterable[Gate]) -> QuantumState:
    """Apply gates in order."""
    return reduce(apply_gate, gates, state)


def apply_gate_density(rho: DensityMatrix, gate: Gate) -> DensityMatrix:
    """Evolve a density matrix by one gate: U rho U^dagger."""
    gate.check(rho.num_qubits)
    n = rho.num_qubits
    if gate.kind is GateKind.CNOT:
        perm = _cnot_permutation(n, gate.control, gate.target)
        entries = rho.entries[np.ix_(perm, perm)]
    else:
        entries = conjugate_density(rho.entries, n, gate_matrix(gate), gate.target)
    return DensityMatrix(n, entries)


def embed(matrix: np.ndarray, target: int, num_qubits: int) -> np.ndarray:
    """Full-register matrix of a single-qubit operator (Kronecker embedding)."""
    factors = [matrix if q == target else IDENTITY for q in reversed(range(num_qubits))]
    return reduce(np.kron, factors)


def circuit_unitary(gates: Iterable[Gate], num_qubits: int) -> np.ndarray:
    """Dense unitary of a gate sequence, built from Kronecker products.

    Independent of the tensor-contraction path used by :func:`apply_gate`, so
    the two can be compared.
    """
    if num_qubits > MAX_DENSE_QUBITS:
        raise InvalidGateError(f"Dense unitaries are limited to {MAX_DENSE_QUBITS} qubits")
    unitary = np.eye(2**num_qubits, dtype=np.complex128)
    for gate in gates:
        gate.check(num_qubits)
        if gate.kind is GateKind.CNOT:
            step = embed(PROJECTOR_0, gate.control, num_qubits) + embed(
                PROJECTOR_1, gate.control, num_qubits
            ) @ embed(PAULI_X, gate.target, num_qubits)
        else:
            step = embed(gate_matrix(gate), gate.target, num_qubits)
        unitary = step @ unitary
    return unitary


def ring_entangler(num_qubits: int) -> List[Gate]:
    """CNOT ring: qubit i controls (i + 1) mod n.

    Two qubits get a single CNOT(0 -> 1); one qubit gets nothing.
    """
    if num_qubits < 2:
        return []
    if num_qubits == 2:
        return [Gate.cnot(0, 1)]
    return [Gate.cnot(i, (i + 1) % num_qubits) for i in range(num_qubits)]
