"""Pauli-product observables and their expectation values."""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from ..errors import InvalidObservableError
from .gates import IDENTITY, PAULI_X, PAULI_Y, PAULI_Z, apply_matrix, left_multiply_density
from .state import DensityMatrix, QuantumState

PAULI_MATRICES = {"I": IDENTITY, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


@dataclass(frozen=True)
class Observable:
    """Tensor product of single-qubit Paulis.

    ``paulis[q]`` is the factor on qubit ``q``, so ``"ZI"`` measures Z on
    qubit 0 of a two-qubit register.
    """

    paulis: str

    def __post_init__(self):
        paulis = self.paulis.upper()
        if not paulis or any(p not in PAULI_MATRICES for p in paulis):
            raise InvalidObservableError(f"Invalid Pauli string: {self.paulis!r}")
        object.__setattr__(self, "paulis", paulis)

    @classmethod
    def z(cls, num_qubits: int, qubit: int = 0) -> "Observable":
        """Z on one qubit, identity elsewhere."""
        return cls("".join("Z" if q == qubit else "I" for q in range(num_qubits)))

    @property
    def num_qubits(self) -> int:
        return len(self.paulis)

    def matrix(self) -> np.ndarray:
        """Dense little-endian matrix (qubit 0 is the rightmost Kronecker factor)."""
        return reduce(np.kron, [PAULI_MATRICES[p] for p in reversed(self.paulis)])

    def check(self, num_qubits: int) -> None:
        """Raise InvalidObservableError unless the observable spans ``num_qubits``."""
        if num_qubits != self.num_qubits:
            raise InvalidObservableError(
                f"Observable acts on {self.num_qubits} qubits, state has {num_qubits}"
            )


def expectation(state: QuantumState, obs: Observable) -> float:
    """<psi|O|psi>.

    Raises:
        InvalidObservableError: If qubit counts differ
    """
    obs.check(state.num_qubits)
    applied = state.amplitudes
    for qubit, pauli in enumerate(obs.paulis):
        if pauli != "I":
            applied = apply_matrix(applied, state.num_qubits, PAULI_MATRICES[pauli], qubit)
    return float(np.vdot(state.amplitudes, applied).real)


def expectation_density(rho: DensityMatrix, obs: Observable) -> float:
    """Tr(rho O).

    Raises:
        InvalidObservableError: If qubit counts differ
    """
    obs.check(rho.num_qubits)
    applied = rho.entries
    for qubit, pauli in enumerate(obs.paulis):
        if pauli != "I":
            applied = left_multiply_density(applied, rho.num_qubits, PAULI_MATRICES[pauli], qubit)
    return float(np.trace(applied).real)


def z_expectations(probabilities: np.ndarray, num_qubits: int) -> np.ndarray:
    """Per-qubit <Z_q> from computational-basis probabilities."""
    index = np.arange(2**num_qubits)
    signs = np.stack([1 - 2 * ((index >> q) & 1) for q in range(num_qubits)])
    return signs @ np.asarray(probabilities, dtype=float)
