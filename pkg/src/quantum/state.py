"""Quantum state containers."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import CannotNormalizeError, InvalidInputError

NORM_TOLERANCE = 1e-10
PSD_TOLERANCE = 1e-9


def _frozen(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=np.complex128, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Normalized pure state over ``num_qubits`` qubits."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise InvalidInputError(f"num_qubits must be positive, got {self.num_qubits}")
        amplitudes = _frozen(np.ravel(self.amplitudes))
        if amplitudes.shape[0] != 2**self.num_qubits:
            raise InvalidInputError(
                f"Expected {2**self.num_qubits} amplitudes for {self.num_qubits} qubits, "
                f"got {amplitudes.shape[0]}"
            )
        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidInputError(f"State is not normalized (squared norm {norm:.12g})")
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def zero(cls, num_qubits: int) -> "QuantumState":
        """Ground state |0...0>."""
        return cls.basis(num_qubits, 0)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "QuantumState":
        """Computational basis state with the given little-endian index."""
        if not 0 <= index < 2**num_qubits:
            raise InvalidInputError(f"Basis index {index} out of range for {num_qubits} qubits")
        amplitudes = np.zeros(2**num_qubits, dtype=np.complex128)
        amplitudes[index] = 1.0
        return cls(num_qubits, amplitudes)

    @classmethod
    def from_vector(cls, vector: np.ndarray, num_qubits: Optional[int] = None) -> "QuantumState":
        """Normalize an arbitrary nonzero vector into a state.

        Args:
            vector: Amplitudes, length 2**num_qubits
            num_qubits: Defaults to log2 of the vector length

        Returns:
            Normalized state

        Raises:
            CannotNormalizeError: If the vector has zero norm
        """
        vector = np.asarray(vector, dtype=np.complex128).ravel()
        norm = np.linalg.norm(vector)
        if norm == 0.0:
            raise CannotNormalizeError("Cannot normalize an all-zero vector")
        if num_qubits is None:
            num_qubits = max(1, int(np.log2(vector.shape[0])))
        return cls(num_qubits, vector / norm)

    @property
    def dimension(self) -> int:
        return 2**self.num_qubits

    def probabilities(self) -> np.ndarray:
        """Born-rule outcome probabilities over the computational basis."""
        return np.abs(self.amplitudes) ** 2

    def allclose(self, other: "QuantumState", atol: float = 1e-10) -> bool:
        """Amplitude-wise comparison (global phase matters)."""
        return self.num_qubits == other.num_qubits and np.allclose(
            self.amplitudes, other.amplitudes, atol=atol
        )


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Mixed state: Hermitian, unit-trace matrix of dimension 2**num_qubits."""

    num_qubits: int
    entries: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise InvalidInputError(f"num_qubits must be positive, got {self.num_qubits}")
        entries = _frozen(self.entries)
        dim = 2**self.num_qubits
        if entries.shape != (dim, dim):
            raise InvalidInputError(f"Expected a {dim}x{dim} matrix, got shape {entries.shape}")
        if not np.allclose(entries, entries.conj().T, atol=NORM_TOLERANCE, rtol=0.0):
            raise InvalidInputError("Density matrix is not Hermitian")
        trace = complex(np.trace(entries))
        if abs(trace - 1.0) > NORM_TOLERANCE:
            raise InvalidInputError(f"Density matrix trace is {trace.real:.12g}, expected 1")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "DensityMatrix":
        dim = 2**num_qubits
        return cls(num_qubits, np.eye(dim, dtype=np.complex128) / dim)

    @property
    def dimension(self) -> int:
        return 2**self.num_qubits

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def probabilities(self) -> np.ndarray:
        """Diagonal of the matrix, clipped at zero."""
        return np.clip(np.real(np.diag(self.entries)), 0.0, None)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def is_positive_semidefinite(self, tol: float = PSD_TOLERANCE) -> bool:
        """Check all eigenvalues are at least ``-tol``."""
        return bool(self.eigenvalues().min() >= -tol)

    def allclose(self, other: "DensityMatrix", atol: float = 1e-10) -> bool:
        return self.num_qubits == other.num_qubits and np.allclose(
            self.entries, other.entries, atol=atol
        )


def state_to_density(state: QuantumState) -> DensityMatrix:
    """Outer product |psi><psi|."""
    return DensityMatrix(state.num_qubits, np.outer(state.amplitudes, state.amplitudes.conj()))


def sample_counts(state: QuantumState, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Measure the state ``shots`` times in the computational basis.

    Args:
        state: State to measure
        shots: Number of repetitions, positive
        rng: Random generator

    Returns:
        Integer counts per basis index (length 2**num_qubits)
    """
    if shots < 1:
        raise InvalidInputError(f"shots must be positive, got {shots}")
    probs = state.probabilities()
    return rng.multinomial(shots, probs / probs.sum())
