"""Single-qubit noise channels in Kraus form."""

from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence

import numpy as np

from ..errors import InvalidGateError, InvalidProbabilityError
from .gates import IDENTITY, PAULI_X, PAULI_Y, PAULI_Z, conjugate_density
from .state import DensityMatrix

Kraus = List[np.ndarray]


class NoiseKind(str, Enum):
    DEPOLARIZING = "depolarizing"
    AMPLITUDE_DAMPING = "amplitude_damping"


def _check_probability(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise InvalidProbabilityError(f"{name} must be in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class NoiseChannel:
    """A channel acting on one qubit.

    ``probability`` is the depolarizing probability p or the damping
    probability gamma, depending on ``kind``.
    """

    kind: NoiseKind
    probability: float
    target: int

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        object.__setattr__(self, "probability", _check_probability(self.probability, "probability"))


def kraus_depolarizing(p: float) -> Kraus:
    """Kraus operators of (1-p) rho + p I/2 on one qubit."""
    p = _check_probability(p, "p")
    return [
        np.sqrt(1.0 - 3.0 * p / 4.0) * IDENTITY,
        np.sqrt(p / 4.0) * PAULI_X,
        np.sqrt(p / 4.0) * PAULI_Y,
        np.sqrt(p / 4.0) * PAULI_Z,
    ]


def kraus_amplitude_damping(gamma: float) -> Kraus:
    """E0 = [[1, 0], [0, sqrt(1-gamma)]], E1 = [[0, sqrt(gamma)], [0, 0]]."""
    g = _check_probability(gamma, "gamma")
    return [
        np.array([[1, 0], [0, np.sqrt(1.0 - g)]], dtype=np.complex128),
        np.array([[0, np.sqrt(g)], [0, 0]], dtype=np.complex128),
    ]


def kraus_operators(channel: NoiseChannel) -> Kraus:
    if channel.kind is NoiseKind.DEPOLARIZING:
        return kraus_depolarizing(channel.probability)
    return kraus_amplitude_damping(channel.probability)


def apply_kraus(rho: DensityMatrix, operators: Sequence[np.ndarray], target: int) -> DensityMatrix:
    """Sum_k E_k rho E_k^dagger with every E_k acting on ``target``."""
    if not 0 <= target < rho.num_qubits:
        raise InvalidGateError(
            f"Noise target {target} outside {rho.num_qubits}-qubit register"
        )
    out = np.zeros_like(rho.entries)
    for op in operators:
        out += conjugate_density(rho.entries, rho.num_qubits, op, target)
    return DensityMatrix(rho.num_qubits, out)


def apply_channel(rho: DensityMatrix, channel: NoiseChannel) -> DensityMatrix:
    return apply_kraus(rho, kraus_operators(channel), channel.target)


def apply_depolarizing(rho: DensityMatrix, p: float, target: int) -> DensityMatrix:
    """Replace the target qubit's reduced state by I/2 with probability p.

    Raises:
        InvalidProbabilityError: If p is outside [0, 1]
    """
    return apply_kraus(rho, kraus_depolarizing(p), target)


def apply_amplitude_damping(rho: DensityMatrix, gamma: float, target: int) -> DensityMatrix:
    """Relax the target qubit towards |0> with probability gamma.

    Raises:
        InvalidProbabilityError: If gamma is outside [0, 1]
    """
    return apply_kraus(rho, kraus_amplitude_damping(gamma), target)
