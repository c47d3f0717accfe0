"""Angle and amplitude encodings and the feature-map circuit built on them."""

import math
from typing import List, Literal, Optional, Sequence

import numpy as np
from pydantic import Field

from ..config.models import SpecModel
from ..errors import CannotNormalizeError, InvalidInputError, InvalidSpecError
from ..quantum.gates import Gate, GateKind, apply_gate, apply_gates, ring_entangler
from ..quantum.state import QuantumState


def as_feature_vector(values: Sequence[float]) -> np.ndarray:
    """Validate and convert features to a 1-D float array.

    Raises:
        InvalidInputError: If empty, not one-dimensional, or not finite
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise InvalidInputError(f"Feature vector must be a nonempty 1-D sequence, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("Feature vector contains NaN or infinite values")
    return x


def amplitude_qubits(length: int) -> int:
    """Smallest register whose dimension holds ``length`` amplitudes."""
    return max(1, math.ceil(math.log2(length)))


class FeatureMapSpec(SpecModel):
    """How a feature vector is turned into a state."""

    scheme: Literal["angle", "amplitude"] = Field(default="angle", description="Encoding scheme")
    num_qubits: int = Field(..., ge=1, description="Register size")
    entangling: bool = Field(default=False, description="Apply a CNOT ring after each encoding layer")
    repetitions: int = Field(default=1, ge=1, description="Number of encode(+entangle) layers")

    @classmethod
    def for_features(cls, length: int, scheme: str = "angle", **kwargs) -> "FeatureMapSpec":
        """Spec sized for ``length`` features."""
        num_qubits = length if scheme == "angle" else amplitude_qubits(length)
        return cls.parse(scheme=scheme, num_qubits=num_qubits, **kwargs)

    def check(self, length: int) -> None:
        """Raise InvalidSpecError if features of ``length`` do not fit."""
        if self.scheme == "angle" and length != self.num_qubits:
            raise InvalidSpecError(
                f"Angle encoding needs one qubit per feature: {length} features, "
                f"{self.num_qubits} qubits"
            )
        if self.scheme == "amplitude" and 2**self.num_qubits < length:
            raise InvalidSpecError(
                f"Amplitude encoding of {length} features needs at least "
                f"{amplitude_qubits(length)} qubits, spec has {self.num_qubits}"
            )


def encode_angle(x: Sequence[float]) -> QuantumState:
    """Tensor product of cos(x_i)|0> + sin(x_i)|1>, one qubit per feature."""
    x = as_feature_vector(x)
    amplitudes = np.ones(1)
    for value in x:
        # qubit i is bit i, so later features become more significant factors
        amplitudes = np.kron(np.array([np.cos(value), np.sin(value)]), amplitudes)
    return QuantumState(len(x), amplitudes)


def _padded_unit_vector(x: np.ndarray, num_qubits: int) -> np.ndarray:
    norm = np.linalg.norm(x)
    if norm == 0.0:
        raise CannotNormalizeError("Cannot amplitude-encode an all-zero feature vector")
    padded = np.zeros(2**num_qubits)
    padded[: len(x)] = x / norm
    return padded


def encode_amplitude(x: Sequence[float], num_qubits: Optional[int] = None) -> QuantumState:
    """Zero-pad ``x`` to a power of two and normalize it into amplitudes.

    Raises:
        CannotNormalizeError: If every feature is zero
    """
    x = as_feature_vector(x)
    if num_qubits is None:
        num_qubits = amplitude_qubits(len(x))
    elif 2**num_qubits < len(x):
        raise InvalidInputError(f"{len(x)} features do not fit in {num_qubits} qubits")
    return QuantumState(num_qubits, _padded_unit_vector(x, num_qubits))


class FeatureMapCircuit:
    """Feature map of one vector as a reversible circuit.

    The angle layer is RY(2 x_i) on qubit i. The amplitude layer is the real
    Householder reflection taking |0> to the normalized features; it is its
    own inverse, so both schemes support re-encoding and inversion.
    """

    def __init__(self, x: Sequence[float], spec: FeatureMapSpec):
        self.x = as_feature_vector(x)
        spec.check(len(self.x))
        self.spec = spec
        self._entangler: List[Gate] = ring_entangler(spec.num_qubits) if spec.entangling else []
        if spec.scheme == "amplitude":
            target = _padded_unit_vector(self.x, spec.num_qubits)
            self._reflector = np.zeros_like(target)
            self._reflector[0] = 1.0
            self._reflector -= target

    def _encode_layer(self, state: QuantumState, inverse: bool = False) -> QuantumState:
        if self.spec.scheme == "angle":
            sign = -2.0 if inverse else 2.0
            gates = [Gate.rotation(GateKind.RY, q, sign * v) for q, v in enumerate(self.x)]
            return apply_gates(state, gates)
        v = self._reflector
        vv = float(v @ v)
        if vv == 0.0:
            return state
        amplitudes = state.amplitudes - (2.0 * (v @ state.amplitudes) / vv) * v
        return QuantumState(state.num_qubits, amplitudes)

    def _initial_layer(self) -> QuantumState:
        if self.spec.scheme == "angle":
            return encode_angle(self.x)
        return encode_amplitude(self.x, self.spec.num_qubits)

    def apply(self, state: QuantumState) -> QuantumState:
        """Apply every (encode, entangle) repetition to ``state``."""
        for _ in range(self.spec.repetitions):
            state = self._encode_layer(state)
            state = apply_gates(state, self._entangler)
        return state

    def apply_inverse(self, state: QuantumState) -> QuantumState:
        """Undo :meth:`apply`."""
        for _ in range(self.spec.repetitions):
            for gate in reversed(self._entangler):
                state = apply_gate(state, gate)
            state = self._encode_layer(state, inverse=True)
        return state

    def prepare(self) -> QuantumState:
        """The feature-map state, built from |0...0>.

        The first encoding layer is written directly from the encoder so a
        single product-state layer equals the encoder output exactly.
        """
        state = self._initial_layer()
        state = apply_gates(state, self._entangler)
        for _ in range(self.spec.repetitions - 1):
            state = self._encode_layer(state)
            state = apply_gates(state, self._entangler)
        return state


def feature_map_state(x: Sequence[float], spec: FeatureMapSpec) -> QuantumState:
    """Encode ``x`` under ``spec``.

    Raises:
        InvalidSpecError: If the spec does not fit the feature length
    """
    return FeatureMapCircuit(x, spec).prepare()
