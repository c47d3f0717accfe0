"""Layered rotation ansatz U(theta)."""

from typing import List, Literal

import numpy as np
from pydantic import Field

from ..config.models import SpecModel
from ..quantum.gates import Gate, GateKind, ring_entangler

RotationName = Literal["RX", "RY", "RZ"]


class AnsatzSpec(SpecModel):
    """Trainable circuit shape.

    Each layer applies ``rotation_pattern`` to every qubit (one parameter per
    rotation), then the CNOT ring when ``entangler`` is on. Parameters are
    ordered layer-major, then by qubit, then by position in the pattern.
    """

    num_qubits: int = Field(..., ge=1, le=12, description="Register size")
    layers: int = Field(default=1, ge=0, description="Number of rotation(+entangler) layers")
    rotation_pattern: List[RotationName] = Field(
        default_factory=lambda: ["RY", "RZ"], min_length=1, description="Rotations per qubit per layer"
    )
    entangler: bool = Field(default=True, description="CNOT ring after each layer")

    @property
    def rotations_per_layer(self) -> int:
        return self.num_qubits * len(self.rotation_pattern)

    @property
    def parameter_count(self) -> int:
        return self.layers * self.rotations_per_layer


def layer_gates(spec: AnsatzSpec, layer_parameters: np.ndarray) -> List[Gate]:
    """Gates of one ansatz layer for the given slice of parameters."""
    gates = []
    index = 0
    for qubit in range(spec.num_qubits):
        for rotation in spec.rotation_pattern:
            gates.append(Gate.rotation(GateKind(rotation), qubit, layer_parameters[index]))
            index += 1
    if spec.entangler:
        gates.extend(ring_entangler(spec.num_qubits))
    return gates


def split_layers(spec: AnsatzSpec, circuit_parameters: np.ndarray) -> List[np.ndarray]:
    """Cut the circuit parameter vector into per-layer slices."""
    width = spec.rotations_per_layer
    return [circuit_parameters[k * width : (k + 1) * width] for k in range(spec.layers)]
