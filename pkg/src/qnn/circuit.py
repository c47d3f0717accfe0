"""QNN configuration, forward pass and parameter-shift gradients."""

from typing import List, Literal, Optional, Sequence, Union

import numpy as np
from pydantic import Field, model_validator

from ..config.models import SpecModel
from ..encoding.feature_map import FeatureMapSpec, as_feature_vector, feature_map_state
from ..errors import InvalidInputError, InvalidParametersError, InvalidSpecError
from ..quantum.gates import apply_gate_density, apply_gates
from ..quantum.noise import NoiseChannel, NoiseKind, apply_channel
from ..quantum.observables import Observable, expectation, expectation_density, z_expectations
from ..quantum.state import DensityMatrix, QuantumState, state_to_density
from .ansatz import AnsatzSpec, layer_gates, split_layers

SHIFT = np.pi / 2

OptimizerName = Literal["adam", "gd", "rmsprop", "simplex"]


class HeadConfig(SpecModel):
    """Classical dense head on the per-qubit <Z_i> vector."""

    hidden_units: int = Field(..., ge=1, description="Width of the single hidden layer")
    activation: Literal["relu"] = Field(default="relu", description="Hidden activation")


class NoiseChannelConfig(SpecModel):
    """A channel applied after every ansatz layer on each target qubit."""

    kind: NoiseKind = Field(..., description="depolarizing or amplitude_damping")
    probability: float = Field(..., ge=0.0, le=1.0, description="p for depolarizing, gamma for damping")
    targets: Optional[List[int]] = Field(default=None, description="Qubits; None means every qubit")

    def expand(self, num_qubits: int) -> List[NoiseChannel]:
        targets = range(num_qubits) if self.targets is None else self.targets
        return [NoiseChannel(self.kind, self.probability, q) for q in targets]


class QnnConfig(SpecModel):
    """Everything needed to build, run and train a QNN."""

    ansatz: AnsatzSpec
    encoding: FeatureMapSpec
    observable: Optional[str] = Field(default=None, description="Pauli string; default Z on qubit 0")
    optimizer: OptimizerName = Field(default="adam", description="Parameter update rule")
    learning_rate: float = Field(default=0.01, gt=0, description="Step size (initial edge for simplex)")
    epochs: int = Field(default=50, ge=1, description="Full-batch epochs")
    init: Literal["xavier", "uniform_small"] = Field(default="xavier", description="Initializer")
    noise: List[NoiseChannelConfig] = Field(default_factory=list, description="Noise channels")
    classical_head: Optional[HeadConfig] = Field(default=None, description="Optional dense head")
    initial_parameters: Optional[List[float]] = Field(default=None, description="Start point override")
    seed: int = Field(default=0, ge=0, description="Initialization seed")

    @model_validator(mode="after")
    def check_consistency(self) -> "QnnConfig":
        n = self.ansatz.num_qubits
        if self.encoding.num_qubits != n:
            raise InvalidSpecError(
                f"encoding uses {self.encoding.num_qubits} qubits but the ansatz has {n}"
            )
        if self.observable is not None:
            if len(Observable(self.observable).paulis) != n:
                raise InvalidSpecError(f"observable {self.observable!r} does not act on {n} qubits")
        for channel in self.noise:
            if channel.targets is not None and any(not 0 <= q < n for q in channel.targets):
                raise InvalidSpecError(f"noise targets {channel.targets} outside {n}-qubit register")
        if self.initial_parameters is not None and len(self.initial_parameters) != parameter_count(self):
            raise InvalidSpecError(
                f"initial_parameters has {len(self.initial_parameters)} values, "
                f"model needs {parameter_count(self)}"
            )
        return self

    @property
    def measured(self) -> Observable:
        if self.observable is None:
            return Observable.z(self.ansatz.num_qubits)
        return Observable(self.observable)

    @property
    def channels(self) -> List[NoiseChannel]:
        return [c for config in self.noise for c in config.expand(self.ansatz.num_qubits)]


def head_parameter_count(config: QnnConfig) -> int:
    """W1 (h x n), b1 (h), w2 (h), b2 (1)."""
    if config.classical_head is None:
        return 0
    h, n = config.classical_head.hidden_units, config.ansatz.num_qubits
    return h * n + 2 * h + 1


def parameter_count(config: QnnConfig) -> int:
    return config.ansatz.parameter_count + head_parameter_count(config)


def check_parameters(params: Sequence[float], config: QnnConfig) -> np.ndarray:
    """Raise InvalidParametersError unless ``params`` has the model's length."""
    params = np.asarray(params, dtype=float)
    expected = parameter_count(config)
    if params.ndim != 1 or len(params) != expected:
        raise InvalidParametersError(f"Expected {expected} parameters, got shape {params.shape}")
    return params


def unpack_head(params: np.ndarray, config: QnnConfig):
    """Split the head slice into (W1, b1, w2, b2)."""
    h, n = config.classical_head.hidden_units, config.ansatz.num_qubits
    head = params[config.ansatz.parameter_count :]
    w1 = head[: h * n].reshape(h, n)
    b1 = head[h * n : h * n + h]
    w2 = head[h * n + h : h * n + 2 * h]
    return w1, b1, w2, float(head[-1])


def final_state(
    x: Sequence[float], circuit_params: np.ndarray, config: QnnConfig
) -> Union[QuantumState, DensityMatrix]:
    """Encode ``x`` and run every ansatz layer, with noise after each layer.

    Returns a pure state without noise and a density matrix with noise.
    """
    state = feature_map_state(x, config.encoding)
    channels = config.channels
    if not channels:
        for layer in split_layers(config.ansatz, circuit_params):
            state = apply_gates(state, layer_gates(config.ansatz, layer))
        return state
    rho = state_to_density(state)
    for layer in split_layers(config.ansatz, circuit_params):
        for gate in layer_gates(config.ansatz, layer):
            rho = apply_gate_density(rho, gate)
        for channel in channels:
            rho = apply_channel(rho, channel)
    return rho


def measure(state: Union[QuantumState, DensityMatrix], obs: Observable) -> float:
    if isinstance(state, DensityMatrix):
        return expectation_density(state, obs)
    return expectation(state, obs)


def circuit_readout(x: Sequence[float], circuit_params: np.ndarray, config: QnnConfig) -> np.ndarray:
    """What the circuit hands on: [<O>] without a head, the <Z_i> vector with one."""
    state = final_state(x, circuit_params, config)
    if config.classical_head is None:
        return np.array([measure(state, config.measured)])
    return z_expectations(state.probabilities(), config.ansatz.num_qubits)


def sigmoid(value: float) -> float:
    return float(1.0 / (1.0 + np.exp(-value)))


def head_forward(z: np.ndarray, params: np.ndarray, config: QnnConfig) -> float:
    """Dense(ReLU) -> dense -> sigmoid."""
    w1, b1, w2, b2 = unpack_head(params, config)
    hidden = np.maximum(w1 @ z + b1, 0.0)
    return sigmoid(float(w2 @ hidden + b2))


def output_map(readout: np.ndarray, params: np.ndarray, config: QnnConfig) -> float:
    """Map the circuit readout to [0, 1]: affine without a head, logistic with one."""
    if config.classical_head is None:
        return float((readout[0] + 1.0) / 2.0)
    return head_forward(readout, params, config)


def raw_expectation(x: Sequence[float], params: Sequence[float], config: QnnConfig) -> float:
    """<O> of the configured observable, before any output map."""
    params = check_parameters(params, config)
    circuit_params = params[: config.ansatz.parameter_count]
    return measure(final_state(x, circuit_params, config), config.measured)


def qnn_forward(x: Sequence[float], params: Sequence[float], config: QnnConfig) -> float:
    """Model output in [0, 1].

    Raises:
        InvalidParametersError: If ``params`` has the wrong length
    """
    params = check_parameters(params, config)
    circuit_params = params[: config.ansatz.parameter_count]
    return output_map(circuit_readout(x, circuit_params, config), params, config)


def _shifted_readouts(x: np.ndarray, circuit_params: np.ndarray, config: QnnConfig, index: int) -> np.ndarray:
    plus, minus = circuit_params.copy(), circuit_params.copy()
    plus[index] += SHIFT
    minus[index] -= SHIFT
    return (circuit_readout(x, plus, config) - circuit_readout(x, minus, config)) / 2.0


def parameter_shift_gradient(
    x: Sequence[float], params: Sequence[float], config: QnnConfig, index: int
) -> float:
    """d<O>/d theta_index by the +-pi/2 shift rule.

    Raises:
        InvalidInputError: If ``index`` is not a circuit parameter
    """
    params = check_parameters(params, config)
    if not 0 <= index < config.ansatz.parameter_count:
        raise InvalidInputError(
            f"Parameter index {index} is not one of the {config.ansatz.parameter_count} circuit parameters"
        )
    x = as_feature_vector(x)
    circuit_params = params[: config.ansatz.parameter_count].copy()
    plus, minus = circuit_params.copy(), circuit_params.copy()
    plus[index] += SHIFT
    minus[index] -= SHIFT
    obs = config.measured
    e_plus = measure(final_state(x, plus, config), obs)
    e_minus = measure(final_state(x, minus, config), obs)
    return (e_plus - e_minus) / 2.0


def readout_jacobian(x: Sequence[float], params: Sequence[float], config: QnnConfig) -> np.ndarray:
    """Shift-rule Jacobian of :func:`circuit_readout`, shape (circuit params, readout size)."""
    params = check_parameters(params, config)
    x = as_feature_vector(x)
    circuit_params = params[: config.ansatz.parameter_count]
    rows = [_shifted_readouts(x, circuit_params, config, k) for k in range(config.ansatz.parameter_count)]
    width = 1 if config.classical_head is None else config.ansatz.num_qubits
    return np.array(rows).reshape(len(rows), width)
