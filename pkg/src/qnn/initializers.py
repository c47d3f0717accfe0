"""Parameter initialization."""

import numpy as np

from ..errors import InvalidInputError
from .circuit import QnnConfig, check_parameters, head_parameter_count

UNIFORM_SMALL_BOUND = 0.1


def xavier_bound(fan_in: int, fan_out: int) -> float:
    """sqrt(6 / (fan_in + fan_out))."""
    if fan_in < 0 or fan_out < 0 or fan_in + fan_out <= 0:
        raise InvalidInputError(f"Xavier needs positive fans, got fan_in={fan_in}, fan_out={fan_out}")
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


def xavier_init(fan_in: int, fan_out: int, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` weights from U(-x, x) with x = sqrt(6 / (fan_in + fan_out)).

    Raises:
        InvalidInputError: If both fans are zero or either is negative
    """
    bound = xavier_bound(fan_in, fan_out)
    return np.random.default_rng(seed).uniform(-bound, bound, size=count)


def uniform_small(count: int, seed: int, bound: float = UNIFORM_SMALL_BOUND) -> np.ndarray:
    """Draw ``count`` weights from U(-bound, bound)."""
    return np.random.default_rng(seed).uniform(-bound, bound, size=count)


def initial_parameters(config: QnnConfig) -> np.ndarray:
    """Starting parameter vector for ``config``.

    Circuit parameters use fan_in = fan_out = num_qubits under Xavier. Head
    weights use the fans of their own dense layer; head biases start at zero.
    An explicit ``initial_parameters`` list wins over both.
    """
    if config.initial_parameters is not None:
        return check_parameters(config.initial_parameters, config).copy()
    circuit_seed, hidden_seed, output_seed = (
        int(s) for s in np.random.SeedSequence(config.seed).generate_state(3)
    )
    n = config.ansatz.num_qubits
    count = config.ansatz.parameter_count

    def draw(fan_in: int, fan_out: int, size: int, seed: int) -> np.ndarray:
        if config.init == "uniform_small":
            return uniform_small(size, seed)
        return xavier_init(fan_in, fan_out, size, seed)

    parts = [draw(n, n, count, circuit_seed)]
    if head_parameter_count(config):
        h = config.classical_head.hidden_units
        parts += [
            draw(n, h, h * n, hidden_seed),
            np.zeros(h),
            draw(h, 1, h, output_seed),
            np.zeros(1),
        ]
    return np.concatenate(parts)
