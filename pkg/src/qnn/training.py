"""Full-batch QNN training with parameter-shift gradients."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np
import pandas as pd

from ..encoding.feature_map import as_feature_vector
from ..errors import InvalidInputError
from .circuit import (
    QnnConfig,
    check_parameters,
    circuit_readout,
    output_map,
    qnn_forward,
    readout_jacobian,
    unpack_head,
)
from .diagnostics import DeadNeuronVerdict, dead_neuron_check
from .initializers import initial_parameters
from .optimizers import OptimizerState, optimizer_step

logger = logging.getLogger(__name__)

DECISION_THRESHOLD = 0.5
INFO_EVERY = 10

T = TypeVar("T")


@dataclass
class TrainingHistory:
    """Per-epoch loss and accuracy, measured before that epoch's update."""

    loss: List[float] = field(default_factory=list)
    accuracy: List[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.loss)

    def append(self, loss: float, accuracy: float) -> None:
        self.loss.append(loss)
        self.accuracy.append(accuracy)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"epoch": np.arange(1, len(self) + 1), "loss": self.loss, "accuracy": self.accuracy}
        )

    def to_dict(self) -> Dict[str, List[float]]:
        return {"loss": list(self.loss), "accuracy": list(self.accuracy)}


@dataclass
class QnnModel:
    """Trained QNN."""

    config: QnnConfig
    parameters: np.ndarray
    history: TrainingHistory
    diagnostics: Optional[DeadNeuronVerdict] = None

    @property
    def final_loss(self) -> Optional[float]:
        return self.history.loss[-1] if len(self.history) else None


def mse_loss(outputs: Sequence[float], targets: Sequence[float]) -> float:
    """(1/n) sum (f_i - y_i)^2.

    Raises:
        InvalidInputError: If empty or lengths differ
    """
    f = np.asarray(outputs, dtype=float)
    y = np.asarray(targets, dtype=float)
    if f.size == 0:
        raise InvalidInputError("mse_loss needs at least one output")
    if f.shape != y.shape:
        raise InvalidInputError(f"Outputs {f.shape} and targets {y.shape} differ in shape")
    return float(np.mean((f - y) ** 2))


def accuracy_of(outputs: np.ndarray, targets: np.ndarray) -> float:
    predicted = (outputs >= DECISION_THRESHOLD).astype(float)
    return float(np.mean(predicted == targets))


def _map_samples(fn: Callable[[np.ndarray], T], xs: List[np.ndarray], workers: int) -> List[T]:
    """Evaluate ``fn`` on every sample, results in sample order."""
    if workers <= 1 or len(xs) < 2:
        return [fn(x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, xs))


def output_gradient(
    x: np.ndarray, params: np.ndarray, config: QnnConfig
) -> Tuple[float, np.ndarray]:
    """Model output and its gradient with respect to every parameter."""
    circuit_count = config.ansatz.parameter_count
    readout = circuit_readout(x, params[:circuit_count], config)
    output = output_map(readout, params, config)
    jacobian = readout_jacobian(x, params, config)
    if config.classical_head is None:
        return output, 0.5 * jacobian[:, 0]

    w1, b1, w2, _ = unpack_head(params, config)
    pre = w1 @ readout + b1
    hidden = np.maximum(pre, 0.0)
    d_logit = output * (1.0 - output)
    d_pre = d_logit * w2 * (pre > 0.0)
    grad = np.concatenate(
        [
            jacobian @ (w1.T @ d_pre),
            np.outer(d_pre, readout).ravel(),
            d_pre,
            d_logit * hidden,
            [d_logit],
        ]
    )
    return output, grad


def _check_dataset(xs: Sequence[Sequence[float]], targets: Sequence[float]) -> Tuple[List[np.ndarray], np.ndarray]:
    if len(xs) == 0:
        raise InvalidInputError("train_qnn needs a nonempty dataset")
    data = [as_feature_vector(x) for x in xs]
    y = np.asarray(targets, dtype=float)
    if y.shape != (len(data),):
        raise InvalidInputError(f"Expected {len(data)} targets, got shape {y.shape}")
    if not np.all(np.isin(y, (0.0, 1.0))):
        raise InvalidInputError("QNN targets must be 0 or 1")
    return data, y


def train_qnn(
    xs: Sequence[Sequence[float]],
    targets: Sequence[float],
    config: QnnConfig,
    workers: int = 1,
) -> QnnModel:
    """Train a QNN by full-batch descent on the MSE loss.

    Args:
        xs: Feature vectors
        targets: Labels in {0, 1}
        config: Model and optimizer configuration
        workers: Threads used for per-sample evaluation

    Returns:
        Trained model; its history has one entry per epoch

    Raises:
        InvalidInputError: If the dataset is empty or targets are not binary
    """
    data, y = _check_dataset(xs, targets)
    if len(np.unique(y)) < 2:
        logger.warning("Training QNN on a single-class dataset (%d samples)", len(y))

    params = initial_parameters(config)
    state = OptimizerState()
    history = TrainingHistory()

    def batch_outputs(p: np.ndarray) -> np.ndarray:
        return np.array(_map_samples(lambda x: qnn_forward(x, p, config), data, workers))

    def batch_loss(p: np.ndarray) -> float:
        return mse_loss(batch_outputs(p), y)

    for epoch in range(1, config.epochs + 1):
        if config.optimizer == "simplex":
            outputs = batch_outputs(params)
            grads = None
        else:
            evaluated = _map_samples(lambda x: output_gradient(x, params, config), data, workers)
            outputs = np.array([output for output, _ in evaluated])
            residuals = 2.0 * (outputs - y) / len(y)
            grads = np.zeros_like(params)
            for residual, (_, grad) in zip(residuals, evaluated):
                grads += residual * grad

        loss = mse_loss(outputs, y)
        accuracy = accuracy_of(outputs, y)
        history.append(loss, accuracy)
        logger.debug("Epoch %d/%d: loss %.6f accuracy %.4f", epoch, config.epochs, loss, accuracy)
        if epoch % INFO_EVERY == 0:
            logger.info("Epoch %d/%d: loss %.6f accuracy %.4f", epoch, config.epochs, loss, accuracy)

        params, state = optimizer_step(
            params, grads, state, config.optimizer, config.learning_rate, loss_fn=batch_loss
        )

    model = QnnModel(config=config, parameters=params, history=history)
    if len(data) >= 2:
        verdict = dead_neuron_check(batch_outputs(params), history.loss)
        model.diagnostics = verdict
        if verdict.dead:
            logger.warning(
                "Dead neuron: outputs are constant across inputs (variance %.3g)", verdict.output_variance
            )
        elif verdict.plateau:
            logger.warning("Loss plateau over the last %d epochs at %.6f", verdict.window, history.loss[-1])
    return model


def qnn_outputs(model: QnnModel, xs: Sequence[Sequence[float]], workers: int = 1) -> np.ndarray:
    """Model outputs in [0, 1]; an empty input gives an empty output."""
    params = check_parameters(model.parameters, model.config)
    data = [as_feature_vector(x) for x in xs]
    return np.array(_map_samples(lambda x: qnn_forward(x, params, model.config), data, workers), dtype=float)


def predict_qnn(model: QnnModel, xs: Sequence[Sequence[float]], workers: int = 1) -> np.ndarray:
    """Class labels in {0, 1} with output >= 0.5 mapped to 1."""
    return (qnn_outputs(model, xs, workers) >= DECISION_THRESHOLD).astype(int)


def history_to_csv(history: TrainingHistory, path: Union[str, Path]) -> Path:
    """Write epoch, loss, accuracy columns."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    history.to_frame().to_csv(path, index=False)
    return path
