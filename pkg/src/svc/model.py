"""Training, scoring and persistence of kernel SVM models."""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np
from pydantic import Field

from ..config.models import SpecModel
from ..errors import DegenerateProblemError, InvalidInputError
from ..kernels.kernel import KernelMatrix, as_feature_matrix, cross_gram
from ..kernels.spec import KernelSpec
from .smo import SmoSolver

logger = logging.getLogger(__name__)


class SvmTrainConfig(SpecModel):
    """Soft-margin SVM training parameters."""

    C: float = Field(default=1.0, gt=0, description="Box constraint on the dual coefficients")
    tolerance: float = Field(default=1e-3, gt=0, description="Stop when the KKT violation gap is below this")
    max_passes: int = Field(default=1000, ge=1, description="Iteration cap, in multiples of the sample count")
    seed: int = Field(default=0, ge=0, description="Seed for the fallback random sweep")


@dataclass(frozen=True, eq=False)
class SvmModel:
    """Trained dual SVM.

    Only support vectors (alpha > 0) contribute to the decision function, but
    the full coefficient vector and training set are kept for persistence.
    """

    alphas: np.ndarray
    bias: float
    labels: np.ndarray
    kernel_spec: KernelSpec
    training_points: np.ndarray
    C: float

    @property
    def support_indices(self) -> List[int]:
        return [int(i) for i in np.flatnonzero(self.alphas > 0.0)]

    @property
    def num_features(self) -> int:
        return int(self.training_points.shape[1])

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready document of the model."""
        return {
            "alphas": self.alphas.tolist(),
            "bias": self.bias,
            "support_indices": self.support_indices,
            "labels": [int(v) for v in self.labels],
            "kernel_spec": self.kernel_spec.model_dump(),
            "training_points": self.training_points.tolist(),
            "C": self.C,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SvmModel":
        return cls(
            alphas=np.asarray(data["alphas"], dtype=float),
            bias=float(data["bias"]),
            labels=np.asarray(data["labels"], dtype=float),
            kernel_spec=KernelSpec.parse(data["kernel_spec"]),
            training_points=np.asarray(data["training_points"], dtype=float),
            C=float(data["C"]),
        )

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SvmModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _check_labels(labels: Sequence[float], n: int) -> np.ndarray:
    y = np.asarray(labels, dtype=float)
    if y.ndim != 1 or len(y) != n:
        raise InvalidInputError(f"Expected {n} labels, got {y.shape}")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise InvalidInputError("Labels must be -1 or +1")
    if len(np.unique(y)) < 2:
        raise DegenerateProblemError("SVM training needs both classes; labels are all one class")
    return y


def train_svm(gram: KernelMatrix, labels: Sequence[float], config: SvmTrainConfig) -> SvmModel:
    """Fit the dual coefficients and bias on a precomputed Gram matrix.

    Args:
        gram: n x n Gram matrix; must carry its training points
        labels: n labels in {-1, +1}
        config: Training parameters

    Returns:
        Trained model

    Raises:
        DegenerateProblemError: If only one class is present
        InvalidInputError: On dimension mismatch or missing training points
    """
    y = _check_labels(labels, gram.size)
    if gram.points is None:
        raise InvalidInputError("Gram matrix has no training points attached")
    solver = SmoSolver(gram.entries, y, config.C, config.tolerance, config.seed)
    result = solver.solve(max_iterations=config.max_passes * gram.size)
    model = SvmModel(
        alphas=result.alphas,
        bias=result.bias,
        labels=y,
        kernel_spec=gram.spec,
        training_points=np.array(gram.points),
        C=config.C,
    )
    logger.info(
        "Trained SVM on %d points: %d support vectors, bias %.4g",
        gram.size,
        len(model.support_indices),
        model.bias,
    )
    return model


def decision_values(
    model: SvmModel, xs: Sequence[Sequence[float]], workers: int = 1, seed: int = 0
) -> np.ndarray:
    """f(x) = sum_i a_i y_i K(x_i, x) + b for each x.

    ``seed`` is the root seed for shot-based quantum kernel entries.

    Raises:
        InvalidInputError: If feature lengths differ from the training points
    """
    if len(xs) == 0:
        return np.empty(0)
    data = as_feature_matrix(xs)
    if data.shape[1] != model.num_features:
        raise InvalidInputError(
            f"Model expects {model.num_features} features, got {data.shape[1]}"
        )
    support = model.support_indices
    if not support:
        return np.full(len(data), model.bias)
    kernel = cross_gram(
        model.training_points[support], data, model.kernel_spec, workers=workers, seed=seed
    )
    coefficients = model.alphas[support] * model.labels[support]
    return coefficients @ kernel + model.bias


def decision_value(model: SvmModel, x: Sequence[float]) -> float:
    """Decision score of one point."""
    return float(decision_values(model, [x])[0])


def sign_with_ties(scores: np.ndarray) -> np.ndarray:
    """Elementwise sign with sign(0) = +1."""
    return np.where(np.asarray(scores, dtype=float) >= 0.0, 1, -1)


def predict(
    model: SvmModel, xs: Sequence[Sequence[float]], workers: int = 1, seed: int = 0
) -> np.ndarray:
    """Predicted labels in {-1, +1}; an empty input gives an empty output."""
    return sign_with_ties(decision_values(model, xs, workers=workers, seed=seed)).astype(int)
