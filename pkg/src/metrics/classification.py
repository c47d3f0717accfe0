"""Confusion counts and threshold metrics."""

from dataclasses import asdict, dataclass, field
from typing import Dict, List, Sequence

import numpy as np

from ..errors import InvalidInputError


@dataclass(frozen=True)
class ConfusionCounts:
    """Binary confusion matrix for a declared positive class."""

    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise InvalidInputError(f"Confusion counts must be nonnegative: {self}")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def transposed(self) -> "ConfusionCounts":
        """Counts with the other class declared positive."""
        return ConfusionCounts(tp=self.tn, fp=self.fn, tn=self.tp, fn=self.fp)

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


@dataclass(frozen=True)
class ThresholdMetrics:
    """Accuracy, precision, recall and F1; ``undefined`` names ratios whose denominator was 0."""

    accuracy: float
    precision: float
    recall: float
    f1: float
    undefined: List[str] = field(default_factory=list)


def _as_labels(values: Sequence, name: str) -> np.ndarray:
    array = np.asarray(values)
    if array.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional")
    return array


def confusion(predictions: Sequence, truths: Sequence, positive=1) -> ConfusionCounts:
    """Count tp, fp, tn, fn with ``positive`` as the positive class.

    Raises:
        InvalidInputError: If inputs are empty or differ in length
    """
    predicted = _as_labels(predictions, "predictions")
    actual = _as_labels(truths, "truths")
    if len(predicted) != len(actual):
        raise InvalidInputError(
            f"predictions ({len(predicted)}) and truths ({len(actual)}) differ in length"
        )
    if len(actual) == 0:
        raise InvalidInputError("confusion needs at least one sample")
    predicted_pos = predicted == positive
    actual_pos = actual == positive
    return ConfusionCounts(
        tp=int(np.sum(predicted_pos & actual_pos)),
        fp=int(np.sum(predicted_pos & ~actual_pos)),
        tn=int(np.sum(~predicted_pos & ~actual_pos)),
        fn=int(np.sum(~predicted_pos & actual_pos)),
    )


def _ratio(numerator: float, denominator: float, name: str, undefined: List[str]) -> float:
    if denominator == 0:
        undefined.append(name)
        return 0.0
    return numerator / denominator


def threshold_metrics(counts: ConfusionCounts) -> ThresholdMetrics:
    """Metrics at the model's decision threshold.

    Ratios with a zero denominator are reported as 0 and listed in ``undefined``.

    Raises:
        InvalidInputError: If there are no samples
    """
    if counts.total == 0:
        raise InvalidInputError("threshold_metrics needs at least one sample")
    undefined: List[str] = []
    accuracy = (counts.tp + counts.tn) / counts.total
    precision = _ratio(counts.tp, counts.tp + counts.fp, "precision", undefined)
    recall = _ratio(counts.tp, counts.tp + counts.fn, "recall", undefined)
    f1 = _ratio(2 * precision * recall, precision + recall, "f1", undefined)
    return ThresholdMetrics(accuracy, precision, recall, f1, undefined)
