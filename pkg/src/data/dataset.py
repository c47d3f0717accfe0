"""Samples, datasets and E.coli labeling."""

from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config.schema import ECOLI_THRESHOLD
from ..errors import InvalidInputError


class WaterLabel(IntEnum):
    """Binary water-quality label; ACCEPTABLE is the positive class (+1 for the SVM)."""

    ACCEPTABLE = 1
    NOT_ACCEPTABLE = 0

    @property
    def display(self) -> str:
        return self.name.lower()


def label_by_ecoli(ecoli: float, threshold: float = ECOLI_THRESHOLD) -> WaterLabel:
    """Acceptable iff the E.coli count is at most ``threshold``.

    Raises:
        InvalidInputError: If ``ecoli`` or ``threshold`` is negative or not finite
    """
    if not np.isfinite(ecoli) or ecoli < 0:
        raise InvalidInputError(f"E.coli count must be a nonnegative number, got {ecoli}")
    if not np.isfinite(threshold) or threshold < 0:
        raise InvalidInputError(f"E.coli threshold must be nonnegative, got {threshold}")
    return WaterLabel.ACCEPTABLE if ecoli <= threshold else WaterLabel.NOT_ACCEPTABLE


def label_all(ecoli: Sequence[float], threshold: float = ECOLI_THRESHOLD) -> np.ndarray:
    return np.array([int(label_by_ecoli(float(v), threshold)) for v in ecoli], dtype=int)


@dataclass(frozen=True)
class Sample:
    """One sampling location."""

    features: np.ndarray
    ecoli: float
    label: Optional[WaterLabel] = None


@dataclass(frozen=True)
class MinMaxScaling:
    """Per-column affine map of [minimum, maximum] onto [low, high].

    Constant columns map to the midpoint of the target range.
    """

    minimum: np.ndarray
    maximum: np.ndarray
    low: float
    high: float

    @property
    def constant(self) -> np.ndarray:
        return self.maximum == self.minimum

    def transform(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features, dtype=float)
        span = np.where(self.constant, 1.0, self.maximum - self.minimum)
        scaled = self.low + (features - self.minimum) / span * (self.high - self.low)
        midpoint = (self.low + self.high) / 2.0
        return np.where(self.constant, midpoint, scaled)

    def inverse(self, scaled: np.ndarray) -> np.ndarray:
        scaled = np.asarray(scaled, dtype=float)
        span = self.maximum - self.minimum
        original = self.minimum + (scaled - self.low) / (self.high - self.low) * span
        return np.where(self.constant, self.minimum, original)

    def to_dict(self) -> Dict[str, object]:
        return {
            "minimum": self.minimum.tolist(),
            "maximum": self.maximum.tolist(),
            "range": [self.low, self.high],
        }


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable column-oriented dataset.

    ``features`` is (n, d); ``ecoli`` and ``labels`` are length n. Labels are
    WaterLabel values stored as ints.
    """

    column_names: Tuple[str, ...]
    features: np.ndarray
    ecoli: np.ndarray
    labels: np.ndarray
    scaling: Optional[MinMaxScaling] = None
    threshold: float = ECOLI_THRESHOLD

    def __post_init__(self):
        features = np.array(self.features, dtype=float)
        if features.ndim != 2:
            features = features.reshape(-1, max(len(self.column_names), 1))
        ecoli = np.array(self.ecoli, dtype=float)
        labels = np.array(self.labels, dtype=int)
        n = features.shape[0]
        if features.shape[1] != len(self.column_names):
            raise InvalidInputError(
                f"{features.shape[1]} feature columns but {len(self.column_names)} column names"
            )
        if ecoli.shape != (n,) or labels.shape != (n,):
            raise InvalidInputError(f"Expected {n} E.coli values and labels")
        if not np.all(np.isfinite(features)):
            raise InvalidInputError("Dataset features contain NaN or infinite values")
        if np.any(ecoli < 0):
            raise InvalidInputError("E.coli counts must be nonnegative")
        for array in (features, ecoli, labels):
            array.setflags(write=False)
        object.__setattr__(self, "column_names", tuple(self.column_names))
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "ecoli", ecoli)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_ecoli(
        cls,
        column_names: Sequence[str],
        features: np.ndarray,
        ecoli: Sequence[float],
        threshold: float = ECOLI_THRESHOLD,
    ) -> "Dataset":
        """Build a dataset whose labels are derived from the E.coli counts."""
        return cls(tuple(column_names), features, ecoli, label_all(ecoli, threshold), threshold=threshold)

    def __len__(self) -> int:
        return int(self.features.shape[0])

    @property
    def num_features(self) -> int:
        return len(self.column_names)

    @property
    def samples(self) -> List[Sample]:
        return [
            Sample(self.features[i], float(self.ecoli[i]), WaterLabel(int(self.labels[i])))
            for i in range(len(self))
        ]

    def class_counts(self) -> Dict[str, int]:
        return {label.display: int(np.sum(self.labels == label)) for label in WaterLabel}

    def subset(self, indices: Sequence[int]) -> "Dataset":
        """Rows at ``indices``, in that order; duplicates allowed."""
        index = np.asarray(indices, dtype=int)
        return replace(
            self,
            features=self.features[index],
            ecoli=self.ecoli[index],
            labels=self.labels[index],
        )

    def with_features(self, features: np.ndarray, scaling: Optional[MinMaxScaling]) -> "Dataset":
        return replace(self, features=features, scaling=scaling)

    def svm_labels(self) -> np.ndarray:
        """Labels as +1 (acceptable) / -1 (not acceptable)."""
        return 2 * self.labels - 1


@dataclass
class IngestionReport:
    """What happened while reading a CSV."""

    source: str
    rows_read: int = 0
    rows_rejected: int = 0
    rows_imputed: int = 0
    dropped_columns: List[str] = field(default_factory=list)
    class_counts: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {
            "source": self.source,
            "rows_read": self.rows_read,
            "rows_rejected": self.rows_rejected,
            "rows_imputed": self.rows_imputed,
            "dropped_columns": list(self.dropped_columns),
            "class_counts": dict(self.class_counts),
        }
