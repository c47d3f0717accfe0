"""Min-max feature scaling into the encoder's angle domain."""

from typing import Tuple

import numpy as np

from ..errors import InvalidInputError
from .dataset import Dataset, MinMaxScaling

DEFAULT_RANGE: Tuple[float, float] = (0.0, np.pi / 2)


def fit_scaling(features: np.ndarray, low: float = DEFAULT_RANGE[0], high: float = DEFAULT_RANGE[1]) -> MinMaxScaling:
    """Column minima and maxima of ``features``.

    Raises:
        InvalidInputError: If there are no rows or the range is empty
    """
    features = np.asarray(features, dtype=float)
    if features.ndim != 2 or features.shape[0] == 0:
        raise InvalidInputError("Cannot fit scaling on an empty dataset")
    if not high > low:
        raise InvalidInputError(f"Scaling range must satisfy low < high, got [{low}, {high}]")
    return MinMaxScaling(features.min(axis=0), features.max(axis=0), float(low), float(high))


def minmax_scale(
    dataset: Dataset, low: float = DEFAULT_RANGE[0], high: float = DEFAULT_RANGE[1]
) -> Dataset:
    """Map each column affinely onto [low, high] and keep the fitted parameters.

    A constant column maps to the midpoint of the range.
    """
    scaling = fit_scaling(dataset.features, low, high)
    return dataset.with_features(scaling.transform(dataset.features), scaling)


def apply_scaling(dataset: Dataset, scaling: MinMaxScaling) -> Dataset:
    """Reuse scaling fitted elsewhere (typically on the training split).

    Values outside the fitted range land outside [low, high].
    """
    if len(scaling.minimum) != dataset.num_features:
        raise InvalidInputError(
            f"Scaling fitted on {len(scaling.minimum)} columns, dataset has {dataset.num_features}"
        )
    return dataset.with_features(scaling.transform(dataset.features), scaling)


def inverse_scale(dataset: Dataset) -> Dataset:
    """Undo :func:`minmax_scale`."""
    if dataset.scaling is None:
        raise InvalidInputError("Dataset carries no scaling to invert")
    return dataset.with_features(dataset.scaling.inverse(dataset.features), None)
