"""Class rebalancing and train/test splitting."""

import logging
import math
from typing import Tuple

import numpy as np
from sklearn.model_selection import train_test_split

from ..errors import DegenerateClassError, InvalidInputError
from .dataset import Dataset

logger = logging.getLogger(__name__)

# ceil() guard for products like 10 * 0.3 = 3.0000000000000004
ROUNDING_SLACK = 1e-9


def random_oversample(dataset: Dataset, seed: int) -> Dataset:
    """Duplicate minority samples (with replacement) until both classes are equal.

    Majority rows are kept once each; the result is shuffled with the same
    generator.

    Raises:
        DegenerateClassError: If fewer than two classes are present
    """
    classes, counts = np.unique(dataset.labels, return_counts=True)
    if len(classes) < 2:
        raise DegenerateClassError(
            f"Oversampling needs both classes, found only {dataset.class_counts()}"
        )
    rng = np.random.default_rng(seed)
    target = int(counts.max())
    indices = [np.arange(len(dataset))]
    for label, count in zip(classes, counts):
        if count < target:
            members = np.flatnonzero(dataset.labels == label)
            indices.append(rng.choice(members, size=target - count, replace=True))
    order = rng.permutation(np.concatenate(indices))
    result = dataset.subset(order)
    logger.info("Oversampled %s to %s", dataset.class_counts(), result.class_counts())
    return result


def holdout_size(n: int, test_fraction: float) -> int:
    """ceil(n * f) clamped to [1, n - 1]."""
    if not 0.0 < test_fraction < 1.0:
        raise InvalidInputError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    if n < 2:
        raise InvalidInputError(f"Splitting needs at least 2 samples, got {n}")
    return min(max(math.ceil(n * test_fraction - ROUNDING_SLACK), 1), n - 1)


def split(
    dataset: Dataset, test_fraction: float, stratify: bool, seed: int
) -> Tuple[Dataset, Dataset]:
    """Partition into (train, test).

    The holdout size is fixed by :func:`holdout_size`; scikit-learn then
    allocates it across classes when ``stratify`` is set.

    Args:
        dataset: Rows to split
        test_fraction: Share of rows sent to test, in (0, 1)
        stratify: Preserve class proportions within rounding
        seed: Shuffle seed

    Returns:
        (train, test); together they are the input as a multiset

    Raises:
        InvalidInputError: If the fraction is outside (0, 1), n < 2, or a
            class is too small to appear on both sides of a stratified split
    """
    n = len(dataset)
    n_test = holdout_size(n, test_fraction)
    try:
        train_idx, test_idx = train_test_split(
            np.arange(n),
            test_size=n_test,
            stratify=dataset.labels if stratify else None,
            random_state=seed,
        )
    except ValueError as exc:
        raise InvalidInputError(
            f"Cannot stratify {dataset.class_counts()} into {n_test} test rows: {exc}"
        ) from exc
    logger.debug("Split %d rows into %d train / %d test", n, len(train_idx), len(test_idx))
    return dataset.subset(train_idx), dataset.subset(test_idx)
