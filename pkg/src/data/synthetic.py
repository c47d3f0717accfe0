"""Synthetic water-quality datasets with the field-sheet column schema.

Feature levels are rough river-sampling magnitudes; they are an approximation
of a real survey, not a reproduction of one.
"""

import logging
from typing import Literal, Tuple

import numpy as np

from ..config.schema import ECOLI_THRESHOLD, feature_names
from ..errors import InvalidInputError
from .dataset import Dataset, WaterLabel

logger = logging.getLogger(__name__)

Pattern = Literal["shifted", "banded"]

# Typical level per schema column, in schema order
BASE_LEVELS = np.array([0.3, 0.05, 1.5, 25.0, 8.0, 2.0])

# Log-scale offset applied to contaminated samples (flow rate unaffected)
CONTAMINATION_SHIFT = np.array([0.6, 0.6, 0.5, 0.3, 0.5, 0.0])

LOG_SPREAD = 0.35
BAND_NOISE = 0.08


def class_sizes(n: int, imbalance: float) -> Tuple[int, int]:
    """(acceptable, not acceptable) counts; acceptable = round(n * imbalance)."""
    if n < 4:
        raise InvalidInputError(f"Synthetic datasets need n >= 4, got {n}")
    if not 0.0 < imbalance < 1.0:
        raise InvalidInputError(f"imbalance must lie in (0, 1), got {imbalance}")
    acceptable = int(round(n * imbalance))
    if acceptable == 0 or acceptable == n:
        raise InvalidInputError(f"imbalance {imbalance} leaves a class empty at n={n}")
    return acceptable, n - acceptable


def _shifted(rng: np.random.Generator, labels: np.ndarray, separation: float) -> np.ndarray:
    direction = np.where(labels == WaterLabel.NOT_ACCEPTABLE, 1.0, -1.0)[:, None]
    log_levels = (
        np.log(BASE_LEVELS)[None, :]
        + 0.5 * separation * direction * CONTAMINATION_SHIFT[None, :]
        + rng.normal(0.0, LOG_SPREAD, size=(len(labels), len(BASE_LEVELS)))
    )
    return np.exp(log_levels)


def _banded(rng: np.random.Generator, labels: np.ndarray, separation: float) -> np.ndarray:
    """Acceptable rows sit mid-range on every column; contaminated rows sit low or high."""
    n, d = len(labels), len(BASE_LEVELS)
    side = rng.choice([-1.0, 1.0], size=(n, d))
    offset = np.where(labels[:, None] == WaterLabel.NOT_ACCEPTABLE, 0.3 * side, 0.0)
    position = 0.5 + offset + rng.normal(0.0, BAND_NOISE / separation, size=(n, d))
    return BASE_LEVELS[None, :] * (0.2 + 1.6 * np.clip(position, 0.0, 1.0))


def generate_synthetic(
    n: int,
    imbalance: float,
    seed: int,
    pattern: Pattern = "shifted",
    separation: float = 1.0,
    threshold: float = ECOLI_THRESHOLD,
) -> Dataset:
    """Draw a labeled dataset with exactly round(n * imbalance) acceptable rows.

    Args:
        n: Number of rows (>= 4)
        imbalance: Fraction of acceptable rows, in (0, 1)
        seed: Generator seed
        pattern: ``shifted`` (overlapping log-normal clouds) or ``banded``
            (not linearly separable)
        separation: Scales the distance between the classes
        threshold: E.coli labeling threshold

    Raises:
        InvalidInputError: If a class would be empty or arguments are out of range
    """
    acceptable, contaminated = class_sizes(n, imbalance)
    if separation <= 0:
        raise InvalidInputError(f"separation must be positive, got {separation}")
    rng = np.random.default_rng(seed)
    drawn = [np.full(acceptable, int(WaterLabel.ACCEPTABLE)), np.full(contaminated, int(WaterLabel.NOT_ACCEPTABLE))]
    labels = rng.permutation(np.concatenate(drawn))
    if pattern == "shifted":
        features = _shifted(rng, labels, separation)
    elif pattern == "banded":
        features = _banded(rng, labels, separation)
    else:
        raise InvalidInputError(f"Unknown synthetic pattern: {pattern}")
    ecoli = np.where(
        labels == WaterLabel.NOT_ACCEPTABLE,
        threshold + 1.0 + rng.lognormal(5.0, 1.0, size=n),
        rng.uniform(0.0, threshold, size=n),
    )
    dataset = Dataset.from_ecoli(feature_names(), features, ecoli, threshold)
    logger.info("Generated %d synthetic rows (%s): %s", n, pattern, dataset.class_counts())
    return dataset
