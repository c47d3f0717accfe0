"""Shot-based overlap estimation by the inversion test."""

import numpy as np

from ..encoding.feature_map import FeatureMapCircuit, FeatureMapSpec
from ..quantum.state import sample_counts

GRAM_STAGE = 0
CROSS_STAGE = 1


def pair_rng(root_seed: int, stage: int, i: int, j: int) -> np.random.Generator:
    """Generator for one kernel entry, independent of evaluation order."""
    return np.random.default_rng(np.random.SeedSequence(entropy=root_seed, spawn_key=(stage, i, j)))


def inversion_test(
    x: np.ndarray, z: np.ndarray, feature_map: FeatureMapSpec, shots: int, rng: np.random.Generator
) -> float:
    """Estimate |<psi(z)|psi(x)>|^2.

    Prepares psi(x), runs the inverse feature map of z, and returns the
    frequency of the all-zeros outcome over ``shots`` measurements.
    """
    state = FeatureMapCircuit(x, feature_map).prepare()
    state = FeatureMapCircuit(z, feature_map).apply_inverse(state)
    counts = sample_counts(state, shots, rng)
    return float(counts[0]) / shots
