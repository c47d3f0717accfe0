"""Threshold-free ranking metrics: AUROC and AUPRC."""

from typing import Sequence, Tuple

import numpy as np
from scipy.stats import rankdata

from ..errors import InvalidInputError, UndefinedMetricError


def _prepare(scores: Sequence[float], truths: Sequence, positive) -> Tuple[np.ndarray, np.ndarray]:
    s = np.asarray(scores, dtype=float)
    t = np.asarray(truths)
    if s.ndim != 1 or s.shape != t.shape:
        raise InvalidInputError(f"scores {s.shape} and truths {t.shape} must be equal-length vectors")
    if not np.all(np.isfinite(s)):
        raise InvalidInputError("scores must be finite")
    return s, t == positive


def auroc(scores: Sequence[float], truths: Sequence, positive=1) -> float:
    """Area under the ROC curve as the Mann-Whitney statistic.

    Tied positive/negative pairs count one half.

    Raises:
        UndefinedMetricError: If only one class is present
    """
    s, is_pos = _prepare(scores, truths, positive)
    n_pos = int(is_pos.sum())
    n_neg = len(s) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("AUROC needs both classes in the truths")
    ranks = rankdata(s, method="average")
    u = ranks[is_pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def precision_recall_points(
    scores: Sequence[float], truths: Sequence, positive=1
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(precision, recall, threshold) at every distinct score, highest threshold first.

    Raises:
        UndefinedMetricError: If there is no positive truth
    """
    s, is_pos = _prepare(scores, truths, positive)
    n_pos = int(is_pos.sum())
    if n_pos == 0:
        raise UndefinedMetricError("AUPRC needs at least one positive truth")
    order = np.argsort(-s, kind="mergesort")
    s, is_pos = s[order], is_pos[order]
    # last index of each run of equal scores
    ends = np.flatnonzero(np.r_[s[1:] != s[:-1], True])
    true_pos = np.cumsum(is_pos)[ends]
    predicted = ends + 1
    return true_pos / predicted, true_pos / n_pos, s[ends]


def auprc(scores: Sequence[float], truths: Sequence, positive=1) -> float:
    """Step-wise area under the precision-recall curve (no interpolation).

    Sum over descending distinct thresholds of (recall gain) x precision.

    Raises:
        UndefinedMetricError: If there is no positive truth
    """
    precision, recall, _ = precision_recall_points(scores, truths, positive)
    gains = np.diff(np.r_[0.0, recall])
    return float(np.sum(gains * precision))
