"""Serializable metric reports."""

import logging
from typing import List, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import UndefinedMetricError
from .classification import confusion, threshold_metrics
from .ranking import auprc, auroc

logger = logging.getLogger(__name__)

Scoring = Literal["continuous", "hard_label"]


class ConfusionReport(BaseModel):
    """Confusion counts; keys tp, fp, tn, fn."""

    model_config = ConfigDict(frozen=True)

    tp: int = Field(..., ge=0)
    fp: int = Field(..., ge=0)
    tn: int = Field(..., ge=0)
    fn: int = Field(..., ge=0)


class MetricsReport(BaseModel):
    """Table-style binary classification metrics.

    AUROC/AUPRC are None when the evaluated split lacks the class they need;
    ``undefined`` lists every metric that was reported as 0 or None for that reason.
    """

    model_config = ConfigDict(frozen=True)

    accuracy: float = Field(..., ge=0.0, le=1.0)
    f1: float = Field(..., ge=0.0, le=1.0)
    precision: float = Field(..., ge=0.0, le=1.0)
    recall: float = Field(..., ge=0.0, le=1.0)
    auroc: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    auprc: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    confusion: ConfusionReport
    scoring: Scoring = "continuous"
    undefined: List[str] = Field(default_factory=list)


def evaluate(
    predictions: Sequence,
    scores: Sequence[float],
    truths: Sequence,
    positive=1,
    scoring: Scoring = "continuous",
) -> MetricsReport:
    """Compute every metric for one evaluated split.

    Args:
        predictions: Predicted labels
        scores: Continuous scores (decision values or mapped outputs)
        truths: True labels
        positive: Positive class label
        scoring: ``hard_label`` ranks by the predictions instead of ``scores``

    Returns:
        Metrics report
    """
    counts = confusion(predictions, truths, positive)
    thresholds = threshold_metrics(counts)
    undefined = list(thresholds.undefined)
    ranked = (np.asarray(predictions) == positive).astype(float) if scoring == "hard_label" else scores

    area_roc: Optional[float] = None
    area_pr: Optional[float] = None
    try:
        area_roc = auroc(ranked, truths, positive)
    except UndefinedMetricError as exc:
        logger.warning("AUROC undefined: %s", exc)
        undefined.append("auroc")
    try:
        area_pr = auprc(ranked, truths, positive)
    except UndefinedMetricError as exc:
        logger.warning("AUPRC undefined: %s", exc)
        undefined.append("auprc")

    return MetricsReport(
        accuracy=thresholds.accuracy,
        f1=thresholds.f1,
        precision=thresholds.precision,
        recall=thresholds.recall,
        auroc=area_roc,
        auprc=area_pr,
        confusion=ConfusionReport(**counts.to_dict()),
        scoring=scoring,
        undefined=undefined,
    )
