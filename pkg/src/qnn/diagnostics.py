"""Dead-neuron and loss-plateau detection."""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np

from ..errors import InvalidInputError

DEAD_VARIANCE = 1e-12
PLATEAU_DELTA = 1e-9
PLATEAU_WINDOW = 10


@dataclass(frozen=True)
class DeadNeuronVerdict:
    """Outcome of :func:`dead_neuron_check`."""

    dead: bool
    plateau: bool
    output_variance: float
    window: int = PLATEAU_WINDOW

    @property
    def verdict(self) -> str:
        if self.dead:
            return "dead"
        return "plateau" if self.plateau else "healthy"

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["verdict"] = self.verdict
        return data


def dead_neuron_check(
    outputs: Sequence[float],
    loss_history: Optional[Sequence[float]] = None,
    window: int = PLATEAU_WINDOW,
) -> DeadNeuronVerdict:
    """Flag constant outputs over a batch and a flat loss curve.

    Args:
        outputs: Model outputs over one batch
        loss_history: Per-epoch losses, oldest first
        window: Number of trailing epoch-to-epoch deltas inspected

    Returns:
        Verdict; ``dead`` when output variance is below 1e-12, ``plateau`` when
        the last ``window`` loss deltas are all below 1e-9

    Raises:
        InvalidInputError: If the batch has fewer than two outputs
    """
    outputs = np.asarray(outputs, dtype=float)
    if outputs.ndim != 1 or len(outputs) < 2:
        raise InvalidInputError("dead_neuron_check needs a batch of at least two outputs")
    variance = float(outputs.var())
    plateau = False
    if loss_history is not None and len(loss_history) > window:
        deltas = np.abs(np.diff(np.asarray(loss_history, dtype=float)[-(window + 1) :]))
        plateau = bool(np.all(deltas < PLATEAU_DELTA))
    return DeadNeuronVerdict(
        dead=variance < DEAD_VARIANCE, plateau=plateau, output_variance=variance, window=window
    )
