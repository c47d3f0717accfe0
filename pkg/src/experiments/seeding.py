"""Root seed resolution and per-stage seed derivation."""

from typing import Optional

import numpy as np

from ..config.env import get_settings
from ..errors import ConfigError

# Stage keys are append-only: a new stage gets the next number so the
# seeds of existing stages never move.
STAGES = {
    "synthetic": 0,
    "oversample": 1,
    "split": 2,
    "kernel": 3,
    "svm": 4,
    "qnn": 5,
}


def resolve_seed(cli_seed: Optional[int] = None, config_seed: Optional[int] = None) -> int:
    """--seed, then the experiment's seed, then AQUAKERN_SEED, then 0."""
    for candidate in (cli_seed, config_seed, get_settings().seed):
        if candidate is not None:
            if candidate < 0:
                raise ConfigError(f"Seeds must be nonnegative, got {candidate}")
            return int(candidate)
    return 0


def stage_seed(root_seed: int, stage: str) -> int:
    """Independent 32-bit seed for one pipeline stage."""
    if stage not in STAGES:
        raise ConfigError(f"Unknown pipeline stage: {stage}")
    sequence = np.random.SeedSequence(entropy=root_seed, spawn_key=(STAGES[stage],))
    return int(sequence.generate_state(1)[0])
