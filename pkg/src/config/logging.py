"""Logging setup for the command-line runner."""

import logging
import sys
from typing import Optional

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None, quiet: bool = False) -> None:
    """Install a single stderr handler on the root logger.

    Args:
        level: Level name; defaults to the ``AQUAKERN_LOG_LEVEL`` setting
        quiet: Raise the level to WARNING regardless of ``level``
    """
    if level is None:
        from .env import get_settings

        level = get_settings().log_level
    if quiet:
        level = "WARNING"
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
