"""Pytest configuration."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to Python path for imports
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Keep AQUAKERN_* variables from the developer's shell out of tests."""
    import os

    from src.config import env

    for key in list(os.environ):
        if key.startswith("AQUAKERN_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.setattr(env, "_settings", None)
    yield
    env._settings = None
