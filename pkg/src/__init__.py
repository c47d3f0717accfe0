"""aquakern: quantum kernel SVMs and variational quantum classifiers for water-quality data."""

__version__ = "0.1.0"
