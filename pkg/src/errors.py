"""Exception hierarchy shared by every aquakern module.

Each family carries the process exit code the command-line runner uses when the
error escapes a run: 2 for configuration problems, 3 for data problems and 4 for
numerical failures.
"""

from typing import Any, Dict, List, Optional


class AquakernError(ValueError):
    """Base class for all aquakern errors."""

    exit_code: int = 1

    def __init__(self, message: str, problems: Optional[List[str]] = None):
        """Initialize error.

        Args:
            message: Human readable summary
            problems: Optional list of individual problems (all of them, not just the first)
        """
        super().__init__(message)
        self.message = message
        self.problems: List[str] = list(problems or [])

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form written to stderr by the CLI.

        Returns:
            Dictionary with error class, exit code, message and problems
        """
        return {
            "error": type(self).__name__,
            "exit_code": self.exit_code,
            "message": self.message,
            "problems": self.problems,
        }


# Configuration (exit code 2)


class ConfigError(AquakernError):
    """Experiment configuration is invalid."""

    exit_code = 2


class InvalidSpecError(ConfigError):
    """A feature map, kernel or model spec is inconsistent."""


class OutputPathError(ConfigError):
    """A report, table or data file cannot be written where the user pointed."""

    @classmethod
    def from_os_error(cls, exc: OSError) -> "OutputPathError":
        target = exc.filename if exc.filename is not None else "output path"
        return cls(f"Cannot write {target}: {exc.strerror or exc}", problems=[f"{type(exc).__name__}: {exc}"])


# Data (exit code 3)


class DataError(AquakernError):
    """Input data cannot be used."""

    exit_code = 3


class InvalidInputError(DataError):
    """Malformed input: empty, ragged, wrong length or out of range."""


class CannotNormalizeError(InvalidInputError):
    """A vector with zero norm was given where a normalized state is required."""


class DegenerateClassError(DataError):
    """Only one class is present where both are required."""


# Numerical (exit code 4)


class NumericalError(AquakernError):
    """Numerical routine received invalid arguments or failed."""

    exit_code = 4


class InvalidGateError(NumericalError):
    """Gate indices or arguments do not fit the state."""


class InvalidObservableError(NumericalError):
    """Observable does not match the state dimension."""


class InvalidProbabilityError(NumericalError):
    """Channel probability outside [0, 1]."""


class InvalidParametersError(NumericalError):
    """Parameter vector length does not match the model."""


class DegenerateProblemError(NumericalError):
    """Optimization problem has no meaningful solution (e.g. single-class SVM)."""


class UndefinedMetricError(NumericalError):
    """Metric is undefined for the given truths (e.g. AUROC with one class)."""
