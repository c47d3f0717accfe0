"""Kernel specification."""

from typing import Literal, Optional

import numpy as np
from pydantic import Field, model_validator

from ..config.models import SpecModel
from ..encoding.feature_map import FeatureMapSpec
from ..errors import InvalidSpecError

KernelKind = Literal["linear", "polynomial", "rbf", "quantum"]


class KernelSpec(SpecModel):
    """Which kernel to evaluate and with what hyperparameters.

    ``beta = None`` means "resolve from the training data": rbf uses
    1/(d * Var(X)), the other kinds use 1.0.
    """

    kind: KernelKind = Field(..., description="Kernel family")
    beta: Optional[float] = Field(default=None, gt=0, description="Scaling parameter")
    r: float = Field(default=0.0, description="Polynomial coefficient")
    degree: int = Field(default=3, ge=1, description="Polynomial degree D")
    feature_map: Optional[FeatureMapSpec] = Field(default=None, description="Quantum kind only")
    shots: Optional[int] = Field(default=None, description="Shot count; absent means exact overlaps")

    @model_validator(mode="after")
    def check_kind_fields(self) -> "KernelSpec":
        if self.kind == "quantum" and self.feature_map is None:
            raise InvalidSpecError("quantum kernel requires a feature_map")
        if self.kind != "quantum" and self.feature_map is not None:
            raise InvalidSpecError(f"{self.kind} kernel does not take a feature_map")
        if self.shots is not None:
            if self.kind != "quantum":
                raise InvalidSpecError("shots apply to the quantum kernel only")
            if self.shots < 1:
                raise InvalidSpecError(f"shots must be positive, got {self.shots}")
        return self

    @property
    def is_resolved(self) -> bool:
        return self.kind == "quantum" or self.beta is not None

    def resolve(self, xs: np.ndarray) -> "KernelSpec":
        """Fill in an automatic beta from training features.

        Args:
            xs: Training features, shape (n, d)

        Returns:
            Spec with a concrete beta (self if already resolved)
        """
        if self.is_resolved:
            return self
        xs = np.asarray(xs, dtype=float)
        if self.kind == "rbf":
            d = xs.shape[1]
            variance = float(xs.var())
            beta = 1.0 / (d * variance) if variance > 0.0 else 1.0 / d
        else:
            beta = 1.0
        return self.model_copy(update={"beta": beta})
