"""Experiment documents: one JSON object per run, a JSON array per sweep."""

import json
from pathlib import Path
from typing import Annotated, Any, List, Literal, Optional, Union

import numpy as np
from pydantic import Field, ValidationError, field_validator, model_validator

from ..config.models import SpecModel, validation_problems
from ..errors import ConfigError
from ..kernels.spec import KernelSpec
from ..qnn.circuit import QnnConfig
from ..svc.model import SvmTrainConfig


class ExperimentSpec(SpecModel):
    """Experiment sections report problems as ConfigError."""

    error_class = ConfigError


class CsvSource(ExperimentSpec):
    """Samples read from a CSV file."""

    kind: Literal["csv"] = "csv"
    path: str = Field(..., description="CSV path; must exist when the document is validated")
    ecoli_column: Optional[str] = Field(default=None, description="E.coli header override")
    threshold: Optional[float] = Field(default=None, ge=0.0, description="Labeling threshold override")
    missing: Literal["reject", "median"] = Field(default="reject", description="Missing-value policy")

    @field_validator("path")
    @classmethod
    def path_exists(cls, v: str) -> str:
        if not Path(v).is_file():
            raise ValueError(f"CSV file not found: {v}")
        return v


class SyntheticSource(ExperimentSpec):
    """Samples drawn by the synthetic generator."""

    kind: Literal["synthetic"] = "synthetic"
    n: int = Field(default=32, ge=4, description="Number of rows")
    imbalance: float = Field(default=3 / 32, gt=0.0, lt=1.0, description="Fraction of acceptable rows")
    pattern: Literal["shifted", "banded"] = Field(default="shifted", description="Class geometry")
    separation: float = Field(default=1.0, gt=0.0, description="Distance between the classes")

    @model_validator(mode="after")
    def both_classes(self) -> "SyntheticSource":
        acceptable = int(round(self.n * self.imbalance))
        if acceptable in (0, self.n):
            raise ValueError(f"imbalance {self.imbalance} leaves a class empty at n={self.n}")
        return self


DatasetSource = Annotated[Union[CsvSource, SyntheticSource], Field(discriminator="kind")]


class SplitConfig(ExperimentSpec):
    test_fraction: float = Field(default=0.2, gt=0.0, lt=1.0, description="Share of rows held out")
    stratify: bool = Field(default=True, description="Preserve class proportions")


class PipelineConfig(ExperimentSpec):
    """Preprocessing steps between ingestion and the model."""

    oversample: bool = Field(default=True, description="Rebalance classes by random oversampling")
    paper_order: bool = Field(
        default=False,
        description="Oversample the whole dataset before splitting instead of the training split only",
    )
    scale: bool = Field(default=True, description="Min-max scale features (fitted on train)")
    scale_low: float = Field(default=0.0, description="Lower end of the scaled range")
    scale_high: float = Field(default=float(np.pi / 2), description="Upper end of the scaled range")

    @model_validator(mode="after")
    def ordered_range(self) -> "PipelineConfig":
        if not self.scale_high > self.scale_low:
            raise ValueError("scale_high must exceed scale_low")
        return self


class QsvcModelConfig(ExperimentSpec):
    """Kernel SVM on a classical or quantum kernel."""

    family: Literal["qsvc"] = "qsvc"
    kernel: KernelSpec
    svm: SvmTrainConfig = Field(default_factory=SvmTrainConfig)
    save_gram: bool = Field(default=False, description="Also write gram.csv")


class QnnModelConfig(ExperimentSpec):
    """Variational circuit classifier."""

    family: Literal["qnn"] = "qnn"
    qnn: QnnConfig


ModelConfig = Annotated[Union[QsvcModelConfig, QnnModelConfig], Field(discriminator="family")]


class ExperimentConfig(ExperimentSpec):
    """One reproducible run."""

    name: str = Field(default="run", min_length=1, description="Run name; also the output subdirectory")
    dataset: DatasetSource = Field(default_factory=SyntheticSource)
    pipeline: PipelineConfig = Field(default_factory=PipelineConfig)
    split: SplitConfig = Field(default_factory=SplitConfig)
    model: ModelConfig
    scoring: Literal["continuous", "hard_label"] = Field(default="continuous", description="Ranking scores")
    seed: Optional[int] = Field(default=None, ge=0, description="Root seed")
    output_dir: Optional[str] = Field(default=None, description="Parent directory for run outputs")

    @field_validator("name")
    @classmethod
    def safe_name(cls, v: str) -> str:
        if any(sep in v for sep in ("/", "\\")) or v in (".", ".."):
            raise ValueError(f"name must be a plain directory name, got {v!r}")
        return v


def _read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Config file {path} is not valid JSON: {exc}") from exc


def load_experiment(path: Union[str, Path]) -> ExperimentConfig:
    """Read and validate one experiment document.

    Raises:
        ConfigError: Listing every validation problem
    """
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ConfigError(f"Experiment document {path} must be a JSON object")
    return ExperimentConfig.parse(data)


def parse_sweep(items: Any) -> List[ExperimentConfig]:
    """Validate a list of experiment documents, collecting problems from every row.

    Raises:
        ConfigError: If the list is empty or any row is invalid
    """
    if not isinstance(items, list):
        raise ConfigError("A sweep document must be a JSON array of experiments")
    if not items:
        raise ConfigError("A sweep needs at least one experiment")
    configs, problems = [], []
    for index, item in enumerate(items):
        try:
            configs.append(ExperimentConfig.model_validate(item))
        except ValidationError as exc:
            problems.extend(f"[{index}] {problem}" for problem in validation_problems(exc))
    seen = set()
    for index, config in enumerate(configs):
        if config.name in seen:
            problems.append(f"[{index}] name: duplicate run name {config.name!r}")
        seen.add(config.name)
    if problems:
        raise ConfigError(f"Invalid sweep: {len(problems)} problem(s)", problems)
    return configs


def load_sweep(path: Union[str, Path]) -> List[ExperimentConfig]:
    return parse_sweep(_read_json(path))
