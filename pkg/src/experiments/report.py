"""Run reports and sweep tables."""

import json
import threading
from collections import defaultdict
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from ..metrics.report import MetricsReport

REPORT_FILE = "report.json"
HISTORY_FILE = "history.csv"
GRAM_FILE = "gram.csv"
SWEEP_CSV = "sweep.csv"
SWEEP_TEXT = "sweep.txt"
SCHEMA_VERSION = "1.0"

# One writer per output directory at a time
_directory_locks: Dict[str, threading.Lock] = defaultdict(threading.Lock)
_registry_lock = threading.Lock()


def directory_lock(directory: Union[str, Path]) -> threading.Lock:
    key = str(Path(directory).resolve())
    with _registry_lock:
        return _directory_locks[key]


class SplitSummary(BaseModel):
    """Sizes and class counts of the evaluated split."""

    train_size: int
    test_size: int
    train_counts: Dict[str, int]
    test_counts: Dict[str, int]


class GramSummary(BaseModel):
    """Numerical health of the training Gram matrix."""

    size: int
    min_eigenvalue: float
    symmetry_residual: float
    diagonal_min: float
    diagonal_max: float


class RunDiagnostics(BaseModel):
    """Flags raised during a run."""

    dead_neuron: bool = False
    plateau: bool = False
    output_variance: Optional[float] = None
    undefined_metrics: List[str] = Field(default_factory=list)


class RunReport(BaseModel):
    """Everything one run produced.

    ``config`` echoes the validated experiment with the resolved seed filled
    in, so running it again reproduces the metrics. A failed run keeps the
    echo, timing and whatever stages finished, with ``error`` holding the
    error's ``to_dict()``.
    """

    model_config = ConfigDict(frozen=True)

    schema_version: str = SCHEMA_VERSION
    name: str
    family: Literal["qsvc", "qnn"]
    seed: int
    config: Dict[str, Any]
    status: Literal["ok", "failed"] = "ok"
    error: Optional[Dict[str, Any]] = None
    ingestion: Optional[Dict[str, Any]] = None
    split: Optional[SplitSummary] = None
    metrics: Optional[MetricsReport] = None
    history: Optional[Dict[str, List[float]]] = None
    gram: Optional[GramSummary] = None
    diagnostics: RunDiagnostics = Field(default_factory=RunDiagnostics)
    timing: Dict[str, float] = Field(default_factory=dict)
    files: List[str] = Field(default_factory=list)


def write_report(report: RunReport, directory: Union[str, Path]) -> Path:
    """Write ``report.json`` into ``directory``."""
    directory = Path(directory)
    with directory_lock(directory):
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / REPORT_FILE
        path.write_text(json.dumps(report.model_dump(mode="json"), indent=2), encoding="utf-8")
    return path


def read_report(path: Union[str, Path]) -> RunReport:
    return RunReport.model_validate_json(Path(path).read_text(encoding="utf-8"))


def qsvc_row(report: RunReport) -> Dict[str, Any]:
    metrics = report.metrics
    return {
        "kernel": report.config["model"]["kernel"]["kind"],
        "accuracy": metrics.accuracy,
        "f1": metrics.f1,
        "precision": metrics.precision,
        "recall": metrics.recall,
        "auroc": metrics.auroc,
        "auprc": metrics.auprc,
    }


def qnn_row(report: RunReport) -> Dict[str, Any]:
    qnn = report.config["model"]["qnn"]
    noise = qnn.get("noise") or []
    loss = report.history["loss"] if report.history else []
    return {
        "optimizer": qnn["optimizer"],
        "learning_rate": qnn["learning_rate"],
        "noise": ", ".join(f"{c['kind']} {c['probability']}" for c in noise) or "none",
        "final_loss": loss[-1] if loss else None,
        "accuracy": report.metrics.accuracy,
        "dead_neuron": report.diagnostics.dead_neuron,
    }


def sweep_row(name: str, report: Optional[RunReport], error: Optional[str] = None) -> Dict[str, Any]:
    """One table row; a failed run keeps its name and error message."""
    row: Dict[str, Any] = {"name": name, "status": "ok" if error is None else "failed"}
    if report is not None:
        row.update(qsvc_row(report) if report.family == "qsvc" else qnn_row(report))
    row["error"] = error or ""
    return row


def write_sweep_table(rows: List[Dict[str, Any]], directory: Union[str, Path]) -> Dict[str, Path]:
    """Write the combined table as CSV and as aligned text."""
    directory = Path(directory)
    frame = pd.DataFrame(rows)
    with directory_lock(directory):
        directory.mkdir(parents=True, exist_ok=True)
        csv_path = directory / SWEEP_CSV
        text_path = directory / SWEEP_TEXT
        frame.to_csv(csv_path, index=False)
        text_path.write_text(format_table(frame) + "\n", encoding="utf-8")
    return {"csv": csv_path, "text": text_path}


def format_table(frame: pd.DataFrame) -> str:
    return frame.to_string(index=False, float_format=lambda v: f"{v:.4f}", na_rep="-")
