"""Runs one experiment end to end: data, model, metrics, report."""

import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, Optional, Tuple, Union

import pandas as pd

from ..config.env import get_settings
from ..data.dataset import Dataset, IngestionReport, WaterLabel
from ..data.loader import load_csv
from ..data.preprocessing import apply_scaling, minmax_scale
from ..data.sampling import random_oversample, split
from ..data.synthetic import generate_synthetic
from ..errors import AquakernError
from ..kernels.kernel import gram_diagnostics, gram_matrix
from ..metrics.report import MetricsReport, evaluate
from ..qnn.training import history_to_csv, qnn_outputs, train_qnn
from ..svc.model import decision_values, sign_with_ties, train_svm
from .config import CsvSource, ExperimentConfig, QnnModelConfig, QsvcModelConfig
from .report import (
    GRAM_FILE,
    HISTORY_FILE,
    GramSummary,
    RunDiagnostics,
    RunReport,
    SplitSummary,
    write_report,
)
from .seeding import resolve_seed, stage_seed

logger = logging.getLogger(__name__)

POSITIVE = int(WaterLabel.ACCEPTABLE)


class Stopwatch:
    """Wall-clock seconds per named stage."""

    def __init__(self):
        self.timings: Dict[str, float] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = time.perf_counter() - start


def load_dataset(config: ExperimentConfig, root_seed: int) -> Tuple[Dataset, IngestionReport]:
    """Read the CSV or draw the synthetic dataset the experiment names."""
    source = config.dataset
    if isinstance(source, CsvSource):
        return load_csv(source.path, source.ecoli_column, source.threshold, source.missing)
    dataset = generate_synthetic(
        source.n,
        source.imbalance,
        stage_seed(root_seed, "synthetic"),
        pattern=source.pattern,
        separation=source.separation,
        threshold=get_settings().ecoli_threshold,
    )
    report = IngestionReport(
        source=f"synthetic:{source.pattern}", rows_read=len(dataset), class_counts=dataset.class_counts()
    )
    return dataset, report


def prepare_splits(config: ExperimentConfig, dataset: Dataset, root_seed: int) -> Tuple[Dataset, Dataset]:
    """Oversample, split and scale in the configured order.

    By default only the training split is oversampled; ``paper_order``
    rebalances the whole dataset first, which lets duplicates of a minority
    row land on both sides.
    """
    pipeline = config.pipeline
    oversample_seed = stage_seed(root_seed, "oversample")
    split_seed = stage_seed(root_seed, "split")
    if pipeline.oversample and pipeline.paper_order:
        dataset = random_oversample(dataset, oversample_seed)
    train, test = split(dataset, config.split.test_fraction, config.split.stratify, split_seed)
    if pipeline.oversample and not pipeline.paper_order:
        train = random_oversample(train, oversample_seed)
    if pipeline.scale:
        train = minmax_scale(train, pipeline.scale_low, pipeline.scale_high)
        test = apply_scaling(test, train.scaling)
    return train, test


def _run_qsvc(
    model_config: QsvcModelConfig,
    train: Dataset,
    test: Dataset,
    root_seed: int,
    workers: int,
    run_dir: Path,
    clock: Stopwatch,
):
    kernel = model_config.kernel
    if kernel.feature_map is not None:
        kernel.feature_map.check(train.num_features)
    kernel_seed = stage_seed(root_seed, "kernel")
    with clock.stage("gram"):
        gram = gram_matrix(train.features, kernel, workers=workers, seed=kernel_seed)
    svm_config = model_config.svm.model_copy(update={"seed": stage_seed(root_seed, "svm")})
    with clock.stage("train"):
        model = train_svm(gram, train.svm_labels(), svm_config)
    with clock.stage("predict"):
        scores = decision_values(model, test.features, workers=workers, seed=kernel_seed)
    predictions = (sign_with_ties(scores) + 1) // 2
    files = []
    if model_config.save_gram:
        path = run_dir / GRAM_FILE
        run_dir.mkdir(parents=True, exist_ok=True)
        pd.DataFrame(gram.entries).to_csv(path, index=False, header=False, float_format="%.17g")
        files.append(path.name)
    summary = GramSummary(**gram_diagnostics(gram.entries).to_dict())
    return predictions, scores, {"gram": summary}, files


def _run_qnn(
    model_config: QnnModelConfig,
    train: Dataset,
    test: Dataset,
    root_seed: int,
    workers: int,
    run_dir: Path,
    clock: Stopwatch,
):
    qnn_config = model_config.qnn.model_copy(update={"seed": stage_seed(root_seed, "qnn")})
    qnn_config.encoding.check(train.num_features)
    with clock.stage("train"):
        model = train_qnn(train.features, train.labels, qnn_config, workers=workers)
    with clock.stage("predict"):
        outputs = qnn_outputs(model, test.features, workers=workers)
    predictions = (outputs >= 0.5).astype(int)
    history_to_csv(model.history, run_dir / HISTORY_FILE)
    diagnostics = RunDiagnostics()
    if model.diagnostics is not None:
        diagnostics = RunDiagnostics(
            dead_neuron=model.diagnostics.dead,
            plateau=model.diagnostics.plateau,
            output_variance=model.diagnostics.output_variance,
        )
    extras = {"history": model.history.to_dict(), "diagnostics": diagnostics}
    return predictions, outputs, extras, [HISTORY_FILE]


def run_directory(config: ExperimentConfig, output_dir: Optional[Union[str, Path]] = None) -> Path:
    """--out, then the experiment's output_dir, then AQUAKERN_OUTPUT_DIR; plus the run name."""
    if output_dir or config.output_dir:
        return Path(output_dir or config.output_dir) / config.name
    return get_settings().get_output_dir() / config.name


def echo_config(config: ExperimentConfig, root_seed: int) -> Dict[str, Any]:
    """The experiment as JSON with the resolved seed, ready to run again."""
    return config.model_copy(update={"seed": root_seed}).model_dump(mode="json")


def _write_failure(
    config: ExperimentConfig,
    root_seed: int,
    run_dir: Path,
    error: AquakernError,
    ingestion: Optional[IngestionReport],
    clock: Stopwatch,
) -> None:
    report = RunReport(
        name=config.name,
        family=config.model.family,
        seed=root_seed,
        config=echo_config(config, root_seed),
        status="failed",
        error=error.to_dict(),
        ingestion=ingestion.to_dict() if ingestion is not None else None,
        timing={name: round(seconds, 6) for name, seconds in clock.timings.items()},
        files=["report.json"],
    )
    try:
        write_report(report, run_dir)
    except OSError as exc:
        logger.warning("Run %r: could not write failure report: %s", config.name, exc)


def run_experiment(
    config: ExperimentConfig,
    seed: Optional[int] = None,
    output_dir: Optional[Union[str, Path]] = None,
    workers: Optional[int] = None,
) -> RunReport:
    """Run one experiment and write its report.

    A run that fails still writes ``report.json`` with ``status`` set to
    ``failed`` before the error propagates.

    Args:
        config: Validated experiment
        seed: Seed override (the --seed flag)
        output_dir: Parent directory override (the --out flag)
        workers: Thread pool size; defaults to AQUAKERN_WORKERS

    Returns:
        The report that was written to ``<output_dir>/<name>/report.json``
    """
    root_seed = resolve_seed(seed, config.seed)
    workers = workers or get_settings().workers
    run_dir = run_directory(config, output_dir)
    clock = Stopwatch()
    ingestion: Optional[IngestionReport] = None
    logger.info("Run %r (%s), seed %d", config.name, config.model.family, root_seed)

    try:
        with clock.stage("data"):
            dataset, ingestion = load_dataset(config, root_seed)
            train, test = prepare_splits(config, dataset, root_seed)

        runner = _run_qsvc if isinstance(config.model, QsvcModelConfig) else _run_qnn
        predictions, scores, extras, files = runner(config.model, train, test, root_seed, workers, run_dir, clock)

        metrics: MetricsReport = evaluate(predictions, scores, test.labels, POSITIVE, config.scoring)
    except AquakernError as exc:
        _write_failure(config, root_seed, run_dir, exc, ingestion, clock)
        raise

    diagnostics: RunDiagnostics = extras.get("diagnostics", RunDiagnostics())
    diagnostics = diagnostics.model_copy(update={"undefined_metrics": list(metrics.undefined)})

    report = RunReport(
        name=config.name,
        family=config.model.family,
        seed=root_seed,
        config=echo_config(config, root_seed),
        ingestion=ingestion.to_dict(),
        split=SplitSummary(
            train_size=len(train),
            test_size=len(test),
            train_counts=train.class_counts(),
            test_counts=test.class_counts(),
        ),
        metrics=metrics,
        history=extras.get("history"),
        gram=extras.get("gram"),
        diagnostics=diagnostics,
        timing={name: round(seconds, 6) for name, seconds in clock.timings.items()},
        files=sorted(files + ["report.json"]),
    )
    path = write_report(report, run_dir)
    if diagnostics.dead_neuron:
        logger.warning("Run %r: dead-neuron diagnostic fired", config.name)
    logger.info(
        "Run %r done: accuracy %.4f, f1 %.4f -> %s", config.name, metrics.accuracy, metrics.f1, path
    )
    return report
