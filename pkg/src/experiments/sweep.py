"""Run a list of experiments and tabulate them."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from ..config.env import get_settings
from ..errors import AquakernError, ConfigError
from .config import ExperimentConfig
from .report import RunReport, format_table, sweep_row, write_sweep_table
from .runner import run_experiment

logger = logging.getLogger(__name__)


@dataclass
class SweepResult:
    """Rows in input order; ``reports`` holds None for failed rows."""

    rows: List[Dict[str, Any]]
    reports: List[Optional[RunReport]]
    paths: Dict[str, Path] = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return sum(1 for row in self.rows if row["status"] != "ok")

    def table(self) -> str:
        return format_table(pd.DataFrame(self.rows))


def sweep(
    configs: List[ExperimentConfig],
    seed: Optional[int] = None,
    output_dir: Optional[Union[str, Path]] = None,
    workers: Optional[int] = None,
    parallel_runs: int = 1,
) -> SweepResult:
    """Run every experiment; a failing row is recorded and the sweep continues.

    Args:
        configs: Experiments, at least one
        seed: Seed override applied to every row
        output_dir: Parent directory for the sweep table and, overriding each
            experiment's own output_dir, the run folders
        workers: Thread pool size inside each run
        parallel_runs: Rows executed concurrently

    Returns:
        Sweep result with the table written to ``sweep.csv`` and ``sweep.txt``

    Raises:
        ConfigError: If ``configs`` is empty
    """
    if not configs:
        raise ConfigError("A sweep needs at least one experiment")
    directory = Path(output_dir) if output_dir else get_settings().get_output_dir()

    def run_row(config: ExperimentConfig):
        try:
            report = run_experiment(config, seed=seed, output_dir=output_dir, workers=workers)
        except AquakernError as exc:
            logger.error("Sweep row %r failed: %s", config.name, exc.message)
            return None, f"{type(exc).__name__}: {exc.message}"
        except Exception as exc:
            logger.exception("Sweep row %r failed unexpectedly", config.name)
            return None, f"{type(exc).__name__}: {exc}"
        logger.info("Sweep row %r finished", config.name)
        return report, None

    if parallel_runs > 1:
        with ThreadPoolExecutor(max_workers=parallel_runs) as pool:
            outcomes = list(pool.map(run_row, configs))
    else:
        outcomes = [run_row(config) for config in configs]

    rows = [sweep_row(config.name, report, error) for config, (report, error) in zip(configs, outcomes)]
    result = SweepResult(rows=rows, reports=[report for report, _ in outcomes])
    result.paths = write_sweep_table(rows, directory)
    logger.info("Sweep of %d runs done, %d failed", len(rows), result.failures)
    return result
