"""Command-line entry point.

Verbs:
    run            Run one experiment document
    sweep          Run a JSON array of experiments and write a comparison table
    generate-data  Write a synthetic water-quality CSV
    inspect-gram   Print Gram-matrix diagnostics for a qsvc experiment
    version        Print the package version
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from . import __version__
from .config.env import get_settings
from .config.logging import configure_logging
from .data.loader import dataset_to_csv
from .data.synthetic import generate_synthetic
from .errors import AquakernError, ConfigError, OutputPathError
from .experiments.config import QsvcModelConfig, load_experiment, load_sweep
from .experiments.runner import load_dataset, prepare_splits, run_directory, run_experiment
from .experiments.seeding import resolve_seed, stage_seed
from .experiments.sweep import sweep
from .kernels.kernel import gram_diagnostics, gram_matrix

logger = logging.getLogger(__name__)

SYNTHETIC_FILE = "synthetic.csv"


class UsageError(ConfigError):
    """Bad command-line usage."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aquakern",
        description="Quantum kernel SVM and quantum neural network experiments on water-quality data",
    )
    verbs = parser.add_subparsers(dest="verb", metavar="verb")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Root seed (overrides the config)")
    common.add_argument("--out", default=None, help="Output directory")
    common.add_argument("--quiet", action="store_true", help="Only log warnings and errors")
    common.add_argument("--workers", type=int, default=None, help="Thread pool size inside a run")

    run = verbs.add_parser("run", parents=[common], help="Run one experiment")
    run.add_argument("--config", required=True, help="Experiment JSON document")

    sweep_parser = verbs.add_parser("sweep", parents=[common], help="Run a list of experiments")
    sweep_parser.add_argument("--config", required=True, help="JSON array of experiments")
    sweep_parser.add_argument("--parallel", type=int, default=1, help="Rows run concurrently")

    generate = verbs.add_parser("generate-data", parents=[common], help="Write a synthetic CSV")
    generate.add_argument("--n", type=int, default=32, help="Number of rows")
    generate.add_argument("--imbalance", type=float, default=3 / 32, help="Fraction of acceptable rows")
    generate.add_argument("--pattern", choices=["shifted", "banded"], default="shifted")
    generate.add_argument("--separation", type=float, default=1.0)

    inspect = verbs.add_parser("inspect-gram", parents=[common], help="Gram diagnostics of a qsvc run")
    inspect.add_argument("--config", required=True, help="Experiment JSON document (qsvc family)")

    verbs.add_parser("version", help="Print the version")
    return parser


def cmd_run(args: argparse.Namespace) -> None:
    config = load_experiment(args.config)
    report = run_experiment(config, seed=args.seed, output_dir=args.out, workers=args.workers)
    print(json.dumps(report.metrics.model_dump(mode="json"), indent=2))
    print(f"Report: {run_directory(config, args.out) / 'report.json'}")


def cmd_sweep(args: argparse.Namespace) -> None:
    configs = load_sweep(args.config)
    result = sweep(
        configs, seed=args.seed, output_dir=args.out, workers=args.workers, parallel_runs=args.parallel
    )
    print(result.table())
    print(f"Table: {result.paths['csv']}")
    if result.failures:
        print(f"{result.failures} of {len(result.rows)} runs failed")


def cmd_generate_data(args: argparse.Namespace) -> None:
    if args.n < 4:
        raise UsageError(f"--n must be at least 4, got {args.n}")
    if not 0.0 < args.imbalance < 1.0:
        raise UsageError(f"--imbalance must lie strictly between 0 and 1, got {args.imbalance}")
    settings = get_settings()
    seed = stage_seed(resolve_seed(args.seed), "synthetic")
    dataset = generate_synthetic(
        args.n,
        args.imbalance,
        seed,
        pattern=args.pattern,
        separation=args.separation,
        threshold=settings.ecoli_threshold,
    )
    directory = Path(args.out) if args.out else settings.get_output_dir()
    path = dataset_to_csv(dataset, directory / SYNTHETIC_FILE)
    print(f"Wrote {len(dataset)} rows {dataset.class_counts()} to {path}")


def cmd_inspect_gram(args: argparse.Namespace) -> None:
    config = load_experiment(args.config)
    if not isinstance(config.model, QsvcModelConfig):
        raise UsageError(f"inspect-gram needs a qsvc experiment, got family {config.model.family!r}")
    root_seed = resolve_seed(args.seed, config.seed)
    dataset, _ = load_dataset(config, root_seed)
    train, _ = prepare_splits(config, dataset, root_seed)
    kernel = config.model.kernel
    if kernel.feature_map is not None:
        kernel.feature_map.check(train.num_features)
    gram = gram_matrix(
        train.features,
        kernel,
        workers=args.workers or get_settings().workers,
        seed=stage_seed(root_seed, "kernel"),
    )
    summary = {"kernel": gram.spec.model_dump(mode="json"), **gram_diagnostics(gram.entries).to_dict()}
    print(json.dumps(summary, indent=2))


def cmd_version(args: argparse.Namespace) -> None:
    print(f"aquakern {__version__}")


COMMANDS: Dict[str, Callable[[argparse.Namespace], None]] = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "generate-data": cmd_generate_data,
    "inspect-gram": cmd_inspect_gram,
    "version": cmd_version,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run the verb and return the process exit code.

    Errors are printed to stderr as one JSON object and mapped to the
    error family's exit code; an OSError becomes an OutputPathError.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verb is None:
        parser.print_help(sys.stderr)
        return UsageError.exit_code
    configure_logging(quiet=getattr(args, "quiet", False))
    try:
        COMMANDS[args.verb](args)
    except AquakernError as exc:
        logger.debug("%s failed", args.verb, exc_info=True)
        error: AquakernError = exc
    except OSError as exc:
        logger.debug("%s failed", args.verb, exc_info=True)
        error = OutputPathError.from_os_error(exc)
    else:
        return 0
    print(json.dumps(error.to_dict()), file=sys.stderr)
    return error.exit_code
