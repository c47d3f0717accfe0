"""Tests for the command-line runner."""

import json
import logging

import numpy as np
import pandas as pd
import pytest

from src import __version__
from src.app import main
from src.data.dataset import Dataset
from src.data.loader import dataset_to_csv


@pytest.fixture(autouse=True)
def restore_logging():
    """Drop the stderr handler main() installs; it points at the captured stream."""
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if type(handler) is logging.StreamHandler:
            root.removeHandler(handler)


def write_json(path, document):
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def qsvc_run(name="cli", dataset=None, **overrides):
    document = {
        "name": name,
        "dataset": dataset or {"kind": "synthetic", "n": 32, "imbalance": 3 / 32},
        "pipeline": {"oversample": True, "paper_order": True},
        "model": {"family": "qsvc", "kernel": {"kind": "rbf"}},
        "seed": 5,
    }
    document.update(overrides)
    return document


def stderr_error(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


class TestCli:
    """Test suite for verbs and exit codes."""

    def test_version(self, capsys):
        assert main(["version"]) == 0
        assert __version__ in capsys.readouterr().out

    def test_no_verb(self):
        assert main([]) == 2

    def test_run(self, tmp_path, capsys):
        config = write_json(tmp_path / "run.json", qsvc_run())
        assert main(["run", "--config", str(config), "--out", str(tmp_path / "out"), "--quiet"]) == 0
        out = capsys.readouterr().out
        assert "auroc" in out
        assert (tmp_path / "out" / "cli" / "report.json").is_file()

    def test_missing_config_file(self, tmp_path, capsys):
        missing = tmp_path / "nope.json"
        assert main(["run", "--config", str(missing)]) == 2
        error = stderr_error(capsys)
        assert error["error"] == "ConfigError"
        assert error["exit_code"] == 2
        assert str(missing) in error["message"]

    def test_invalid_csv_path(self, tmp_path, capsys):
        missing = tmp_path / "water.csv"
        config = write_json(tmp_path / "run.json", qsvc_run(dataset={"kind": "csv", "path": str(missing)}))
        assert main(["run", "--config", str(config)]) == 2
        error = stderr_error(capsys)
        assert any(str(missing) in problem for problem in error["problems"])

    def test_data_error_exit_code(self, tmp_path, capsys):
        single_class = Dataset.from_ecoli(["a", "b"], np.arange(12.0).reshape(6, 2), [10.0] * 6)
        csv_path = dataset_to_csv(single_class, tmp_path / "clean.csv")
        config = write_json(tmp_path / "run.json", qsvc_run(dataset={"kind": "csv", "path": str(csv_path)}))
        assert main(["run", "--config", str(config), "--out", str(tmp_path), "--quiet"]) == 3
        assert stderr_error(capsys)["error"] == "DegenerateClassError"
        report = json.loads((tmp_path / "cli" / "report.json").read_text())
        assert report["status"] == "failed"
        assert report["error"]["exit_code"] == 3

    def test_unwritable_output_is_structured(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory", encoding="utf-8")
        config = write_json(tmp_path / "sweep.json", [qsvc_run("a")])
        assert main(["sweep", "--config", str(config), "--out", str(blocker), "--quiet"]) == 2
        error = stderr_error(capsys)
        assert error["error"] == "OutputPathError"
        assert error["exit_code"] == 2
        assert str(blocker) in error["message"]

    def test_numerical_error_exit_code(self, tmp_path, capsys):
        single_class = Dataset.from_ecoli(["a", "b"], np.arange(12.0).reshape(6, 2), [10.0] * 6)
        csv_path = dataset_to_csv(single_class, tmp_path / "clean.csv")
        document = qsvc_run(
            dataset={"kind": "csv", "path": str(csv_path)},
            pipeline={"oversample": False},
            split={"stratify": False},
        )
        config = write_json(tmp_path / "run.json", document)
        assert main(["run", "--config", str(config), "--out", str(tmp_path), "--quiet"]) == 4
        assert stderr_error(capsys)["error"] == "DegenerateProblemError"

    def test_empty_sweep_is_usage_error(self, tmp_path, capsys):
        config = write_json(tmp_path / "sweep.json", [])
        assert main(["sweep", "--config", str(config)]) == 2
        assert stderr_error(capsys)["error"] == "ConfigError"

    def test_sweep_writes_table(self, tmp_path, capsys):
        rows = [
            qsvc_run("linear", model={"family": "qsvc", "kernel": {"kind": "linear"}}),
            qsvc_run("rbf"),
        ]
        config = write_json(tmp_path / "sweep.json", rows)
        out_dir = tmp_path / "out"
        assert main(["sweep", "--config", str(config), "--out", str(out_dir), "--quiet"]) == 0
        assert "linear" in capsys.readouterr().out
        table = pd.read_csv(out_dir / "sweep.csv")
        assert list(table["name"]) == ["linear", "rbf"]
        assert (out_dir / "sweep.txt").is_file()

    def test_generate_data_then_run(self, tmp_path, capsys):
        out_dir = tmp_path / "data"
        args = ["generate-data", "--n", "20", "--imbalance", "0.25", "--seed", "1", "--out", str(out_dir)]
        assert main(args) == 0
        csv_path = out_dir / "synthetic.csv"
        frame = pd.read_csv(csv_path)
        assert len(frame) == 20
        assert (frame["label"] == "acceptable").sum() == 5

        config = write_json(tmp_path / "run.json", qsvc_run(dataset={"kind": "csv", "path": str(csv_path)}))
        assert main(["run", "--config", str(config), "--out", str(tmp_path / "runs"), "--quiet"]) == 0

    def test_generate_data_rejects_bad_imbalance(self, tmp_path, capsys):
        assert main(["generate-data", "--imbalance", "1.5", "--out", str(tmp_path)]) == 2

    def test_inspect_gram(self, tmp_path, capsys):
        config = write_json(tmp_path / "run.json", qsvc_run())
        assert main(["inspect-gram", "--config", str(config), "--quiet"]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["size"] == 46
        assert summary["kernel"]["kind"] == "rbf"
        assert summary["kernel"]["beta"] > 0
        assert summary["min_eigenvalue"] > -1e-7

    def test_inspect_gram_rejects_qnn(self, tmp_path, capsys):
        document = qsvc_run(
            model={
                "family": "qnn",
                "qnn": {
                    "ansatz": {"num_qubits": 6, "layers": 1},
                    "encoding": {"scheme": "angle", "num_qubits": 6},
                },
            }
        )
        config = write_json(tmp_path / "run.json", document)
        assert main(["inspect-gram", "--config", str(config)]) == 2

    @pytest.mark.parametrize("verb", ["run", "sweep", "inspect-gram"])
    def test_config_flag_required(self, verb):
        with pytest.raises(SystemExit) as exc_info:
            main([verb])
        assert exc_info.value.code == 2
