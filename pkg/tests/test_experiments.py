"""Tests for experiment documents, seeding, runs, reports and sweeps."""

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.config.env import reload_settings
from src.data.dataset import Dataset, WaterLabel
from src.data.loader import dataset_to_csv
from src.errors import ConfigError, DegenerateClassError
from src.experiments import sweep as sweep_module
from src.experiments.config import ExperimentConfig, load_experiment, load_sweep, parse_sweep
from src.experiments.report import GRAM_FILE, HISTORY_FILE, REPORT_FILE, RunReport, read_report
from src.experiments.runner import POSITIVE, load_dataset, prepare_splits, run_directory, run_experiment
from src.experiments.seeding import STAGES, resolve_seed, stage_seed
from src.experiments.sweep import sweep

SCHEMA_PATH = Path(__file__).parent.parent / "schemas" / "run_report.schema.json"
CONFIG_DIR = Path(__file__).parent.parent / "configs"


def synthetic(**overrides) -> dict:
    source = {"kind": "synthetic", "n": 32, "imbalance": 3 / 32, "pattern": "shifted"}
    source.update(overrides)
    return source


def qsvc_document(name="qsvc", kernel=None, **overrides) -> dict:
    document = {
        "name": name,
        "dataset": synthetic(),
        "pipeline": {"oversample": True, "paper_order": True},
        "model": {"family": "qsvc", "kernel": kernel or {"kind": "rbf"}},
        "seed": 7,
    }
    document.update(overrides)
    return document


def single_class_csv(directory: Path) -> Path:
    clean = Dataset.from_ecoli(["a", "b"], np.arange(12.0).reshape(6, 2), [10.0] * 6)
    return dataset_to_csv(clean, directory / "clean.csv")


def dead_qnn_document(name="qnn-dead") -> dict:
    return {
        "name": name,
        "dataset": synthetic(n=8, imbalance=0.25),
        "pipeline": {"oversample": True, "paper_order": True},
        "split": {"test_fraction": 0.25},
        "model": {
            "family": "qnn",
            "qnn": {
                "ansatz": {"num_qubits": 6, "layers": 1, "rotation_pattern": ["RY"], "entangler": False},
                "encoding": {"scheme": "angle", "num_qubits": 6},
                "optimizer": "adam",
                "learning_rate": 0.1,
                "epochs": 2,
                "noise": [{"kind": "depolarizing", "probability": 1.0}],
            },
        },
        "seed": 3,
    }


class TestExperimentConfig:
    """Test suite for experiment document validation."""

    def test_defaults(self):
        config = ExperimentConfig.parse(model={"family": "qsvc", "kernel": {"kind": "linear"}})
        assert config.dataset.kind == "synthetic"
        assert config.split.test_fraction == 0.2
        assert config.pipeline.oversample and not config.pipeline.paper_order
        assert config.scoring == "continuous"

    def test_every_problem_reported(self):
        document = {
            "name": "bad",
            "dataset": {"kind": "synthetic", "n": 2},
            "split": {"test_fraction": 1.5},
            "model": {"family": "qsvc", "kernel": {"kind": "sigmoid"}},
            "seed": -1,
        }
        with pytest.raises(ConfigError) as exc_info:
            ExperimentConfig.parse(document)
        problems = exc_info.value.problems
        assert len(problems) >= 4
        joined = "\n".join(problems)
        for location in ("dataset", "split", "model", "seed"):
            assert location in joined

    def test_missing_csv_named(self, tmp_path):
        missing = tmp_path / "missing.csv"
        document = qsvc_document(dataset={"kind": "csv", "path": str(missing)})
        with pytest.raises(ConfigError) as exc_info:
            ExperimentConfig.parse(document)
        assert any(str(missing) in problem for problem in exc_info.value.problems)

    def test_quantum_kernel_needs_feature_map(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.parse(qsvc_document(kernel={"kind": "quantum"}))

    def test_unknown_field_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.parse(qsvc_document(extra_field=1))

    @pytest.mark.parametrize("name", ["a/b", "..", "x\\y"])
    def test_name_must_be_directory_name(self, name):
        with pytest.raises(ConfigError):
            ExperimentConfig.parse(qsvc_document(name=name))

    def test_single_class_synthetic_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.parse(qsvc_document(dataset=synthetic(n=4, imbalance=0.05)))

    def test_load_experiment(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps(qsvc_document()), encoding="utf-8")
        assert load_experiment(path).name == "qsvc"

    def test_load_experiment_bad_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_experiment(path)

    def test_sweep_empty(self):
        with pytest.raises(ConfigError):
            parse_sweep([])

    def test_sweep_not_a_list(self):
        with pytest.raises(ConfigError):
            parse_sweep(qsvc_document())

    def test_sweep_problems_indexed(self):
        with pytest.raises(ConfigError) as exc_info:
            parse_sweep([qsvc_document("a"), qsvc_document("b", seed=-1), {"name": "c"}])
        problems = exc_info.value.problems
        assert any(p.startswith("[1]") for p in problems)
        assert any(p.startswith("[2]") for p in problems)
        assert not any(p.startswith("[0]") for p in problems)

    def test_sweep_duplicate_names(self):
        with pytest.raises(ConfigError) as exc_info:
            parse_sweep([qsvc_document("same"), qsvc_document("same")])
        assert any("duplicate" in p for p in exc_info.value.problems)

    @pytest.mark.parametrize(
        "filename, rows", [("table1_kernels.json", 4), ("table2_optimizers.json", 5)]
    )
    def test_shipped_sweeps_validate(self, filename, rows):
        assert len(load_sweep(CONFIG_DIR / filename)) == rows

    def test_shipped_run_validates(self):
        assert load_experiment(CONFIG_DIR / "qsvc_rbf.json").model.family == "qsvc"


class TestSeeding:
    """Test suite for seed priority and stage derivation."""

    def test_priority(self, monkeypatch):
        monkeypatch.setenv("AQUAKERN_SEED", "11")
        reload_settings()
        assert resolve_seed(5, 3) == 5
        assert resolve_seed(None, 3) == 3
        assert resolve_seed(None, None) == 11

    def test_default_zero(self):
        assert resolve_seed() == 0

    def test_negative_rejected(self):
        with pytest.raises(ConfigError):
            resolve_seed(-1)

    def test_stage_seeds_distinct_and_stable(self):
        seeds = [stage_seed(42, stage) for stage in STAGES]
        assert len(set(seeds)) == len(seeds)
        assert seeds == [stage_seed(42, stage) for stage in STAGES]
        assert stage_seed(42, "split") != stage_seed(43, "split")

    def test_unknown_stage(self):
        with pytest.raises(ConfigError):
            stage_seed(0, "nope")


class TestRunDirectory:
    """Test suite for output directory priority."""

    def test_priority(self, monkeypatch, tmp_path):
        monkeypatch.setenv("AQUAKERN_OUTPUT_DIR", str(tmp_path / "env"))
        reload_settings()
        plain = ExperimentConfig.parse(qsvc_document("r"))
        own = ExperimentConfig.parse(qsvc_document("r", output_dir=str(tmp_path / "doc")))
        assert run_directory(plain) == tmp_path / "env" / "r"
        assert run_directory(own) == tmp_path / "doc" / "r"
        assert run_directory(own, tmp_path / "cli") == tmp_path / "cli" / "r"


class TestPipeline:
    """Test suite for oversampling, splitting and scaling order."""

    def test_oversample_then_split(self):
        config = ExperimentConfig.parse(qsvc_document())
        dataset, ingestion = load_dataset(config, 7)
        assert ingestion.class_counts == {"acceptable": 3, "not_acceptable": 29}
        train, test = prepare_splits(config, dataset, 7)
        assert len(train) + len(test) == 58
        assert len(test) == 12
        assert test.class_counts() == {"acceptable": 6, "not_acceptable": 6}

    def test_split_then_oversample(self):
        document = qsvc_document(pipeline={"oversample": True, "paper_order": False})
        config = ExperimentConfig.parse(document)
        dataset, _ = load_dataset(config, 7)
        train, test = prepare_splits(config, dataset, 7)
        assert len(test) == 7
        counts = train.class_counts()
        assert counts["acceptable"] == counts["not_acceptable"]

    def test_scaling_fitted_on_train(self):
        config = ExperimentConfig.parse(qsvc_document())
        dataset, _ = load_dataset(config, 7)
        train, test = prepare_splits(config, dataset, 7)
        assert train.features.min() >= 0.0
        assert train.features.max() <= np.pi / 2 + 1e-12
        assert test.scaling is train.scaling


class TestRunExperiment:
    """Test suite for single runs."""

    def test_qsvc_rbf_report(self, tmp_path):
        config = ExperimentConfig.parse(qsvc_document("rbf"))
        report = run_experiment(config, output_dir=tmp_path)
        metrics = report.metrics
        values = (metrics.accuracy, metrics.f1, metrics.precision, metrics.recall, metrics.auroc, metrics.auprc)
        for value in values:
            assert value is not None
            assert 0.0 <= value <= 1.0
        assert report.split.train_size == 46
        assert report.split.test_size == 12
        assert report.gram.size == 46
        assert report.gram.symmetry_residual < 1e-9
        assert report.seed == 7
        assert (tmp_path / "rbf" / REPORT_FILE).is_file()
        assert read_report(tmp_path / "rbf" / REPORT_FILE).model_dump() == report.model_dump()

    def test_gram_written_on_request(self, tmp_path):
        document = qsvc_document("gram")
        document["model"]["save_gram"] = True
        report = run_experiment(ExperimentConfig.parse(document), output_dir=tmp_path)
        assert GRAM_FILE in report.files
        gram = pd.read_csv(tmp_path / "gram" / GRAM_FILE, header=None).to_numpy()
        assert gram.shape == (46, 46)
        np.testing.assert_allclose(np.diag(gram), 1.0)

    def test_dead_neuron_reported(self, tmp_path, caplog):
        config = ExperimentConfig.parse(dead_qnn_document())
        with caplog.at_level("WARNING"):
            report = run_experiment(config, output_dir=tmp_path)
        assert report.family == "qnn"
        assert report.diagnostics.dead_neuron is True
        assert report.diagnostics.output_variance < 1e-12
        assert len(report.history["loss"]) == 2
        assert (tmp_path / "qnn-dead" / HISTORY_FILE).is_file()
        assert "dead-neuron" in caplog.text

    def test_seed_override_echoed(self, tmp_path):
        config = ExperimentConfig.parse(qsvc_document("seeded", kernel={"kind": "linear"}))
        report = run_experiment(config, seed=99, output_dir=tmp_path)
        assert report.seed == 99
        assert report.config["seed"] == 99

    def test_rerun_from_echo_is_identical(self, tmp_path):
        config = ExperimentConfig.parse(qsvc_document("again"))
        first = run_experiment(config, output_dir=tmp_path / "one")
        echoed = ExperimentConfig.model_validate(first.config)
        second = run_experiment(echoed, output_dir=tmp_path / "two")
        assert second.metrics.model_dump() == first.metrics.model_dump()
        stored = json.loads((tmp_path / "two" / "again" / REPORT_FILE).read_text())
        assert stored["metrics"] == first.metrics.model_dump(mode="json")

    def test_threads_do_not_change_metrics(self, tmp_path):
        config = ExperimentConfig.parse(qsvc_document("threads"))
        serial = run_experiment(config, output_dir=tmp_path / "a", workers=1)
        threaded = run_experiment(config, output_dir=tmp_path / "b", workers=4)
        assert serial.metrics.model_dump() == threaded.metrics.model_dump()

    def test_acceptable_is_metrics_positive(self, tmp_path):
        assert POSITIVE == WaterLabel.ACCEPTABLE
        document = qsvc_document("positive", pipeline={"oversample": True, "paper_order": False})
        report = run_experiment(ExperimentConfig.parse(document), output_dir=tmp_path)
        counts = report.split.test_counts
        assert counts == {"acceptable": 1, "not_acceptable": 6}
        confusion = report.metrics.confusion
        assert confusion.tp + confusion.fn == counts["acceptable"]
        assert confusion.tn + confusion.fp == counts["not_acceptable"]

    def test_failed_run_writes_report(self, tmp_path):
        csv_path = single_class_csv(tmp_path)
        document = qsvc_document("broken", dataset={"kind": "csv", "path": str(csv_path)})
        with pytest.raises(DegenerateClassError):
            run_experiment(ExperimentConfig.parse(document), seed=11, output_dir=tmp_path / "runs")
        report = read_report(tmp_path / "runs" / "broken" / REPORT_FILE)
        assert report.status == "failed"
        assert report.error["error"] == "DegenerateClassError"
        assert report.error["exit_code"] == 3
        assert report.config["seed"] == 11
        assert report.ingestion["class_counts"] == {"acceptable": 6, "not_acceptable": 0}
        assert report.split is None
        assert report.metrics is None
        assert "data" in report.timing

    def test_rbf_not_worse_than_linear_on_banded(self, tmp_path):
        banded = synthetic(pattern="banded")
        linear = run_experiment(
            ExperimentConfig.parse(qsvc_document("lin", kernel={"kind": "linear"}, dataset=banded)),
            output_dir=tmp_path,
        )
        rbf = run_experiment(
            ExperimentConfig.parse(qsvc_document("rbf", dataset=banded)),
            output_dir=tmp_path,
        )
        assert rbf.metrics.accuracy >= linear.metrics.accuracy


class TestReportSchema:
    """Test suite for the published report schema."""

    @pytest.fixture
    def schema(self):
        return json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))

    def test_properties_match_model(self, schema):
        assert set(schema["properties"]) == set(RunReport.model_fields)

    def test_required_match_model(self, schema):
        required = {name for name, field in RunReport.model_fields.items() if field.is_required()}
        assert set(schema["required"]) == required

    def test_written_report_keys(self, schema, tmp_path):
        report = run_experiment(ExperimentConfig.parse(qsvc_document("schema")), output_dir=tmp_path)
        stored = json.loads((tmp_path / "schema" / REPORT_FILE).read_text())
        assert set(stored) <= set(schema["properties"])
        assert set(schema["required"]) <= set(stored)
        metric_schema = schema["properties"]["metrics"]
        assert set(stored["metrics"]) <= set(metric_schema["properties"])
        assert set(metric_schema["required"]) <= set(stored["metrics"])
        assert stored["family"] in schema["properties"]["family"]["enum"]
        assert stored["schema_version"] == schema["properties"]["schema_version"]["const"]
        assert stored["status"] == "ok"
        assert set(schema["else"]["required"]) <= {key for key, value in stored.items() if value is not None}
        assert report.gram is not None

    def test_failed_report_keys(self, schema, tmp_path):
        document = qsvc_document("broken", dataset={"kind": "csv", "path": str(single_class_csv(tmp_path))})
        with pytest.raises(DegenerateClassError):
            run_experiment(ExperimentConfig.parse(document), output_dir=tmp_path)
        stored = json.loads((tmp_path / "broken" / REPORT_FILE).read_text())
        assert set(stored) <= set(schema["properties"])
        assert set(schema["required"]) <= set(stored)
        assert stored["status"] == schema["if"]["properties"]["status"]["const"]
        assert set(schema["then"]["required"]) <= set(stored)
        error_schema = schema["properties"]["error"]["anyOf"][0]
        assert set(error_schema["required"]) == set(stored["error"])


class TestSweep:
    """Test suite for sweeps."""

    def kernel_configs(self):
        kernels = {
            "linear": {"kind": "linear"},
            "polynomial": {"kind": "polynomial", "degree": 2, "r": 1.0},
            "rbf": {"kind": "rbf"},
        }
        return parse_sweep([qsvc_document(name, kernel) for name, kernel in kernels.items()])

    def test_three_kernel_table(self, tmp_path):
        result = sweep(self.kernel_configs(), output_dir=tmp_path)
        assert result.failures == 0
        table = pd.read_csv(result.paths["csv"])
        assert list(table["name"]) == ["linear", "polynomial", "rbf"]
        assert list(table["kernel"]) == ["linear", "polynomial", "rbf"]
        for column in ("accuracy", "f1", "precision", "recall", "auroc", "auprc"):
            assert table[column].between(0.0, 1.0).all()
        text = result.paths["text"].read_text()
        assert "polynomial" in text
        for name in ("linear", "polynomial", "rbf"):
            assert (tmp_path / name / REPORT_FILE).is_file()

    def test_parallel_rows_match_serial(self, tmp_path):
        serial = sweep(self.kernel_configs(), output_dir=tmp_path / "serial")
        parallel = sweep(self.kernel_configs(), output_dir=tmp_path / "parallel", parallel_runs=3)
        assert [r["accuracy"] for r in serial.rows] == [r["accuracy"] for r in parallel.rows]
        assert [r["name"] for r in parallel.rows] == ["linear", "polynomial", "rbf"]

    def test_failed_row_recorded(self, tmp_path, caplog):
        bad_map = {"kind": "quantum", "feature_map": {"scheme": "angle", "num_qubits": 3}}
        configs = parse_sweep([qsvc_document("ok"), qsvc_document("mismatch", bad_map)])
        with caplog.at_level("ERROR"):
            result = sweep(configs, output_dir=tmp_path)
        assert result.failures == 1
        assert [row["status"] for row in result.rows] == ["ok", "failed"]
        assert "InvalidSpecError" in result.rows[1]["error"]
        assert result.reports[1] is None
        assert "mismatch" in caplog.text
        table = pd.read_csv(result.paths["csv"])
        assert len(table) == 2

    def test_unexpected_error_recorded(self, tmp_path, monkeypatch, caplog):
        real_run = sweep_module.run_experiment

        def run_or_fail(config, **kwargs):
            if config.name == "disk":
                raise NotADirectoryError(20, "Not a directory", str(tmp_path / "disk"))
            return real_run(config, **kwargs)

        monkeypatch.setattr(sweep_module, "run_experiment", run_or_fail)
        configs = parse_sweep([qsvc_document("disk"), qsvc_document("fine")])
        with caplog.at_level("ERROR"):
            result = sweep(configs, output_dir=tmp_path)
        assert [row["status"] for row in result.rows] == ["failed", "ok"]
        assert result.rows[0]["error"].startswith("NotADirectoryError")
        assert result.reports[1] is not None
        assert "disk" in caplog.text
        assert len(pd.read_csv(result.paths["csv"])) == 2

    def test_empty_sweep(self, tmp_path):
        with pytest.raises(ConfigError):
            sweep([], output_dir=tmp_path)

    def test_qnn_rows(self, tmp_path):
        configs = parse_sweep([dead_qnn_document("dead-a"), dead_qnn_document("dead-b")])
        result = sweep(configs, output_dir=tmp_path)
        assert result.failures == 0
        for row in result.rows:
            assert row["optimizer"] == "adam"
            assert row["noise"] == "depolarizing 1.0"
            assert row["dead_neuron"] is True
            assert row["final_loss"] is not None
