"""Unit tests for the variational QNN."""

import logging

import numpy as np
import pandas as pd
import pytest

from src.encoding.feature_map import FeatureMapSpec
from src.errors import InvalidInputError, InvalidParametersError, InvalidSpecError
from src.qnn.ansatz import AnsatzSpec, layer_gates
from src.qnn.circuit import (
    QnnConfig,
    parameter_count,
    parameter_shift_gradient,
    qnn_forward,
    raw_expectation,
)
from src.qnn.diagnostics import dead_neuron_check
from src.qnn.initializers import initial_parameters, uniform_small, xavier_bound, xavier_init
from src.qnn.optimizers import OptimizerState, optimizer_step
from src.qnn.training import (
    history_to_csv,
    mse_loss,
    output_gradient,
    predict_qnn,
    qnn_outputs,
    train_qnn,
)


def make_config(num_qubits=1, layers=1, pattern=("RY",), entangler=False, **kwargs) -> QnnConfig:
    return QnnConfig.parse(
        ansatz={
            "num_qubits": num_qubits,
            "layers": layers,
            "rotation_pattern": list(pattern),
            "entangler": entangler,
        },
        encoding={"scheme": "angle", "num_qubits": num_qubits},
        **kwargs,
    )


def central_difference(fn, params, index, h=1e-5):
    plus, minus = params.copy(), params.copy()
    plus[index] += h
    minus[index] -= h
    return (fn(plus) - fn(minus)) / (2 * h)


class TestConfig:
    """Test suite for ansatz and QNN configuration."""

    def test_parameter_count(self):
        spec = AnsatzSpec.parse(num_qubits=3, layers=2)
        assert spec.parameter_count == 2 * 3 * 2

    def test_layer_gates_ring(self):
        spec = AnsatzSpec.parse(num_qubits=3, layers=1, rotation_pattern=["RY"])
        gates = layer_gates(spec, np.zeros(3))
        assert [g.kind.value for g in gates] == ["RY", "RY", "RY", "CNOT", "CNOT", "CNOT"]

    def test_head_adds_parameters(self):
        config = make_config(num_qubits=2, classical_head={"hidden_units": 3})
        assert parameter_count(config) == 2 + (3 * 2 + 2 * 3 + 1)

    def test_epochs_zero_rejected(self):
        with pytest.raises(InvalidSpecError):
            make_config(epochs=0)

    def test_learning_rate_must_be_positive(self):
        with pytest.raises(InvalidSpecError):
            make_config(learning_rate=0.0)

    def test_qubit_mismatch_rejected(self):
        with pytest.raises(InvalidSpecError) as info:
            QnnConfig.parse(
                ansatz={"num_qubits": 2},
                encoding={"num_qubits": 3},
            )
        assert any("qubits" in problem for problem in info.value.problems)

    def test_initial_parameters_length_checked(self):
        with pytest.raises(InvalidSpecError):
            make_config(initial_parameters=[0.1, 0.2])


class TestForward:
    """Test suite for the forward pass."""

    def test_zero_layers_ground_state(self):
        config = make_config(layers=0)
        assert qnn_forward([0.0], [], config) == pytest.approx(1.0)

    def test_single_ry_expectation(self):
        config = make_config()
        assert raw_expectation([0.0], [1.0], config) == pytest.approx(0.5403, abs=1e-4)
        assert qnn_forward([0.0], [1.0], config) == pytest.approx((np.cos(1.0) + 1) / 2)

    def test_wrong_parameter_length(self):
        with pytest.raises(InvalidParametersError):
            qnn_forward([0.0], [1.0, 2.0], make_config())

    @pytest.mark.parametrize("theta", [0.0, 0.7, 2.5])
    def test_full_depolarizing_erases_expectation(self, theta):
        config = make_config(noise=[{"kind": "depolarizing", "probability": 1.0}])
        assert raw_expectation([0.3], [theta], config) == pytest.approx(0.0, abs=1e-12)
        assert qnn_forward([0.3], [theta], config) == pytest.approx(0.5, abs=1e-12)

    def test_noisy_expectation_bounded(self, rng):
        config = make_config(
            num_qubits=2,
            layers=2,
            pattern=("RY", "RZ"),
            entangler=True,
            noise=[
                {"kind": "depolarizing", "probability": 0.05},
                {"kind": "amplitude_damping", "probability": 0.02},
            ],
        )
        for _ in range(10):
            value = raw_expectation(rng.uniform(0, np.pi, 2), rng.uniform(-np.pi, np.pi, 8), config)
            assert -1.0 <= value <= 1.0

    def test_zero_noise_matches_pure(self, rng):
        pure = make_config(num_qubits=2, layers=1, pattern=("RY", "RZ"), entangler=True)
        noisy = make_config(
            num_qubits=2,
            layers=1,
            pattern=("RY", "RZ"),
            entangler=True,
            noise=[{"kind": "depolarizing", "probability": 0.0}],
        )
        x, theta = rng.uniform(0, 1, 2), rng.uniform(-1, 1, 4)
        assert raw_expectation(x, theta, noisy) == pytest.approx(raw_expectation(x, theta, pure), abs=1e-12)

    def test_head_output_in_unit_interval(self, rng):
        config = make_config(num_qubits=2, classical_head={"hidden_units": 4})
        params = initial_parameters(config)
        assert 0.0 <= qnn_forward([0.2, 1.1], params, config) <= 1.0


class TestGradients:
    """Test suite for parameter-shift gradients."""

    def test_stationary_point(self):
        assert parameter_shift_gradient([0.0], [0.0], make_config(), 0) == pytest.approx(0.0, abs=1e-12)

    def test_quarter_turn(self):
        assert parameter_shift_gradient([0.0], [np.pi / 2], make_config(), 0) == pytest.approx(-1.0)

    def test_index_out_of_range(self):
        with pytest.raises(InvalidInputError):
            parameter_shift_gradient([0.0], [0.0], make_config(), 1)

    def test_matches_finite_differences(self, rng):
        config = make_config(num_qubits=3, layers=2, pattern=("RY", "RZ"), entangler=True)
        for _ in range(50):
            x = rng.uniform(0, np.pi / 2, 3)
            theta = rng.uniform(-np.pi, np.pi, config.ansatz.parameter_count)
            index = int(rng.integers(config.ansatz.parameter_count))
            expected = central_difference(lambda p: raw_expectation(x, p, config), theta, index)
            assert parameter_shift_gradient(x, theta, config, index) == pytest.approx(expected, abs=1e-5)

    def test_output_gradient_with_head(self, rng):
        config = make_config(num_qubits=2, layers=1, pattern=("RY", "RZ"), classical_head={"hidden_units": 3})
        x = np.array([0.4, 1.2])
        params = rng.normal(0, 0.8, parameter_count(config))
        output, grad = output_gradient(x, params, config)
        assert output == pytest.approx(qnn_forward(x, params, config))
        for index in range(len(params)):
            expected = central_difference(lambda p: qnn_forward(x, p, config), params, index)
            assert grad[index] == pytest.approx(expected, abs=1e-6)


class TestInitializers:
    """Test suite for parameter initialization."""

    def test_bounds(self):
        assert xavier_bound(3, 3) == pytest.approx(1.0)
        assert xavier_bound(6, 6) == pytest.approx(np.sqrt(0.5))

    def test_zero_fans_rejected(self):
        with pytest.raises(InvalidInputError):
            xavier_init(0, 0, 10, seed=0)

    def test_xavier_statistics(self):
        samples = xavier_init(3, 3, 100_000, seed=7)
        assert np.max(np.abs(samples)) <= 1.0
        assert samples.var() == pytest.approx(1 / 3, rel=0.02)

    def test_deterministic(self):
        np.testing.assert_array_equal(xavier_init(2, 5, 20, seed=3), xavier_init(2, 5, 20, seed=3))

    def test_uniform_small_range(self):
        assert np.max(np.abs(uniform_small(1000, seed=1))) <= 0.1

    def test_head_biases_start_at_zero(self):
        config = make_config(num_qubits=2, classical_head={"hidden_units": 3})
        params = initial_parameters(config)
        assert len(params) == parameter_count(config)
        head = params[config.ansatz.parameter_count :]
        np.testing.assert_array_equal(head[6:9], np.zeros(3))
        assert head[-1] == 0.0

    def test_override_wins(self):
        config = make_config(initial_parameters=[0.25])
        np.testing.assert_array_equal(initial_parameters(config), [0.25])


class TestOptimizers:
    """Test suite for optimizer_step."""

    def test_gd(self):
        params, _ = optimizer_step(np.array([1.0]), np.array([2.0]), OptimizerState(), "gd", 0.1)
        assert params[0] == pytest.approx(0.8)

    def test_adam_first_step(self):
        params, state = optimizer_step(np.array([1.0]), np.array([2.0]), OptimizerState(), "adam", 0.001)
        assert params[0] == pytest.approx(0.999, abs=1e-6)
        assert state.step == 1

    def test_rmsprop_first_step(self):
        params, _ = optimizer_step(np.array([1.0]), np.array([2.0]), OptimizerState(), "rmsprop", 0.01)
        v = 0.1 * 2.0**2
        assert params[0] == pytest.approx(1.0 - 0.01 * 2.0 / np.sqrt(v + 1e-8))

    @pytest.mark.parametrize("kind", ["gd", "rmsprop", "adam"])
    def test_zero_gradient_is_fixed_point(self, kind):
        start = np.array([0.3, -1.2])
        params, _ = optimizer_step(start, np.zeros(2), OptimizerState(), kind, 0.1)
        np.testing.assert_array_equal(params, start)

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            optimizer_step(np.zeros(2), np.zeros(3), OptimizerState(), "gd", 0.1)

    def test_simplex_needs_loss(self):
        with pytest.raises(InvalidInputError):
            optimizer_step(np.zeros(2), None, OptimizerState(), "simplex", 0.1)

    def test_simplex_minimizes_quadratic(self):
        center = np.array([1.0, -2.0])

        def loss(p):
            return float(np.sum((p - center) ** 2) + 0.5 * (p[0] - center[0]) * (p[1] - center[1]))

        params, state = np.zeros(2), OptimizerState()
        best = loss(params)
        for _ in range(200):
            params, state = optimizer_step(params, None, state, "simplex", 0.5, loss_fn=loss)
            assert loss(params) <= best + 1e-15
            best = loss(params)
        np.testing.assert_allclose(params, center, atol=1e-3)


class TestDiagnostics:
    """Test suite for the dead-neuron check."""

    def test_constant_outputs_dead(self):
        assert dead_neuron_check([0.5, 0.5, 0.5]).dead

    def test_varied_outputs_healthy(self):
        verdict = dead_neuron_check([0.4, 0.6])
        assert not verdict.dead
        assert verdict.verdict == "healthy"

    def test_flat_history_plateau(self):
        verdict = dead_neuron_check([0.4, 0.6], loss_history=[0.4996] * 50)
        assert verdict.plateau

    def test_batch_too_small(self):
        with pytest.raises(InvalidInputError):
            dead_neuron_check([0.5])


class TestTraining:
    """Test suite for train_qnn."""

    @pytest.fixture
    def toy(self):
        return [[0.0], [np.pi / 2]], [0, 1]

    def test_mse_examples(self):
        assert mse_loss([0, 1], [0, 1]) == 0.0
        assert mse_loss([0.5, 0.5], [0, 1]) == pytest.approx(0.25)

    def test_mse_empty(self):
        with pytest.raises(InvalidInputError):
            mse_loss([], [])

    def test_toy_task_converges(self, toy):
        config = make_config(optimizer="adam", learning_rate=0.01, epochs=200, initial_parameters=[1.5])
        model = train_qnn(*toy, config)
        assert len(model.history) == 200
        assert mse_loss(qnn_outputs(model, toy[0]), toy[1]) <= 0.05
        np.testing.assert_array_equal(predict_qnn(model, toy[0]), [0, 1])

    def test_single_epoch_history(self, toy):
        model = train_qnn(*toy, make_config(epochs=1))
        assert len(model.history) == 1

    def test_empty_dataset(self):
        with pytest.raises(InvalidInputError):
            train_qnn([], [], make_config())

    def test_single_class_warns(self, toy, caplog):
        with caplog.at_level(logging.WARNING):
            train_qnn(toy[0], [1, 1], make_config(epochs=2))
        assert "single-class" in caplog.text

    def test_full_noise_fires_dead_neuron(self, toy, caplog):
        config = make_config(epochs=3, noise=[{"kind": "depolarizing", "probability": 1.0}])
        with caplog.at_level(logging.WARNING):
            model = train_qnn(*toy, config)
        assert model.diagnostics.dead
        assert "Dead neuron" in caplog.text

    def test_seeded_training_reproducible(self):
        xs = [[0.1, 0.9], [1.2, 0.3], [0.5, 0.5], [1.4, 1.1]]
        ys = [0, 1, 0, 1]
        config = make_config(num_qubits=2, pattern=("RY", "RZ"), entangler=True, epochs=5, seed=11)
        first, second = train_qnn(xs, ys, config), train_qnn(xs, ys, config, workers=3)
        np.testing.assert_array_equal(first.parameters, second.parameters)
        assert first.history.loss == second.history.loss

    @pytest.mark.parametrize("optimizer", ["gd", "rmsprop", "simplex"])
    def test_other_optimizers_reduce_loss(self, toy, optimizer):
        config = make_config(optimizer=optimizer, learning_rate=0.1, epochs=30, initial_parameters=[1.5])
        model = train_qnn(*toy, config)
        assert model.history.loss[-1] < model.history.loss[0]

    def test_head_training_runs(self, toy):
        config = make_config(classical_head={"hidden_units": 2}, epochs=5, seed=4)
        model = train_qnn(*toy, config)
        assert len(model.parameters) == parameter_count(config)

    def test_history_csv(self, toy, tmp_path):
        model = train_qnn(*toy, make_config(epochs=4))
        path = history_to_csv(model.history, tmp_path / "history.csv")
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["epoch", "loss", "accuracy"]
        assert frame["epoch"].tolist() == [1, 2, 3, 4]
