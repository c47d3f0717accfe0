"""Parameter update rules: gradient descent, RMSProp, Adam and a derivative-free simplex."""

from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np

from ..errors import InvalidInputError

RMSPROP_DECAY = 0.9
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
EPSILON = 1e-8

# Simplex coefficients
REFLECT = 1.0
EXPAND = 2.0
CONTRACT = 0.5
SHRINK = 0.5


@dataclass(frozen=True)
class OptimizerState:
    """Per-run optimizer memory.

    Moments are used by rmsprop (second only) and adam; the simplex slot keeps
    its vertices and their losses, best first.
    """

    step: int = 0
    first_moment: Optional[np.ndarray] = None
    second_moment: Optional[np.ndarray] = None
    vertices: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None


def _gd(params, grads, state, lr):
    return params - lr * grads, replace(state, step=state.step + 1)


def _rmsprop(params, grads, state, lr):
    v = state.second_moment if state.second_moment is not None else np.zeros_like(params)
    v = RMSPROP_DECAY * v + (1.0 - RMSPROP_DECAY) * grads**2
    new = params - lr * grads / np.sqrt(v + EPSILON)
    return new, replace(state, step=state.step + 1, second_moment=v)


def _adam(params, grads, state, lr):
    t = state.step + 1
    m = state.first_moment if state.first_moment is not None else np.zeros_like(params)
    v = state.second_moment if state.second_moment is not None else np.zeros_like(params)
    m = ADAM_BETA1 * m + (1.0 - ADAM_BETA1) * grads
    v = ADAM_BETA2 * v + (1.0 - ADAM_BETA2) * grads**2
    m_hat = m / (1.0 - ADAM_BETA1**t)
    v_hat = v / (1.0 - ADAM_BETA2**t)
    new = params - lr * m_hat / (np.sqrt(v_hat) + EPSILON)
    return new, replace(state, step=t, first_moment=m, second_moment=v)


def _sorted(vertices: np.ndarray, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    order = np.argsort(values, kind="stable")
    return vertices[order], values[order]


def _simplex(params, state, lr, loss_fn):
    """One Nelder-Mead iteration; the returned parameters are the best vertex."""
    if state.vertices is None:
        vertices = np.vstack([params, params + lr * np.eye(len(params))])
        values = np.array([loss_fn(v) for v in vertices])
    else:
        vertices, values = state.vertices.copy(), state.values.copy()
    vertices, values = _sorted(vertices, values)

    centroid = vertices[:-1].mean(axis=0)
    worst, worst_value = vertices[-1], values[-1]
    reflected = centroid + REFLECT * (centroid - worst)
    reflected_value = loss_fn(reflected)

    if reflected_value < values[0]:
        expanded = centroid + EXPAND * (reflected - centroid)
        expanded_value = loss_fn(expanded)
        if expanded_value < reflected_value:
            vertices[-1], values[-1] = expanded, expanded_value
        else:
            vertices[-1], values[-1] = reflected, reflected_value
    elif reflected_value < values[-2]:
        vertices[-1], values[-1] = reflected, reflected_value
    else:
        if reflected_value < worst_value:
            contracted = centroid + CONTRACT * (reflected - centroid)
        else:
            contracted = centroid + CONTRACT * (worst - centroid)
        contracted_value = loss_fn(contracted)
        if contracted_value < min(reflected_value, worst_value):
            vertices[-1], values[-1] = contracted, contracted_value
        else:
            best = vertices[0]
            vertices[1:] = best + SHRINK * (vertices[1:] - best)
            values[1:] = [loss_fn(v) for v in vertices[1:]]

    vertices, values = _sorted(vertices, values)
    new_state = replace(state, step=state.step + 1, vertices=vertices, values=values)
    return vertices[0].copy(), new_state


def optimizer_step(
    params: np.ndarray,
    grads: Optional[np.ndarray],
    state: OptimizerState,
    kind: str,
    lr: float,
    loss_fn: Optional[Callable[[np.ndarray], float]] = None,
) -> Tuple[np.ndarray, OptimizerState]:
    """Apply one update.

    Args:
        params: Current parameters
        grads: Loss gradient (ignored by simplex)
        state: Optimizer memory from the previous step
        kind: adam, gd, rmsprop or simplex
        lr: Learning rate; for simplex, the initial simplex edge
        loss_fn: Loss of a parameter vector, required by simplex

    Returns:
        (new parameters, new state)

    Raises:
        InvalidInputError: On length mismatch, unknown kind, or missing loss_fn
    """
    params = np.asarray(params, dtype=float)
    if kind == "simplex":
        if loss_fn is None:
            raise InvalidInputError("simplex optimizer needs a loss function")
        return _simplex(params, state, lr, loss_fn)
    grads = np.asarray(grads, dtype=float)
    if grads.shape != params.shape:
        raise InvalidInputError(f"Gradient shape {grads.shape} does not match parameters {params.shape}")
    rules = {"gd": _gd, "rmsprop": _rmsprop, "adam": _adam}
    if kind not in rules:
        raise InvalidInputError(f"Unknown optimizer: {kind}")
    return rules[kind](params, grads, state, lr)
