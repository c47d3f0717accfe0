"""Kernel evaluation and Gram matrices."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..encoding.feature_map import as_feature_vector, feature_map_state
from ..errors import InvalidInputError, InvalidSpecError
from ..quantum.state import QuantumState
from .shots import CROSS_STAGE, GRAM_STAGE, inversion_test, pair_rng
from .spec import KernelSpec

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Symmetric Gram matrix with the (resolved) spec and, optionally, the points that built it."""

    entries: np.ndarray
    spec: KernelSpec
    points: Optional[np.ndarray] = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float, copy=True)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidInputError(f"Gram matrix must be square, got shape {entries.shape}")
        if not np.allclose(entries, entries.T, atol=SYMMETRY_TOLERANCE, rtol=0.0):
            raise InvalidInputError("Gram matrix is not symmetric")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        if self.points is not None:
            points = np.array(self.points, dtype=float, copy=True)
            if points.ndim != 2 or points.shape[0] != entries.shape[0]:
                raise InvalidInputError("Gram matrix points do not match its size")
            points.setflags(write=False)
            object.__setattr__(self, "points", points)

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class GramDiagnostics:
    """Numerical health of a Gram matrix."""

    size: int
    min_eigenvalue: float
    symmetry_residual: float
    diagonal_min: float
    diagonal_max: float

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def gram_diagnostics(entries: np.ndarray) -> GramDiagnostics:
    """Smallest eigenvalue, max |K - K^T| and diagonal range."""
    k = np.asarray(entries, dtype=float)
    diagonal = np.diag(k)
    return GramDiagnostics(
        size=int(k.shape[0]),
        min_eigenvalue=float(np.linalg.eigvalsh((k + k.T) / 2.0).min()),
        symmetry_residual=float(np.abs(k - k.T).max()),
        diagonal_min=float(diagonal.min()),
        diagonal_max=float(diagonal.max()),
    )


def _fidelity(a: QuantumState, b: QuantumState) -> float:
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def _classical_value(x: np.ndarray, z: np.ndarray, spec: KernelSpec) -> float:
    if spec.kind == "linear":
        return float(x @ z)
    beta = 1.0 if spec.beta is None else spec.beta
    if spec.kind == "polynomial":
        return float((beta * (x @ z) + spec.r) ** spec.degree)
    if spec.beta is None:
        raise InvalidSpecError("rbf kernel needs a resolved beta; call KernelSpec.resolve first")
    diff = x - z
    return float(np.exp(-beta * (diff @ diff)))


def _check_pair(x: Sequence[float], z: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    x, z = as_feature_vector(x), as_feature_vector(z)
    if x.shape != z.shape:
        raise InvalidInputError(f"Feature length mismatch: {len(x)} vs {len(z)}")
    return x, z


def kernel_value(
    x: Sequence[float],
    z: Sequence[float],
    spec: KernelSpec,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """K(x, z) under ``spec``.

    Args:
        x: First feature vector
        z: Second feature vector, same length
        spec: Kernel spec; rbf needs a concrete beta
        rng: Generator for shot sampling (default: seeded with 0)

    Returns:
        Kernel value

    Raises:
        InvalidInputError: If lengths differ
        InvalidSpecError: If the spec does not fit the features
    """
    x, z = _check_pair(x, z)
    if spec.kind != "quantum":
        return _classical_value(x, z, spec)
    if spec.shots is not None:
        return inversion_test(x, z, spec.feature_map, spec.shots, rng or np.random.default_rng(0))
    return _fidelity(feature_map_state(x, spec.feature_map), feature_map_state(z, spec.feature_map))


def as_feature_matrix(xs: Sequence[Sequence[float]]) -> np.ndarray:
    """Stack feature vectors into an (n, d) array.

    Raises:
        InvalidInputError: If empty, ragged, or not finite
    """
    rows = [as_feature_vector(x) for x in xs]
    if not rows:
        raise InvalidInputError("Need at least one feature vector")
    lengths = {len(row) for row in rows}
    if len(lengths) != 1:
        raise InvalidInputError(f"Ragged feature vectors with lengths {sorted(lengths)}")
    return np.vstack(rows)


def _entry_function(
    left: np.ndarray, right: np.ndarray, spec: KernelSpec, seed: int, stage: int
) -> Callable[[int, int], float]:
    if spec.kind != "quantum":
        return lambda i, j: _classical_value(left[i], right[j], spec)
    if spec.shots is not None:
        return lambda i, j: inversion_test(
            left[i], right[j], spec.feature_map, spec.shots, pair_rng(seed, stage, i, j)
        )
    left_states = [feature_map_state(x, spec.feature_map) for x in left]
    right_states = left_states if right is left else [feature_map_state(z, spec.feature_map) for z in right]
    return lambda i, j: _fidelity(left_states[i], right_states[j])


def _evaluate(pairs: List[Tuple[int, int]], entry: Callable[[int, int], float], workers: int) -> List[float]:
    if workers <= 1 or len(pairs) < 2:
        return [entry(i, j) for i, j in pairs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda pair: entry(*pair), pairs))


def gram_matrix(
    xs: Sequence[Sequence[float]], spec: KernelSpec, workers: int = 1, seed: int = 0
) -> KernelMatrix:
    """Gram matrix of ``xs``; the upper triangle is computed and mirrored.

    An unresolved beta is resolved from ``xs`` and the resolved spec is kept
    on the result.

    Args:
        xs: Feature vectors of equal length
        spec: Kernel spec
        workers: Thread pool size for entry evaluation
        seed: Root seed for shot-based entries

    Returns:
        KernelMatrix

    Raises:
        InvalidInputError: If the input is empty or ragged
    """
    data = as_feature_matrix(xs)
    spec = spec.resolve(data)
    n = data.shape[0]
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    values = _evaluate(pairs, _entry_function(data, data, spec, seed, GRAM_STAGE), workers)
    entries = np.empty((n, n))
    for (i, j), value in zip(pairs, values):
        entries[i, j] = entries[j, i] = value
    logger.debug("Computed %dx%d %s Gram matrix", n, n, spec.kind)
    return KernelMatrix(entries, spec, points=data)


def cross_gram(
    xs_train: Sequence[Sequence[float]],
    xs_test: Sequence[Sequence[float]],
    spec: KernelSpec,
    workers: int = 1,
    seed: int = 0,
) -> np.ndarray:
    """Rectangular matrix K[i, j] = kernel_value(train_i, test_j).

    Raises:
        InvalidInputError: If either list is ragged or lengths differ between them
        InvalidSpecError: If an rbf beta is still unresolved
    """
    train = as_feature_matrix(xs_train)
    if len(xs_test) == 0:
        return np.empty((train.shape[0], 0))
    test = as_feature_matrix(xs_test)
    if train.shape[1] != test.shape[1]:
        raise InvalidInputError(
            f"Feature length mismatch: train has {train.shape[1]}, test has {test.shape[1]}"
        )
    pairs = [(i, j) for i in range(train.shape[0]) for j in range(test.shape[0])]
    values = _evaluate(pairs, _entry_function(train, test, spec, seed, CROSS_STAGE), workers)
    return np.array(values, dtype=float).reshape(train.shape[0], test.shape[0])
