"""Sequential minimal optimization for the soft-margin SVM dual.

Solves

    min_a  a^T Q a / 2 - e^T a    s.t.  y^T a = 0,  0 <= a_i <= C

with Q_ij = y_i y_j K_ij. The working pair is the maximal violating pair
(i from I_up with the largest -y_i G_i, j from I_low with the smallest),
which also maximizes |E_i - E_j| for that i. When a pair makes no progress
the partner is drawn from a seeded random sweep instead.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)

MIN_CURVATURE = 1e-12
MIN_STEP = 1e-14


@dataclass
class SmoResult:
    """Solver output."""

    alphas: np.ndarray
    bias: float
    iterations: int
    converged: bool
    gap: float


def dual_objective(alphas: np.ndarray, gram: np.ndarray, labels: np.ndarray) -> float:
    """Dual objective sum(a) - a^T Q a / 2 (the quantity being maximized)."""
    ya = alphas * labels
    return float(alphas.sum() - 0.5 * ya @ gram @ ya)


class SmoSolver:
    """Dual solver state for one training run."""

    def __init__(self, gram: np.ndarray, labels: np.ndarray, C: float, tolerance: float, seed: int):
        self.K = np.asarray(gram, dtype=float)
        self.y = np.asarray(labels, dtype=float)
        self.C = float(C)
        self.tolerance = float(tolerance)
        self.rng = np.random.default_rng(seed)
        self.n = len(self.y)
        self.Q = self.y[:, None] * self.y[None, :] * self.K
        self.alphas = np.zeros(self.n)
        # G = Q a - e
        self.grad = -np.ones(self.n)

    def _masks(self) -> Tuple[np.ndarray, np.ndarray]:
        a, y = self.alphas, self.y
        up = ((a < self.C) & (y > 0)) | ((a > 0) & (y < 0))
        low = ((a < self.C) & (y < 0)) | ((a > 0) & (y > 0))
        return up, low

    def _violation(self) -> Tuple[Optional[int], Optional[int], float, float]:
        v = -self.y * self.grad
        up, low = self._masks()
        if not up.any() or not low.any():
            return None, None, 0.0, 0.0
        i = int(np.flatnonzero(up)[np.argmax(v[up])])
        j = int(np.flatnonzero(low)[np.argmin(v[low])])
        return i, j, float(v[i]), float(v[j])

    def _bounds(self, i: int, j: int) -> Tuple[float, float]:
        ai, aj = self.alphas[i], self.alphas[j]
        if self.y[i] != self.y[j]:
            return max(0.0, aj - ai), min(self.C, self.C + aj - ai)
        return max(0.0, ai + aj - self.C), min(self.C, ai + aj)

    def _snap(self, value: float) -> float:
        if value <= self.C * 1e-12:
            return 0.0
        if value >= self.C * (1.0 - 1e-12):
            return self.C
        return value

    def _take_step(self, i: int, j: int) -> bool:
        if i == j:
            return False
        y, K = self.y, self.K
        v = -y * self.grad
        low, high = self._bounds(i, j)
        if high - low <= 0.0:
            return False
        eta = max(K[i, i] + K[j, j] - 2.0 * K[i, j], MIN_CURVATURE)
        # E_i - E_j = v_j - v_i
        aj_new = self.alphas[j] + y[j] * (v[j] - v[i]) / eta
        aj_new = self._snap(min(max(aj_new, low), high))
        delta_j = aj_new - self.alphas[j]
        if abs(delta_j) < MIN_STEP:
            return False
        ai_new = self._snap(min(max(self.alphas[i] - y[i] * y[j] * delta_j, 0.0), self.C))
        delta_i = ai_new - self.alphas[i]
        self.alphas[i], self.alphas[j] = ai_new, aj_new
        self.grad += self.Q[:, i] * delta_i + self.Q[:, j] * delta_j
        return True

    def _random_sweep(self, i: int) -> bool:
        for j in self.rng.permutation(self.n):
            if self._take_step(i, int(j)):
                return True
        return False

    def _bias(self, m: float, M: float) -> float:
        v = -self.y * self.grad
        free = (self.alphas > 0.0) & (self.alphas < self.C)
        if free.any():
            return float(v[free].mean())
        return (m + M) / 2.0

    def solve(self, max_iterations: int) -> SmoResult:
        """Iterate until the violation gap drops to the tolerance."""
        iterations = 0
        converged = False
        m = M = 0.0
        while iterations < max_iterations:
            i, j, m, M = self._violation()
            if i is None or m - M <= self.tolerance:
                converged = True
                break
            iterations += 1
            if not self._take_step(i, j) and not self._random_sweep(i):
                logger.warning("SMO stalled at iteration %d with gap %.3g", iterations, m - M)
                break
        else:
            i, j, m, M = self._violation()
            logger.warning("SMO hit the iteration cap (%d) with gap %.3g", max_iterations, m - M)
        gap = m - M
        if converged:
            logger.info("SMO converged in %d iterations (gap %.3g)", iterations, gap)
        return SmoResult(
            alphas=self.alphas.copy(),
            bias=self._bias(m, M),
            iterations=iterations,
            converged=converged,
            gap=float(gap),
        )
