"""
Stationary distribution of a row-stochastic transition matrix.
"""

from functools import lru_cache

import numpy as np

from ..config import RELABEL_DEFAULTS
from ..utils.errors import ConvergenceError, ModelError
from ..utils.logging_setup import get_logger

logger = get_logger("models.stationary")

MAX_SQUARINGS = 64
RESIDUAL_TOLERANCE = 1e-9
SIMPLEX_TOLERANCE = 1e-8


def check_transition_matrix(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ModelError(f"transition matrix must be square, got shape {w.shape}")
    if not np.isfinite(w).all() or (w < 0).any():
        raise ModelError("transition probabilities must be finite and non-negative")
    sums = w.sum(axis=1)
    if (np.abs(sums - 1.0) > SIMPLEX_TOLERANCE).any():
        row = int(np.flatnonzero(np.abs(sums - 1.0) > SIMPLEX_TOLERANCE)[0])
        raise ModelError(f"transition row {row + 1} sums to {sums[row]!r}")
    return w


@lru_cache(maxsize=4096)
def _stationary(buffer: bytes, K: int) -> tuple:
    w = np.frombuffer(buffer, dtype=np.float64).reshape(K, K)
    tol = RELABEL_DEFAULTS.stationary_tolerance
    power = w.copy()
    pi = np.full(K, 1.0 / K) @ power
    residual = float(np.abs(pi @ w - pi).max())
    squarings = 0
    # stop on the balance residual of the current iterate
    while residual > tol and squarings < MAX_SQUARINGS:
        power = power @ power
        squarings += 1
        pi = np.full(K, 1.0 / K) @ power
        residual = float(np.abs(pi @ w - pi).max())

    pi = np.clip(pi, 0.0, None)
    pi = pi / pi.sum()
    residual = float(np.abs(pi @ w - pi).max())
    if residual > RESIDUAL_TOLERANCE:
        raise ConvergenceError(
            f"no stationary limit from the uniform start after {squarings} squarings "
            f"(residual {residual:.3g}); the chain looks periodic"
        )
    logger.debug(f"Stationary distribution after {squarings} squarings, residual {residual:.3g}")
    return tuple(pi.tolist())


def stationary_distribution(w) -> np.ndarray:
    """
    Left eigenvector of ``w`` at eigenvalue 1, normalized to sum to one.

    Equivalent to iterating ``pi <- pi w`` from the uniform start; the matrix
    is squared repeatedly so that 2^k steps cost k products. Results are
    memoized per matrix.

    Raises:
        ModelError: When rows are not on the simplex
        ConvergenceError: When no limit is reached (periodic chains)
    """
    w = check_transition_matrix(w)
    K = w.shape[0]
    return np.array(_stationary(np.ascontiguousarray(w).tobytes(), K))
