"""
Ordering constraints: sort the components of every iteration by one
parameter type, or by a linear combination of parameter types.
"""

from typing import List, Sequence

import numpy as np

from .base import MethodOutput
from ..core.chains import ParameterChain, PermutationSet
from ..utils.errors import DimensionError, UsageError
from ..utils.logging_setup import get_logger

logger = get_logger("methods.ordering")


def _sorted_permutations(values: np.ndarray) -> PermutationSet:
    # stable sort: ties keep the original component order
    return PermutationSet(np.argsort(values, axis=1, kind="stable"))


def ordering_constraint(mcmc: ParameterChain, s: int) -> MethodOutput:
    """
    Order the components of every iteration by parameter type ``s`` (0-based).

    Row t is the permutation tau with ``xi[t, tau_1, s] <= ... <= xi[t, tau_K, s]``.

    Raises:
        UsageError: When ``s`` is outside 0..J-1
    """
    if not 0 <= s < mcmc.J:
        raise UsageError(f"constraint index {s + 1} outside 1..{mcmc.J}")
    logger.debug(f"Ordering {mcmc.m} iterations by parameter type {s + 1}")
    return MethodOutput(_sorted_permutations(mcmc.data[:, :, s]), extras={"constraint": s})


def ordering_constraint_all(mcmc: ParameterChain) -> List[MethodOutput]:
    """One ordering-constraint output per parameter type."""
    return [ordering_constraint(mcmc, s) for s in range(mcmc.J)]


def linear_combination_constraint(mcmc: ParameterChain, coefficients: Sequence[float]) -> MethodOutput:
    """
    Order the components by ``sum_j coefficients[j] * xi[t, k, j]``.

    For example coefficients (1, -2, 0) order by mu1 - 2 mu2 in the
    bivariate layout.
    """
    coefficients = np.asarray(coefficients, dtype=np.float64)
    if coefficients.shape != (mcmc.J,):
        raise DimensionError(f"need {mcmc.J} coefficients, got {coefficients.size}")
    values = np.einsum("tkj,j->tk", mcmc.data, coefficients)
    return MethodOutput(_sorted_permutations(values), extras={"coefficients": coefficients.tolist()})
