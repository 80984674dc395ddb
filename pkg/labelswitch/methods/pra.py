"""
Pivotal reordering: align every iteration with a K x J parameter pivot.
"""

import numpy as np

from .base import MethodOutput
from ..assignment import solve_assignment_batch
from ..core.chains import ParameterChain, PermutationSet
from ..utils.errors import DimensionError
from ..utils.logging_setup import get_logger

logger = get_logger("methods.pra")


def pra(mcmc: ParameterChain, pivot, threads: int = 1) -> MethodOutput:
    """
    Maximize ``sum_k sum_j xi[t, tau_k, j] * pivot[k, j]`` per iteration.

    The dot-product objective is linear in the permutation, so it is solved
    as an assignment with ``score[k][l] = <xi[t, l], pivot[k]>``.
    """
    pivot = np.asarray(pivot, dtype=np.float64)
    if pivot.shape != (mcmc.K, mcmc.J):
        raise DimensionError(f"pivot must be {mcmc.K} x {mcmc.J}, got shape {pivot.shape}")
    scores = np.einsum("tlj,kj->tkl", mcmc.data, pivot)
    rows, objectives = solve_assignment_batch(scores, maximize=True, threads=threads)
    logger.debug(f"PRA aligned {mcmc.m} iterations to the pivot")
    return MethodOutput(PermutationSet(rows), [float(objectives.sum())], estimate=pivot)
