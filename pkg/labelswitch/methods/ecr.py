"""
ECR Algorithms
==============

Equivalence-classes-representatives relabelling. Every iteration is
relabelled so that its allocation vector agrees with a pivot allocation on
as many observations as possible. The default version uses fixed pivots;
iterative version 1 updates the pivot to the per-observation mode of the
relabelled allocations and version 2 to the argmax of the mean relabelled
classification probabilities.
"""

from typing import Optional

import numpy as np

from .base import MethodOutput, run_sweeps
from ..assignment import solve_assignment_batch
from ..config import RELABEL_DEFAULTS
from ..core.chains import AllocationChain, ClassificationChain, PermutationSet, relabel_allocations
from ..core.permutations import mode_per_observation
from ..utils.errors import DimensionError, LabelRangeError
from ..utils.logging_setup import get_logger

logger = get_logger("methods.ecr")


def contingency_tables(z: np.ndarray, pivot: np.ndarray, K: int) -> np.ndarray:
    """
    Per-iteration contingency counts between a pivot and allocations.

    Args:
        z: m x n allocations (0-based)
        pivot: n-vector (0-based)
        K: label count

    Returns:
        m x K x K int64 array, ``A[t, k, l] = #{i : pivot_i = k and z[t, i] = l}``
    """
    z = np.atleast_2d(np.asarray(z, dtype=np.int64))
    pivot = np.asarray(pivot, dtype=np.int64)
    m, n = z.shape
    if pivot.shape != (n,):
        raise DimensionError(f"pivot has length {pivot.size}, allocations have n = {n}")
    if pivot.size and (pivot.min() < 0 or pivot.max() >= K):
        i = int(np.flatnonzero((pivot < 0) | (pivot >= K))[0])
        raise LabelRangeError(f"pivot label {int(pivot[i]) + 1} at observation {i + 1} outside 1..{K}")
    flat = np.arange(m, dtype=np.int64)[:, None] * (K * K) + pivot[None, :] * K + z
    return np.bincount(flat.ravel(), minlength=m * K * K).reshape(m, K, K)


def _check_K(z: AllocationChain, K: Optional[int]) -> int:
    K = z.K if K is None else int(K)
    if z.K > K:
        raise LabelRangeError(f"allocations use label {z.K}, but K = {K}")
    return K


def _match(z: np.ndarray, pivot: np.ndarray, K: int, threads: int):
    tables = contingency_tables(z, pivot, K)
    rows, matches = solve_assignment_batch(tables, maximize=True, threads=threads)
    return PermutationSet(rows), matches


def ecr(z: AllocationChain, zpivot, K: Optional[int] = None, threads: int = 1) -> MethodOutput:
    """
    ECR default version with a fixed allocation pivot.

    Per iteration, the permutation maximizes the number of observations whose
    relabelled allocation equals the pivot; the per-iteration match counts
    are returned in ``extras["matches"]``.
    """
    K = _check_K(z, K)
    pivot = np.asarray(zpivot, dtype=np.int64).ravel()
    perms, matches = _match(z.data, pivot, K, threads)
    logger.debug(f"ECR matched {int(matches.sum())} of {z.m * z.n} allocations")
    return MethodOutput(perms, [float(matches.sum())], pivot=pivot, extras={"matches": matches})


def ecr_iterative_1(
    z: AllocationChain,
    K: Optional[int] = None,
    thr: Optional[float] = None,
    max_iter: Optional[int] = None,
    threads: int = 1,
) -> MethodOutput:
    """ECR iterative version 1: the pivot is the mode of the relabelled allocations."""
    K = _check_K(z, K)
    thr = RELABEL_DEFAULTS.thr_ecr if thr is None else thr
    max_iter = RELABEL_DEFAULTS.max_ecr if max_iter is None else max_iter

    def pivot_of(perms: PermutationSet) -> np.ndarray:
        return mode_per_observation(relabel_allocations(z, perms), K)

    def sweep(perms: PermutationSet):
        new, matches = _match(z.data, pivot_of(perms), K, threads)
        return new, float(matches.sum())

    perms, trace, sweeps, converged = run_sweeps(sweep, z.m, K, thr, max_iter, maximize=True, logger=logger)
    logger.info(f"ECR-ITERATIVE-1 finished after {sweeps} sweeps (converged={converged})")
    return MethodOutput(perms, trace, sweeps, converged, pivot=pivot_of(perms))


def ecr_iterative_2(
    z: AllocationChain,
    p: ClassificationChain,
    K: Optional[int] = None,
    thr: Optional[float] = None,
    max_iter: Optional[int] = None,
    threads: int = 1,
) -> MethodOutput:
    """
    ECR iterative version 2.

    The pivot label of observation i is the argmax over k of the relabelled
    classification probabilities averaged across iterations. (Taking the
    argmax over the pooled per-iteration probabilities instead is a possible
    reading of the pivot update; it is not implemented.)
    """
    K = _check_K(z, K)
    if p.m != z.m or p.n != z.n or p.K != K:
        raise DimensionError(f"p is {p.m} x {p.n} x {p.K}, expected {z.m} x {z.n} x {K}")
    thr = RELABEL_DEFAULTS.thr_ecr if thr is None else thr
    max_iter = RELABEL_DEFAULTS.max_ecr if max_iter is None else max_iter

    def pivot_of(perms: PermutationSet) -> np.ndarray:
        mean = np.take_along_axis(p.data, perms.rows[:, None, :], axis=2).mean(axis=0)
        return mean.argmax(axis=1)

    def sweep(perms: PermutationSet):
        new, matches = _match(z.data, pivot_of(perms), K, threads)
        return new, float(matches.sum())

    perms, trace, sweeps, converged = run_sweeps(sweep, z.m, K, thr, max_iter, maximize=True, logger=logger)
    logger.info(f"ECR-ITERATIVE-2 finished after {sweeps} sweeps (converged={converged})")
    return MethodOutput(perms, trace, sweeps, converged, pivot=pivot_of(perms))
