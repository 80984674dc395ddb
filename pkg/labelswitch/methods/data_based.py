"""
Data-based relabelling.

Cluster centers and scales are estimated once from a reference allocation.
Each iteration is then relabelled to minimize the standardized squared
distance between its clusters and those centers (a k-means type loss).
"""

from typing import Optional, Tuple

import numpy as np

from .base import MethodOutput
from .ecr import ecr_iterative_1
from ..assignment import solve_assignment_batch
from ..config import RELABEL_DEFAULTS
from ..core.chains import AllocationChain, Dataset, PermutationSet
from ..utils.errors import DimensionError, LabelRangeError
from ..utils.logging_setup import get_logger

logger = get_logger("methods.data_based")


def cluster_statistics(x: Dataset, reference: np.ndarray, K: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Within-cluster sample means and standard deviations (K x d each).

    Clusters with fewer than two members use the global standard deviation
    of the column; empty clusters also use the global mean. Scales are
    floored at ``data_based_scale_floor``.
    """
    data = x.x
    reference = np.asarray(reference, dtype=np.int64)
    if reference.shape != (x.n,):
        raise DimensionError(f"reference allocation has length {reference.size}, data has n = {x.n}")
    if reference.size and (reference.min() < 0 or reference.max() >= K):
        raise LabelRangeError(f"reference labels must lie in 1..{K}")

    global_mean = data.mean(axis=0)
    global_sd = data.std(axis=0, ddof=1) if x.n > 1 else np.zeros(x.d)
    centers = np.tile(global_mean, (K, 1))
    scales = np.tile(global_sd, (K, 1))
    for k in range(K):
        members = data[reference == k]
        if len(members):
            centers[k] = members.mean(axis=0)
        if len(members) >= 2:
            scales[k] = members.std(axis=0, ddof=1)
    return centers, np.maximum(scales, RELABEL_DEFAULTS.data_based_scale_floor)


def data_based_costs(z: np.ndarray, distances: np.ndarray) -> np.ndarray:
    """``cost[t, k, l] = sum over i with z[t, i] = l of distances[i, k]``."""
    m, n = z.shape
    K = distances.shape[1]
    flat = (np.arange(m, dtype=np.int64)[:, None] * K + z).ravel()
    costs = np.empty((m, K, K))
    for k in range(K):
        weights = np.tile(distances[:, k], m)
        costs[:, k, :] = np.bincount(flat, weights=weights, minlength=m * K).reshape(m, K)
    return costs


def data_based(
    z: AllocationChain,
    x: Dataset,
    K: Optional[int] = None,
    reference: Optional[np.ndarray] = None,
    threads: int = 1,
) -> MethodOutput:
    """
    Relabel every iteration against centers estimated from ``reference``.

    When no reference allocation is given, the converged pivot of ECR
    iterative version 1 is used.
    """
    K = z.K if K is None else int(K)
    if z.K > K:
        raise LabelRangeError(f"allocations use label {z.K}, but K = {K}")
    if z.n != x.n:
        raise DimensionError(f"allocations have n = {z.n}, data has n = {x.n}")
    if reference is None:
        reference = ecr_iterative_1(z, K, threads=threads).pivot
        logger.debug("Using the ECR-ITERATIVE-1 pivot as reference allocation")

    centers, scales = cluster_statistics(x, reference, K)
    distances = (((x.x[:, None, :] - centers[None, :, :]) / scales[None, :, :]) ** 2).sum(axis=2)
    rows, objectives = solve_assignment_batch(data_based_costs(z.data, distances), maximize=False, threads=threads)
    return MethodOutput(
        PermutationSet(rows),
        [float(objectives.sum())],
        pivot=np.asarray(reference, dtype=np.int64),
        extras={"centers": centers, "scales": scales},
    )
