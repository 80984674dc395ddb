"""
Clustering, Alignment and Chain Summaries
=========================================

Single best clusterings, label alignment between clusterings, the
similarity matrix, reordering of parameter chains and complete-MAP pivot
selection.
"""

from typing import Optional, Sequence

import numpy as np

from ..assignment import solve_max_assignment
from ..core.chains import AllocationChain, Dataset, ParameterChain, PermutationSet, relabel_allocations
from ..core.permutations import Permutation, invert_permutation, mode_per_observation
from ..methods.ecr import contingency_tables
from ..models.base import ModelFamily
from ..utils.errors import DimensionError, LabelRangeError, ModelError
from ..utils.logging_setup import get_logger
from ..utils.parallel import map_chunks

logger = get_logger("pipeline.clustering")


def single_best_clustering(z: AllocationChain, perms: PermutationSet) -> np.ndarray:
    """Per-observation mode of the relabelled allocations."""
    return mode_per_observation(relabel_allocations(z, perms), perms.K)


def _check_labels(vector: np.ndarray, K: int, what: str) -> np.ndarray:
    vector = np.asarray(vector, dtype=np.int64)
    if vector.ndim != 1:
        raise DimensionError(f"{what} must be a vector, got shape {vector.shape}")
    if vector.size and (vector.min() < 0 or vector.max() >= K):
        i = int(np.flatnonzero((vector < 0) | (vector >= K))[0])
        raise LabelRangeError(f"{what} label {int(vector[i]) + 1} at observation {i + 1} outside 1..{K}")
    return vector


def alignment_solution(cluster, reference, K: int) -> Permutation:
    """
    Permutation tau, in storage convention, relabelling ``cluster`` onto ``reference``.

    Composing it onto every row of a permutation set aligns that set's
    clustering with the reference.
    """
    cluster = _check_labels(cluster, K, "cluster")
    reference = _check_labels(reference, K, "reference")
    if cluster.size != reference.size:
        raise DimensionError(f"cluster has length {cluster.size}, reference has {reference.size}")
    table = contingency_tables(cluster[None, :], reference, K)[0]
    return solve_max_assignment(table).perm


def align_to_reference(cluster, reference, K: int) -> Permutation:
    """
    Label map maximizing ``#{i : map(cluster_i) = reference_i}``.

    If ``cluster = sigma(reference)`` the result is ``sigma^-1``.
    """
    return invert_permutation(alignment_solution(cluster, reference, K))


def similarity_matrix(clusterings: Sequence[np.ndarray], K: Optional[int] = None) -> np.ndarray:
    """
    Proportion of matching allocations between every pair of clusterings.

    Each pair is compared after the optimal alignment of its labels, so the
    matrix is symmetric with a unit diagonal.
    """
    clusterings = [np.asarray(c, dtype=np.int64) for c in clusterings]
    if not clusterings:
        return np.zeros((0, 0))
    n = clusterings[0].size
    for index, c in enumerate(clusterings):
        if c.shape != (n,):
            raise DimensionError(f"clustering {index + 1} has shape {c.shape}, expected ({n},)")
    if K is None:
        K = max(int(c.max()) for c in clusterings) + 1 if n else 1

    f = len(clusterings)
    sim = np.eye(f)
    for a in range(f):
        for b in range(a + 1, f):
            table = contingency_tables(clusterings[b][None, :], clusterings[a], K)[0]
            matches = solve_max_assignment(table).objective
            sim[a, b] = sim[b, a] = matches / n if n else 1.0
    return sim


def permute_mcmc(mcmc: ParameterChain, perms: PermutationSet, model: Optional[ModelFamily] = None) -> ParameterChain:
    """
    Reorder the parameter chain: ``out[t][k] = mcmc[t][perms[t][k]]``.

    With a model, its own permutation action is used (for a hidden Markov
    model this also reorders the transition columns).
    """
    if perms.m != mcmc.m or perms.K != mcmc.K:
        raise DimensionError(f"permutations are {perms.m} x {perms.K}, chain is {mcmc.m} x {mcmc.K}")
    if model is None:
        return ParameterChain(np.take_along_axis(mcmc.data, perms.rows[:, :, None], axis=1))
    out = np.empty_like(mcmc.data)
    for t in range(mcmc.m):
        out[t] = model.permute_parameters(mcmc.data[t], perms.rows[t])
    return ParameterChain(out)


def complete_log_likelihoods(
    model: ModelFamily, mcmc: ParameterChain, z: AllocationChain, x: Dataset, threads: int = 1
) -> np.ndarray:
    """Complete log-likelihood of every iteration's parameters and allocations."""
    if mcmc.m != z.m or z.n != x.n:
        raise DimensionError(f"chain has m = {mcmc.m}, allocations {z.m} x {z.n}, data n = {x.n}")

    def work(chunk):
        return [model.complete_log_likelihood(mcmc.data[t], x, z.data[t]) for t in chunk]

    return np.array(map_chunks(work, mcmc.m, threads))


def select_map_pivot(
    model: ModelFamily, mcmc: ParameterChain, z: AllocationChain, x: Dataset, threads: int = 1
) -> int:
    """
    0-based index of the complete-MAP iteration; ties go to the smallest index.

    Raises:
        ModelError: When the complete likelihood is zero at every iteration
    """
    values = complete_log_likelihoods(model, mcmc, z, x, threads)
    finite = np.isfinite(values)
    if not finite.any():
        raise ModelError("complete likelihood is not finite at any iteration")
    index = int(np.argmax(np.where(finite, values, -np.inf)))
    logger.debug(f"Complete-MAP iteration {index + 1}, log-likelihood {values[index]!r}")
    return index


def cluster_frequencies(clusters: np.ndarray, K: int) -> np.ndarray:
    """f x K table of cluster sizes, one row per clustering."""
    clusters = np.atleast_2d(np.asarray(clusters, dtype=np.int64))
    return np.stack([np.bincount(row, minlength=K)[:K] for row in clusters])


def posterior_means(mcmc: ParameterChain, perms: PermutationSet, model: Optional[ModelFamily] = None) -> np.ndarray:
    """K x J posterior mean of the reordered chain."""
    return permute_mcmc(mcmc, perms, model).data.mean(axis=0)
