"""
Pipeline Module for labelswitch
===============================

Orchestration of relabelling runs and the clustering, alignment and
similarity machinery used to compare methods.
"""

from .clustering import (
    single_best_clustering,
    alignment_solution,
    align_to_reference,
    similarity_matrix,
    permute_mcmc,
    complete_log_likelihoods,
    select_map_pivot,
    cluster_frequencies,
    posterior_means,
)
from .orchestrator import RunConfig, RelabelResult, run

__all__ = [
    "single_best_clustering",
    "alignment_solution",
    "align_to_reference",
    "similarity_matrix",
    "permute_mcmc",
    "complete_log_likelihoods",
    "select_map_pivot",
    "cluster_frequencies",
    "posterior_means",
    "RunConfig",
    "RelabelResult",
    "run",
]
