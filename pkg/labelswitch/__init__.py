"""
labelswitch - Relabelling Algorithms for Label Switching
========================================================

Permutation-based relabelling of MCMC output from finite mixtures and
hidden Markov models: ordering constraints, Stephens' method, pivotal
reordering, the ECR family, probabilistic relabelling and data-based
relabelling, with the alignment and similarity machinery used to compare
them. The MCP server lives in :mod:`labelswitch.server` and is imported on
demand so that the library works without the ``mcp`` package.

Version: 1.0.0
License: MIT
"""

__version__ = "1.0.0"
__license__ = "MIT"

from .core import PermutationSet, ParameterChain, AllocationChain, ClassificationChain, Dataset
from .pipeline import RunConfig, RelabelResult, run, permute_mcmc

__all__ = [
    "PermutationSet",
    "ParameterChain",
    "AllocationChain",
    "ClassificationChain",
    "Dataset",
    "RunConfig",
    "RelabelResult",
    "run",
    "permute_mcmc",
]
