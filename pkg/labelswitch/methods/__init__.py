"""
Methods Module for labelswitch
==============================

Relabelling algorithms. Each maps MCMC output to one permutation per
iteration, returned in a :class:`MethodOutput`.
"""

from .base import MethodOutput, run_sweeps
from .ordering import ordering_constraint, ordering_constraint_all, linear_combination_constraint
from .stephens import stephens
from .pra import pra
from .ecr import ecr, ecr_iterative_1, ecr_iterative_2, contingency_tables
from .sjw import sjw, permutation_weights, all_permutations
from .data_based import data_based, cluster_statistics
from .user import user_perm

__all__ = [
    "MethodOutput",
    "run_sweeps",
    "ordering_constraint",
    "ordering_constraint_all",
    "linear_combination_constraint",
    "stephens",
    "pra",
    "ecr",
    "ecr_iterative_1",
    "ecr_iterative_2",
    "contingency_tables",
    "sjw",
    "permutation_weights",
    "all_permutations",
    "data_based",
    "cluster_statistics",
    "user_perm",
]
