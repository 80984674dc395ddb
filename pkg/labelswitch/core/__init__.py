"""
Core Module for labelswitch
===========================

Domain types, permutation algebra and the array containers every
relabelling algorithm consumes.
"""

from .permutations import (
    Permutation,
    as_index,
    invert_permutation,
    compose,
    apply_to_parameters,
    apply_to_allocations,
    apply_to_classification,
    mode_per_observation,
)
from .chains import (
    PermutationSet,
    ParameterChain,
    AllocationChain,
    ClassificationChain,
    Dataset,
    relabel_allocations,
    check_compatible,
)

__all__ = [
    "Permutation",
    "as_index",
    "invert_permutation",
    "compose",
    "apply_to_parameters",
    "apply_to_allocations",
    "apply_to_classification",
    "mode_per_observation",
    "PermutationSet",
    "ParameterChain",
    "AllocationChain",
    "ClassificationChain",
    "Dataset",
    "relabel_allocations",
    "check_compatible",
]
