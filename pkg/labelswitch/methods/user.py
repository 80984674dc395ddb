"""
User-supplied permutations.
"""

from typing import Optional

from .base import MethodOutput
from ..core.chains import PermutationSet
from ..utils.errors import DimensionError


def user_perm(perms, m: Optional[int] = None, K: Optional[int] = None) -> MethodOutput:
    """Wrap a permutation set as a method output, checking m and K when given."""
    if not isinstance(perms, PermutationSet):
        perms = PermutationSet(perms)
    if m is not None and perms.m != m:
        raise DimensionError(f"user permutations have {perms.m} rows, chain has m = {m}")
    if K is not None and perms.K != K:
        raise DimensionError(f"user permutations act on {perms.K} labels, chain has K = {K}")
    return MethodOutput(perms)
