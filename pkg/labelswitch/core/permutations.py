"""
Permutation Algebra
===================

Label permutations and the ways they act on parameters, allocations and
classification probabilities.

Storage convention: a permutation ``tau`` reorders parameters as
``new[k] = old[tau[k]]`` while allocations are relabelled with the inverse,
``new_z[i] = tau^-1(z[i])``. This is the pairing under which the complete
likelihood is invariant. Labels are 0-based here; files and the CLI use
1-based labels.
"""

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from ..utils.errors import DimensionError, InvalidPermutationError, LabelRangeError


@dataclass(frozen=True)
class Permutation:
    """
    A bijection on ``{0, ..., K-1}``.

    Attributes:
        mapping: Tuple of length K; ``mapping[k]`` is the image of ``k``
    """

    mapping: tuple

    def __post_init__(self):
        mapping = tuple(int(v) for v in self.mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise InvalidPermutationError(f"not a permutation of 0..{len(mapping) - 1}: {mapping}")
        object.__setattr__(self, "mapping", mapping)

    @classmethod
    def identity(cls, K: int) -> "Permutation":
        return cls(tuple(range(K)))

    @classmethod
    def from_one_based(cls, values: Iterable[int]) -> "Permutation":
        return cls(tuple(int(v) - 1 for v in values))

    def to_one_based(self) -> tuple:
        return tuple(v + 1 for v in self.mapping)

    @property
    def K(self) -> int:
        return len(self.mapping)

    def is_identity(self) -> bool:
        return self.mapping == tuple(range(self.K))

    def __len__(self) -> int:
        return len(self.mapping)

    def __getitem__(self, k: int) -> int:
        return self.mapping[k]

    def __iter__(self) -> Iterator[int]:
        return iter(self.mapping)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mapping, dtype=dtype or np.int64)


PermLike = Union[Permutation, Sequence[int], np.ndarray]


def as_index(perm: PermLike) -> np.ndarray:
    """Return a permutation as a 0-based int64 index array."""
    if isinstance(perm, Permutation):
        return np.asarray(perm.mapping, dtype=np.int64)
    index = np.asarray(perm, dtype=np.int64)
    if index.ndim != 1 or not np.array_equal(np.sort(index), np.arange(index.size)):
        raise InvalidPermutationError(f"not a permutation: {index.tolist()}")
    return index


def invert_permutation(perm: PermLike) -> Permutation:
    """Return the inverse permutation: ``result[perm[k]] = k``."""
    index = as_index(perm)
    inverse = np.empty_like(index)
    inverse[index] = np.arange(index.size)
    return Permutation(tuple(inverse.tolist()))


def compose(first: PermLike, second: PermLike) -> Permutation:
    """Return ``k -> first[second[k]]``."""
    a = as_index(first)
    b = as_index(second)
    if a.size != b.size:
        raise DimensionError(f"cannot compose permutations of sizes {a.size} and {b.size}")
    return Permutation(tuple(a[b].tolist()))


def apply_to_parameters(params: np.ndarray, perm: PermLike) -> np.ndarray:
    """
    Reorder component rows of a K x J parameter matrix.

    ``out[k][j] = params[perm[k]][j]``.
    """
    params = np.asarray(params)
    index = as_index(perm)
    if params.ndim < 1 or params.shape[0] != index.size:
        raise DimensionError(
            f"parameter matrix has {params.shape[0] if params.ndim else 0} rows, permutation has {index.size}"
        )
    return params[index]


def apply_to_allocations(alloc: np.ndarray, perm: PermLike) -> np.ndarray:
    """
    Apply a permutation as a function to allocation labels.

    ``out[i] = perm[alloc[i]]``. To relabel allocations consistently with
    :func:`apply_to_parameters`, pass the inverse permutation.
    """
    alloc = np.asarray(alloc, dtype=np.int64)
    index = as_index(perm)
    if alloc.size and (alloc.min() < 0 or alloc.max() >= index.size):
        bad = int(np.flatnonzero((alloc < 0) | (alloc >= index.size))[0])
        raise LabelRangeError(f"label {int(alloc.flat[bad]) + 1} at position {bad} outside 1..{index.size}")
    return index[alloc]


def apply_to_classification(probs: np.ndarray, perm: PermLike) -> np.ndarray:
    """Reindex columns of an n x K probability matrix: ``out[i][k] = probs[i][perm[k]]``."""
    probs = np.asarray(probs, dtype=np.float64)
    index = as_index(perm)
    if probs.shape[-1] != index.size:
        raise DimensionError(f"probability matrix has {probs.shape[-1]} columns, permutation has {index.size}")
    return probs[..., index]


def mode_per_observation(allocs: np.ndarray, K: int = None) -> np.ndarray:
    """
    Most frequent label in every column of an m x n allocation array.

    Ties go to the smallest label.
    """
    allocs = np.asarray(allocs, dtype=np.int64)
    if allocs.ndim != 2:
        raise DimensionError(f"expected an m x n allocation array, got shape {allocs.shape}")
    m, n = allocs.shape
    if m == 0:
        raise DimensionError("cannot take the mode of an empty chain")
    if K is None:
        K = int(allocs.max()) + 1 if allocs.size else 1
    if allocs.size and (allocs.min() < 0 or allocs.max() >= K):
        raise LabelRangeError(f"labels must lie in 1..{K}")
    flat = (np.arange(n, dtype=np.int64) * K + allocs).ravel()
    counts = np.bincount(flat, minlength=n * K).reshape(n, K)
    # argmax returns the first maximum, i.e. the smallest label
    return counts.argmax(axis=1)
