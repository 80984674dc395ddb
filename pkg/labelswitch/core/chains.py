"""
Chain Containers
================

Validated array containers for MCMC output: permutation sets, parameter
chains, allocation chains, classification probabilities and observed data.
All containers hold 0-based labels.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .permutations import Permutation, as_index
from ..utils.errors import (
    DimensionError,
    InvalidPermutationError,
    LabelRangeError,
    ProbabilityError,
)

PROBABILITY_TOLERANCE = 1e-8


def _first_index(mask: np.ndarray) -> tuple:
    return tuple(int(v) for v in np.argwhere(mask)[0])


@dataclass(frozen=True, eq=False)
class PermutationSet:
    """
    One label permutation per MCMC iteration.

    Attributes:
        rows: m x K int64 array; every row is a bijection on {0, ..., K-1}
    """

    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.int64, copy=True)
        if rows.ndim != 2:
            raise DimensionError(f"permutation set must be m x K, got shape {rows.shape}")
        expected = np.arange(rows.shape[1])
        valid = (np.sort(rows, axis=1) == expected).all(axis=1)
        if not valid.all():
            t = int(np.flatnonzero(~valid)[0])
            raise InvalidPermutationError(
                f"row {t + 1} is not a permutation of 1..{rows.shape[1]}: {(rows[t] + 1).tolist()}"
            )
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, m: int, K: int) -> "PermutationSet":
        return cls(np.tile(np.arange(K, dtype=np.int64), (m, 1)))

    @classmethod
    def from_one_based(cls, rows: np.ndarray) -> "PermutationSet":
        return cls(np.asarray(rows, dtype=np.int64) - 1)

    def to_one_based(self) -> np.ndarray:
        return self.rows + 1

    @property
    def m(self) -> int:
        return self.rows.shape[0]

    @property
    def K(self) -> int:
        return self.rows.shape[1]

    def row(self, t: int) -> Permutation:
        return Permutation(tuple(self.rows[t].tolist()))

    def inverse(self) -> "PermutationSet":
        inverse = np.empty_like(self.rows)
        np.put_along_axis(inverse, self.rows, np.arange(self.K)[None, :].repeat(self.m, axis=0), axis=1)
        return PermutationSet(inverse)

    def compose(self, perm) -> "PermutationSet":
        """Compose a constant permutation on the right of every row: ``row[perm[k]]``."""
        index = as_index(perm)
        if index.size != self.K:
            raise DimensionError(f"cannot compose a size-{index.size} permutation with K={self.K}")
        return PermutationSet(self.rows[:, index])

    def is_identity(self) -> bool:
        return bool((self.rows == np.arange(self.K)).all())

    def __len__(self) -> int:
        return self.m

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermutationSet):
            return NotImplemented
        return self.rows.shape == other.rows.shape and bool(np.array_equal(self.rows, other.rows))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class ParameterChain:
    """
    Simulated component parameters, an m x K x J real array.
    """

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 3:
            raise DimensionError(f"parameter chain must be m x K x J, got shape {data.shape}")
        if data.shape[1] < 1 or data.shape[2] < 1:
            raise DimensionError(f"parameter chain needs K >= 1 and J >= 1, got shape {data.shape}")
        finite = np.isfinite(data)
        if not finite.all():
            t, k, j = _first_index(~finite)
            raise DimensionError(f"non-finite parameter at iteration {t + 1}, component {k + 1}, type {j + 1}")
        object.__setattr__(self, "data", data)

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def K(self) -> int:
        return self.data.shape[1]

    @property
    def J(self) -> int:
        return self.data.shape[2]

    def __getitem__(self, t: int) -> np.ndarray:
        return self.data[t]


@dataclass(frozen=True, eq=False)
class AllocationChain:
    """
    Simulated allocations, an m x n integer array of 0-based labels.

    Attributes:
        data: Allocation array
        K: Label count; inferred as max label + 1 when omitted
    """

    data: np.ndarray
    K: Optional[int] = None

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim == 1:
            data = data[None, :]
        if data.ndim != 2:
            raise DimensionError(f"allocation chain must be m x n, got shape {data.shape}")
        if data.size and not np.issubdtype(data.dtype, np.integer):
            if not np.array_equal(data, np.round(data)):
                raise LabelRangeError("allocations must be integers")
        data = data.astype(np.int64)
        K = self.K if self.K is not None else (int(data.max()) + 1 if data.size else 1)
        if data.size and (data.min() < 0 or data.max() >= K):
            t, i = _first_index((data < 0) | (data >= K))
            raise LabelRangeError(
                f"allocation {int(data[t, i]) + 1} at iteration {t + 1}, observation {i + 1} outside 1..{K}"
            )
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "K", int(K))

    @classmethod
    def from_one_based(cls, data: np.ndarray, K: Optional[int] = None) -> "AllocationChain":
        return cls(np.asarray(data, dtype=np.int64) - 1, K)

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    def __getitem__(self, t: int) -> np.ndarray:
        return self.data[t]


@dataclass(frozen=True, eq=False)
class ClassificationChain:
    """
    Classification probabilities, an m x n x K array whose (t, i) rows sum to one.
    """

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 3:
            raise DimensionError(f"classification chain must be m x n x K, got shape {data.shape}")
        bad = ~np.isfinite(data) | (data < 0.0) | (data > 1.0)
        if bad.any():
            t, i, k = _first_index(bad)
            raise ProbabilityError(
                f"probability {data[t, i, k]!r} at iteration {t + 1}, observation {i + 1}, component {k + 1}"
            )
        sums = data.sum(axis=2)
        off = np.abs(sums - 1.0) > PROBABILITY_TOLERANCE
        if off.any():
            t, i = _first_index(off)
            raise ProbabilityError(
                f"probabilities at iteration {t + 1}, observation {i + 1} sum to {sums[t, i]!r}"
            )
        object.__setattr__(self, "data", data)

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    @property
    def K(self) -> int:
        return self.data.shape[2]

    def __getitem__(self, t: int) -> np.ndarray:
        return self.data[t]


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Observed data, an n x d real array (a vector is read as d = 1).
    """

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2:
            raise DimensionError(f"data must be n x d, got shape {x.shape}")
        finite = np.isfinite(x)
        if not finite.all():
            i, r = _first_index(~finite)
            raise DimensionError(f"non-finite observation {i + 1}, column {r + 1}")
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]


def relabel_allocations(z: AllocationChain, perms: PermutationSet) -> np.ndarray:
    """
    Relabel every allocation vector with the inverse of its permutation.

    Returns:
        m x n array with ``out[t][i] = perms[t]^-1(z[t][i])``
    """
    if z.m != perms.m:
        raise DimensionError(f"allocation chain has {z.m} iterations, permutation set has {perms.m}")
    if z.K > perms.K:
        raise LabelRangeError(f"allocations use {z.K} labels, permutations act on {perms.K}")
    inverse = perms.inverse().rows
    return np.take_along_axis(inverse, z.data, axis=1)


def check_compatible(**parts) -> None:
    """
    Check that the m, n and K dimensions agree across the supplied chains.

    Accepts keyword arguments ``mcmc``, ``z``, ``p``, ``x``; ``None`` values
    are skipped.
    """
    mcmc = parts.get("mcmc")
    z = parts.get("z")
    p = parts.get("p")
    x = parts.get("x")

    ms = {name: c.m for name, c in (("mcmc", mcmc), ("z", z), ("p", p)) if c is not None}
    if len(set(ms.values())) > 1:
        raise DimensionError(f"iteration counts disagree: {ms}")
    ns = {name: c.n for name, c in (("z", z), ("p", p), ("x", x)) if c is not None}
    if len(set(ns.values())) > 1:
        raise DimensionError(f"observation counts disagree: {ns}")
    Ks = {name: c.K for name, c in (("mcmc", mcmc), ("p", p)) if c is not None}
    if len(set(Ks.values())) > 1:
        raise DimensionError(f"component counts disagree: {Ks}")
    if z is not None and Ks and z.K > next(iter(Ks.values())):
        raise LabelRangeError(f"allocations use label {z.K}, but K = {next(iter(Ks.values()))}")
