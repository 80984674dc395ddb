"""
Model Family Contract
=====================

Every likelihood family provides log component densities, log weights and
the permutation action on its parameter layout. Classification
probabilities and complete log-likelihoods follow from these; families
with dependent allocations (hidden Markov models) override the complete
log-likelihood.
"""

from abc import ABC, abstractmethod
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from ..core.chains import Dataset
from ..core.permutations import as_index
from ..utils.errors import DimensionError, LabelRangeError, ModelError

SIMPLEX_TOLERANCE = 1e-8


def check_simplex(weights: np.ndarray, what: str) -> None:
    if not np.isfinite(weights).all() or (weights < 0).any():
        raise ModelError(f"{what} must be finite and non-negative")
    total = float(weights.sum())
    if abs(total - 1.0) > SIMPLEX_TOLERANCE:
        raise ModelError(f"{what} sum to {total!r}, expected 1")


def _as_data(x) -> np.ndarray:
    return x.x if isinstance(x, Dataset) else Dataset(x).x


class ModelFamily(ABC):
    """
    Base class for likelihood families.

    Attributes:
        kind: Family identifier used in files and on the command line
        K: Optional fixed component count; checked by :meth:`validate`
    """

    kind: str = ""
    data_dim: Optional[int] = None

    def __init__(self, K: Optional[int] = None):
        self.K = K

    @abstractmethod
    def parameter_count(self, K: int) -> int:
        """Number of parameter types J for K components."""

    @abstractmethod
    def log_weights(self, params: np.ndarray) -> np.ndarray:
        """Log mixing weights (K-vector)."""

    @abstractmethod
    def log_component_densities(self, params: np.ndarray, x) -> np.ndarray:
        """``log f(x_i | theta_k)`` as an n x K array."""

    def _check_layout(self, params: np.ndarray) -> np.ndarray:
        params = np.asarray(params, dtype=np.float64)
        if params.ndim != 2:
            raise DimensionError(f"{self.kind} parameters must be K x J, got shape {params.shape}")
        K, J = params.shape
        if self.K is not None and K != self.K:
            raise DimensionError(f"{self.kind} model has K = {self.K}, parameters have {K} rows")
        if J != self.parameter_count(K):
            raise DimensionError(f"{self.kind} with K = {K} needs J = {self.parameter_count(K)}, got {J}")
        if not np.isfinite(params).all():
            raise ModelError(f"{self.kind} parameters must be finite")
        return params

    def validate(self, params: np.ndarray) -> np.ndarray:
        """Check the layout and family invariants; return the parameters as float64."""
        return self._check_layout(params)

    def check_data(self, x) -> np.ndarray:
        data = _as_data(x)
        if self.data_dim is not None and data.shape[1] != self.data_dim:
            raise DimensionError(f"{self.kind} expects {self.data_dim}-dimensional data, got d = {data.shape[1]}")
        return data

    def log_joint_terms(self, params: np.ndarray, x) -> np.ndarray:
        """``log w_k + log f(x_i | theta_k)`` as an n x K array."""
        params = self.validate(params)
        with np.errstate(divide="ignore"):
            return self.log_weights(params)[None, :] + self.log_component_densities(params, x)

    def normalize_weights(self, params: np.ndarray) -> np.ndarray:
        """Rescale the weight part of ``params`` onto the simplex."""
        raise NotImplementedError(f"{self.kind} does not support unnormalized weights")

    def classification_probabilities(self, params: np.ndarray, x, normalize_weights: bool = False) -> np.ndarray:
        """
        Posterior membership probabilities of every observation.

        Computed in log space and normalized with log-sum-exp. With
        ``normalize_weights`` the weights may be given up to a positive
        factor, which cancels.
        """
        if normalize_weights:
            params = self.normalize_weights(params)
        terms = self.log_joint_terms(params, x)
        if not np.isfinite(terms).any(axis=1).all():
            i = int(np.flatnonzero(~np.isfinite(terms).any(axis=1))[0])
            raise ModelError(f"observation {i + 1} has zero density under every component")
        norm = logsumexp(terms, axis=1, keepdims=True)
        return np.exp(terms - norm)

    def _check_labels(self, z: np.ndarray, K: int) -> np.ndarray:
        z = np.asarray(z, dtype=np.int64)
        if z.size and (z.min() < 0 or z.max() >= K):
            raise LabelRangeError(f"allocations must lie in 1..{K}")
        return z

    def complete_log_likelihood(self, params: np.ndarray, x, z) -> float:
        """Log complete likelihood of data and allocations; ``-inf`` when a used weight is zero."""
        z = np.asarray(z, dtype=np.int64)
        return float(self.complete_log_likelihood_batch(params, x, z[None, :])[0])

    def complete_log_likelihood_batch(self, params: np.ndarray, x, zs) -> np.ndarray:
        """Complete log-likelihood of each row of a B x n allocation array."""
        terms = self.log_joint_terms(params, x)
        zs = np.atleast_2d(self._check_labels(zs, terms.shape[1]))
        if zs.shape[1] != terms.shape[0]:
            raise DimensionError(f"allocations have length {zs.shape[1]}, data has n = {terms.shape[0]}")
        return terms[np.arange(terms.shape[0])[None, :], zs].sum(axis=1)

    def permute_parameters(self, params: np.ndarray, perm) -> np.ndarray:
        """Reorder components: ``out[k] = params[perm[k]]``."""
        return np.asarray(params)[as_index(perm)]

    def permute_chain(self, data: np.ndarray, perm) -> np.ndarray:
        """Apply one permutation to every iteration of an m x K x J chain."""
        return np.asarray(data)[:, as_index(perm), :]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(K={self.K})"
