"""
Poisson hidden Markov model.

Parameter columns: (lambda, w_.1, ..., w_.K), so row k holds the intensity
of state k followed by its transition row. The stationary distribution is
not stored; it is recomputed (and memoized) from the transition matrix and
replaces the mixture weights in the classification probabilities.
"""

import numpy as np
from scipy.stats import poisson

from .base import ModelFamily
from .stationary import stationary_distribution
from ..core.permutations import as_index
from ..utils.errors import DimensionError, ModelError

RATE = 0


class PoissonHMM(ModelFamily):
    """K-state hidden Markov model with Poisson emissions."""

    kind = "poisson-hmm"
    data_dim = 1

    def parameter_count(self, K: int) -> int:
        return K + 1

    @staticmethod
    def pack(rates, transitions) -> np.ndarray:
        return np.column_stack([np.asarray(rates, dtype=np.float64), np.asarray(transitions, dtype=np.float64)])

    @staticmethod
    def transition_matrix(params: np.ndarray) -> np.ndarray:
        return np.asarray(params)[:, 1:]

    def validate(self, params: np.ndarray) -> np.ndarray:
        params = self._check_layout(params)
        bad = params[:, RATE] <= 0
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise ModelError(f"intensity of state {k + 1} must be positive, got {params[k, RATE]!r}")
        w = self.transition_matrix(params)
        if (w < 0).any():
            raise ModelError("transition probabilities must be non-negative")
        sums = w.sum(axis=1)
        off = np.abs(sums - 1.0) > 1e-8
        if off.any():
            k = int(np.flatnonzero(off)[0])
            raise ModelError(f"transition row {k + 1} sums to {sums[k]!r}")
        return params

    def normalize_weights(self, params: np.ndarray) -> np.ndarray:
        params = np.array(params, dtype=np.float64)
        params[:, 1:] = params[:, 1:] / params[:, 1:].sum(axis=1, keepdims=True)
        return params

    def check_data(self, x) -> np.ndarray:
        data = super().check_data(x)
        if (data < 0).any() or not np.array_equal(data, np.round(data)):
            raise ModelError("Poisson observations must be non-negative integers")
        return data

    def stationary(self, params: np.ndarray) -> np.ndarray:
        return stationary_distribution(self.transition_matrix(params))

    def log_weights(self, params: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.stationary(params))

    def log_component_densities(self, params: np.ndarray, x) -> np.ndarray:
        data = self.check_data(x)[:, 0]
        return poisson.logpmf(data[:, None], params[None, :, RATE])

    def complete_log_likelihood_batch(self, params: np.ndarray, x, zs) -> np.ndarray:
        """
        ``log pi_{z_1} + sum_i log f(x_i | lambda_{z_i}) + sum_{i>=2} log w_{z_{i-1}, z_i}``
        for every row of a B x n allocation array.
        """
        params = self.validate(params)
        logf = self.log_component_densities(params, x)
        n, K = logf.shape
        zs = np.atleast_2d(self._check_labels(zs, K))
        if zs.shape[1] != n:
            raise DimensionError(f"allocations have length {zs.shape[1]}, data has n = {n}")
        with np.errstate(divide="ignore"):
            log_pi = np.log(self.stationary(params))
            log_w = np.log(self.transition_matrix(params))
        emission = logf[np.arange(n)[None, :], zs].sum(axis=1)
        moves = log_w[zs[:, :-1], zs[:, 1:]].sum(axis=1)
        return log_pi[zs[:, 0]] + emission + moves

    def permute_parameters(self, params: np.ndarray, perm) -> np.ndarray:
        """Reorder states: rows and the transition columns both follow ``perm``."""
        index = as_index(perm)
        columns = np.concatenate([[RATE], 1 + index])
        return np.asarray(params)[index][:, columns]

    def permute_chain(self, data: np.ndarray, perm) -> np.ndarray:
        index = as_index(perm)
        columns = np.concatenate([[RATE], 1 + index])
        return np.asarray(data)[:, index][:, :, columns]
