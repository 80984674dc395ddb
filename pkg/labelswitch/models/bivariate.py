"""
Bivariate normal mixture.

Parameter columns: (mu1, mu2, sigma11, sigma22, sigma12, weight), that is
J = d + d(d+1)/2 + 1 with d = 2.
"""

import numpy as np
from scipy.stats import multivariate_normal

from .base import ModelFamily, check_simplex
from ..utils.errors import ModelError

MU1, MU2, S11, S22, S12, WEIGHT = range(6)


class BivariateNormalMixture(ModelFamily):
    """K-component mixture of bivariate normals with full covariances."""

    kind = "bivariate-normal-mixture"
    data_dim = 2

    def parameter_count(self, K: int) -> int:
        return 6

    @staticmethod
    def pack(means, covariances, weights) -> np.ndarray:
        """Build a K x 6 parameter matrix from K x 2 means, K x 2 x 2 covariances and K weights."""
        means = np.asarray(means, dtype=np.float64)
        cov = np.asarray(covariances, dtype=np.float64)
        return np.column_stack([
            means[:, 0], means[:, 1], cov[:, 0, 0], cov[:, 1, 1], cov[:, 0, 1], np.asarray(weights, dtype=np.float64)
        ])

    @staticmethod
    def means(params: np.ndarray) -> np.ndarray:
        return np.asarray(params)[:, [MU1, MU2]]

    @staticmethod
    def covariances(params: np.ndarray) -> np.ndarray:
        params = np.asarray(params)
        cov = np.empty((params.shape[0], 2, 2))
        cov[:, 0, 0] = params[:, S11]
        cov[:, 1, 1] = params[:, S22]
        cov[:, 0, 1] = cov[:, 1, 0] = params[:, S12]
        return cov

    def validate(self, params: np.ndarray) -> np.ndarray:
        params = self._check_layout(params)
        det = params[:, S11] * params[:, S22] - params[:, S12] ** 2
        bad = (params[:, S11] <= 0) | (det <= 0)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise ModelError(f"covariance of component {k + 1} is not positive definite")
        check_simplex(params[:, WEIGHT], "mixture weights")
        return params

    def normalize_weights(self, params: np.ndarray) -> np.ndarray:
        params = np.array(params, dtype=np.float64)
        params[:, WEIGHT] = params[:, WEIGHT] / params[:, WEIGHT].sum()
        return params

    def log_weights(self, params: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(params[:, WEIGHT])

    def log_component_densities(self, params: np.ndarray, x) -> np.ndarray:
        data = self.check_data(x)
        n = data.shape[0]
        means = self.means(params)
        covs = self.covariances(params)
        out = np.empty((n, params.shape[0]))
        for k in range(params.shape[0]):
            out[:, k] = np.reshape(multivariate_normal.logpdf(data, mean=means[k], cov=covs[k]), n)
        return out
