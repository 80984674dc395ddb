"""
Univariate normal mixture, parameter columns (mean, variance, weight).
"""

import numpy as np
from scipy.stats import norm

from .base import ModelFamily, check_simplex
from ..utils.errors import ModelError

MEAN, VARIANCE, WEIGHT = 0, 1, 2


class UnivariateNormalMixture(ModelFamily):
    """K-component mixture of univariate normals."""

    kind = "univariate-normal-mixture"
    data_dim = 1

    def parameter_count(self, K: int) -> int:
        return 3

    @staticmethod
    def pack(means, variances, weights) -> np.ndarray:
        return np.column_stack([means, variances, weights]).astype(np.float64)

    def validate(self, params: np.ndarray) -> np.ndarray:
        params = self._check_layout(params)
        bad = params[:, VARIANCE] <= 0
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise ModelError(f"variance of component {k + 1} must be positive, got {params[k, VARIANCE]!r}")
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
        data = self.check_data(x)[:, 0]
        scale = np.sqrt(params[:, VARIANCE])
        return norm.logpdf(data[:, None], loc=params[None, :, MEAN], scale=scale[None, :])
