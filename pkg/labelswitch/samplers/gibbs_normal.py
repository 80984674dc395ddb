"""
Data-augmentation Gibbs sampler for univariate normal mixtures.

Priors (independent, data-scaled, permutation invariant):
    mu_k      ~ N(mean(x), var(x))
    sigma2_k  ~ InvGamma(shape, scale)   with shape 2, scale 0.5 var(x) / K
    w         ~ Dirichlet(alpha, ..., alpha) with alpha 1
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fixtures import FixtureChain, assemble_chain, categorical, check_run_length, make_rng
from ..core.chains import Dataset
from ..models import UnivariateNormalMixture
from ..utils.errors import DimensionError
from ..utils.logging_setup import get_logger

logger = get_logger("samplers.gibbs_normal")


@dataclass(frozen=True)
class NormalMixturePrior:
    mean: float
    mean_variance: float
    shape: float
    scale: float
    alpha: float = 1.0

    @classmethod
    def from_data(cls, x: np.ndarray, K: int) -> "NormalMixturePrior":
        spread = float(np.var(x)) or 1.0
        return cls(float(np.mean(x)), spread, 2.0, 0.5 * spread / K)


def gibbs_normal_mixture(
    x,
    K: int,
    iterations: int,
    burn: int,
    seed,
    prior: Optional[NormalMixturePrior] = None,
    threads: int = 1,
) -> FixtureChain:
    """
    Run the sampler and keep the draws after ``burn``.

    Raises:
        DimensionError: When there are fewer observations than components
        UsageError: When ``iterations <= burn``
    """
    check_run_length(iterations, burn)
    data = x if isinstance(x, Dataset) else Dataset(x)
    if data.d != 1:
        raise DimensionError(f"univariate sampler needs d = 1, got d = {data.d}")
    values = data.x[:, 0]
    n = data.n
    if n < K:
        raise DimensionError(f"degenerate data: n = {n} observations for K = {K} components")

    prior = prior or NormalMixturePrior.from_data(values, K)
    model = UnivariateNormalMixture(K)
    rng = make_rng(seed)

    means = np.quantile(values, (np.arange(K) + 0.5) / K)
    variances = np.full(K, prior.mean_variance / K)
    weights = np.full(K, 1.0 / K)

    kept = iterations - burn
    draws = np.empty((kept, K, 3))
    allocations = np.empty((kept, n), dtype=np.int64)

    for it in range(iterations):
        params = UnivariateNormalMixture.pack(means, variances, weights)
        z = categorical(rng, model.classification_probabilities(params, data))

        counts = np.bincount(z, minlength=K)
        sums = np.bincount(z, weights=values, minlength=K)
        weights = rng.dirichlet(prior.alpha + counts)

        precision = 1.0 / prior.mean_variance + counts / variances
        centre = (prior.mean / prior.mean_variance + sums / variances) / precision
        means = rng.normal(centre, np.sqrt(1.0 / precision))

        squares = np.bincount(z, weights=(values - means[z]) ** 2, minlength=K)
        variances = 1.0 / rng.gamma(prior.shape + 0.5 * counts, 1.0 / (prior.scale + 0.5 * squares))

        if it >= burn:
            draws[it - burn] = UnivariateNormalMixture.pack(means, variances, weights)
            allocations[it - burn] = z
        if (it + 1) % 500 == 0:
            logger.debug(f"Normal mixture sampler: iteration {it + 1}/{iterations}")

    return assemble_chain(model, draws, allocations, data, seed, threads=threads)
