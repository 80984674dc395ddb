"""
Gibbs sampler for bivariate normal mixtures with a normal-Wishart prior:

    mu_k | Lambda_k ~ N(mu0, (beta Lambda_k)^-1)
    Lambda_k        ~ Wishart(W, nu)
    w               ~ Dirichlet(1, ..., 1)

Defaults: mu0 = mean(x), beta = 1, nu = 10, W = S^-1 / nu where S is the
pooled within-cluster covariance of a k-means partition, so the prior mean
of each precision matrix is the within-cluster precision rather than the
precision of the whole sample. The chain starts from the same partition.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.cluster.vq import kmeans2
from scipy.stats import wishart

from .fixtures import FixtureChain, assemble_chain, categorical, check_run_length, make_rng
from ..core.chains import Dataset
from ..models import BivariateNormalMixture
from ..utils.errors import DimensionError
from ..utils.logging_setup import get_logger

logger = get_logger("samplers.gibbs_bivariate")


def kmeans_partition(x: np.ndarray, K: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """k-means++ centroids and labels, drawn from ``rng``."""
    centroids, labels = kmeans2(x, K, iter=20, minit="++", seed=rng)
    return centroids, labels.astype(np.int64)


def pooled_covariance(x: np.ndarray, labels: np.ndarray, K: int) -> np.ndarray:
    """Within-cluster covariance pooled over the clusters of a partition."""
    d = x.shape[1]
    scatter = np.zeros((d, d))
    for k in range(K):
        members = x[labels == k]
        if len(members):
            centred = members - members.mean(axis=0)
            scatter += centred.T @ centred
    dof = max(len(x) - K, 1)
    pooled = scatter / dof
    if np.linalg.eigvalsh(pooled)[0] <= 0.0:
        pooled = np.cov(x, rowvar=False) / K
    return pooled


@dataclass(frozen=True, eq=False)
class NormalWishartPrior:
    mu0: np.ndarray
    beta: float
    nu: float
    W: np.ndarray
    alpha: float = 1.0

    @classmethod
    def from_data(cls, x: np.ndarray, within: Optional[np.ndarray] = None) -> "NormalWishartPrior":
        """
        Data-scaled prior; ``within`` is the within-cluster covariance (the
        whole-sample covariance when omitted).
        """
        within = np.cov(x, rowvar=False) if within is None else within
        nu = 10.0
        return cls(x.mean(axis=0), 1.0, nu, np.linalg.inv(within) / nu)


def _symmetric(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def gibbs_bivariate_normal_mixture(
    x,
    K: int,
    iterations: int,
    burn: int,
    seed,
    prior: Optional[NormalWishartPrior] = None,
    threads: int = 1,
) -> FixtureChain:
    """Run the sampler and keep the draws after ``burn`` in the J = 6 layout."""
    check_run_length(iterations, burn)
    data = x if isinstance(x, Dataset) else Dataset(x)
    if data.d != 2:
        raise DimensionError(f"bivariate sampler needs d = 2, got d = {data.d}")
    points = data.x
    n = data.n
    if n < K:
        raise DimensionError(f"degenerate data: n = {n} observations for K = {K} components")

    model = BivariateNormalMixture(K)
    rng = make_rng(seed)

    means, labels = kmeans_partition(points, K, rng)
    within = pooled_covariance(points, labels, K)
    prior = prior or NormalWishartPrior.from_data(points, within)
    W_inv = np.linalg.inv(prior.W)

    covs = np.tile(within, (K, 1, 1))
    weights = (np.bincount(labels, minlength=K) + 1.0) / (n + K)

    kept = iterations - burn
    draws = np.empty((kept, K, 6))
    allocations = np.empty((kept, n), dtype=np.int64)

    for it in range(iterations):
        params = BivariateNormalMixture.pack(means, covs, weights)
        z = categorical(rng, model.classification_probabilities(params, data))
        counts = np.bincount(z, minlength=K)
        weights = rng.dirichlet(prior.alpha + counts)

        for k in range(K):
            members = points[z == k]
            n_k = counts[k]
            beta_n = prior.beta + n_k
            nu_n = prior.nu + n_k
            if n_k:
                xbar = members.mean(axis=0)
                scatter = (members - xbar).T @ (members - xbar)
                shift = (xbar - prior.mu0)[:, None]
                scale_inv = W_inv + scatter + (prior.beta * n_k / beta_n) * (shift @ shift.T)
                mu_n = (prior.beta * prior.mu0 + n_k * xbar) / beta_n
            else:
                scale_inv = W_inv
                mu_n = prior.mu0
            precision = wishart.rvs(df=nu_n, scale=_symmetric(np.linalg.inv(scale_inv)), random_state=rng)
            covs[k] = _symmetric(np.linalg.inv(precision))
            means[k] = rng.multivariate_normal(mu_n, covs[k] / beta_n)

        if it >= burn:
            draws[it - burn] = BivariateNormalMixture.pack(means, covs, weights)
            allocations[it - burn] = z
        if (it + 1) % 500 == 0:
            logger.debug(f"Bivariate mixture sampler: iteration {it + 1}/{iterations}")

    return assemble_chain(model, draws, allocations, data, seed, threads=threads)
