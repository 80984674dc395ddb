"""
Gibbs sampler for the Poisson hidden Markov model.

Priors: lambda_k ~ Gamma(1, 1 / mean(x)) and independent Dirichlet(1, ..., 1)
transition rows. Allocations are updated site by site from their full
conditionals given both neighbours; sites of one parity are conditionally
independent, so the even sites are drawn jointly and then the odd sites.
The transition update ignores the dependence of the initial-state
probability on w, which is negligible for series of moderate length.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from .fixtures import FixtureChain, assemble_chain, categorical, check_run_length, make_rng
from ..core.chains import Dataset
from ..models import PoissonHMM
from ..utils.errors import DimensionError
from ..utils.logging_setup import get_logger

logger = get_logger("samplers.gibbs_hmm")


@dataclass(frozen=True)
class PoissonHMMPrior:
    shape: float
    rate: float
    alpha: float = 1.0

    @classmethod
    def from_data(cls, x: np.ndarray) -> "PoissonHMMPrior":
        return cls(1.0, 1.0 / max(float(np.mean(x)), 0.1))


def _update_states(rng, z, log_f, log_w, log_pi):
    n = z.size
    for parity in (0, 1):
        idx = np.arange(parity, n, 2)
        left = np.where((idx > 0)[:, None], log_w[z[np.maximum(idx - 1, 0)]], log_pi[None, :])
        right = np.where((idx < n - 1)[:, None], log_w[:, z[np.minimum(idx + 1, n - 1)]].T, 0.0)
        logits = log_f[idx] + left + right
        probs = np.exp(logits - logsumexp(logits, axis=1, keepdims=True))
        z[idx] = categorical(rng, probs)
    return z


def gibbs_poisson_hmm(
    x,
    K: int,
    iterations: int,
    burn: int,
    seed,
    prior: Optional[PoissonHMMPrior] = None,
    threads: int = 1,
) -> FixtureChain:
    """
    Run the sampler and keep the draws after ``burn`` in the J = K + 1 layout.

    Raises:
        ModelError: On negative or non-integer counts
    """
    check_run_length(iterations, burn)
    model = PoissonHMM(K)
    data = x if isinstance(x, Dataset) else Dataset(x)
    counts_x = model.check_data(data)[:, 0]
    n = data.n
    if n < 2:
        raise DimensionError(f"a hidden Markov chain needs n >= 2 observations, got {n}")

    prior = prior or PoissonHMMPrior.from_data(counts_x)
    rng = make_rng(seed)

    rates = np.quantile(counts_x, (np.arange(K) + 0.5) / K) + 0.1 * (np.arange(K) + 1)
    w = np.full((K, K), 0.3 / K) + 0.7 * np.eye(K)
    z = np.abs(counts_x[:, None] - rates[None, :]).argmin(axis=1)

    kept = iterations - burn
    draws = np.empty((kept, K, K + 1))
    allocations = np.empty((kept, n), dtype=np.int64)

    for it in range(iterations):
        params = PoissonHMM.pack(rates, w)
        log_f = model.log_component_densities(params, data)
        with np.errstate(divide="ignore"):
            log_pi = np.log(model.stationary(params))
            log_w = np.log(w)
        z = _update_states(rng, z, log_f, log_w, log_pi)

        occupancy = np.bincount(z, minlength=K)
        totals = np.bincount(z, weights=counts_x, minlength=K)
        rates = rng.gamma(prior.shape + totals, 1.0 / (prior.rate + occupancy))

        moves = np.bincount(z[:-1] * K + z[1:], minlength=K * K).reshape(K, K)
        w = np.array([rng.dirichlet(prior.alpha + row) for row in moves])

        if it >= burn:
            draws[it - burn] = PoissonHMM.pack(rates, w)
            allocations[it - burn] = z
        if (it + 1) % 500 == 0:
            logger.debug(f"Poisson HMM sampler: iteration {it + 1}/{iterations}")

    return assemble_chain(model, draws, allocations, data, seed, threads=threads)
