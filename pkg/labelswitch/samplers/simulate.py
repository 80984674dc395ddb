"""
Data simulation from a truth specification, and preset fixture runs.
"""

from typing import Optional, Tuple, Union

import numpy as np

from .fixtures import FixtureChain, FixturePreset, TruthSpec, categorical, get_preset, make_rng
from .gibbs_bivariate import gibbs_bivariate_normal_mixture
from .gibbs_hmm import gibbs_poisson_hmm
from .gibbs_normal import gibbs_normal_mixture
from ..core.chains import Dataset
from ..models import BivariateNormalMixture, PoissonHMM, UnivariateNormalMixture
from ..models.normal import MEAN, VARIANCE, WEIGHT
from ..utils.errors import ModelError
from ..utils.logging_setup import get_logger

logger = get_logger("samplers.simulate")


def _hmm_path(rng: np.random.Generator, pi: np.ndarray, w: np.ndarray, n: int) -> np.ndarray:
    cum_w = np.cumsum(w, axis=1)
    u = rng.random(n)
    z = np.empty(n, dtype=np.int64)
    z[0] = min(int((np.cumsum(pi) < u[0] * pi.sum()).sum()), len(pi) - 1)
    for i in range(1, n):
        row = cum_w[z[i - 1]]
        z[i] = min(int((row < u[i] * row[-1]).sum()), len(pi) - 1)
    return z


def simulate_mixture_data(truth: TruthSpec, seed: int) -> Tuple[Dataset, np.ndarray]:
    """
    Draw allocations and observations from a truth specification.

    Mixtures draw allocations independently from the weights; the Poisson
    hidden Markov model starts from its stationary distribution and follows
    the transition matrix.

    Returns:
        Tuple of (data, 0-based true allocations)
    """
    rng = make_rng(seed)
    params = truth.params
    n, K = truth.n, truth.K

    if truth.kind == UnivariateNormalMixture.kind:
        z = categorical(rng, np.tile(params[:, WEIGHT], (n, 1)))
        x = rng.normal(params[z, MEAN], np.sqrt(params[z, VARIANCE]))
    elif truth.kind == BivariateNormalMixture.kind:
        z = categorical(rng, np.tile(params[:, -1], (n, 1)))
        chol = np.linalg.cholesky(BivariateNormalMixture.covariances(params))
        noise = rng.standard_normal((n, 2))
        x = BivariateNormalMixture.means(params)[z] + np.einsum("nij,nj->ni", chol[z], noise)
    elif truth.kind == PoissonHMM.kind:
        model = truth.model
        z = _hmm_path(rng, model.stationary(params), PoissonHMM.transition_matrix(params), n)
        x = rng.poisson(params[z, 0]).astype(np.float64)
    else:
        raise ModelError(f"no simulator for model kind '{truth.kind}'")

    logger.debug(f"Simulated n = {n} observations from a {K}-component {truth.kind}")
    return Dataset(x), z.astype(np.int64)


def simulate_fixture(
    preset: Union[str, FixturePreset],
    seed: int,
    iterations: Optional[int] = None,
    burn: Optional[int] = None,
    fit_K: Optional[int] = None,
    threads: int = 1,
) -> FixtureChain:
    """
    Simulate data for a preset and run the matching Gibbs sampler.

    Data and sampler use independent streams spawned from ``seed``.
    """
    preset = get_preset(preset) if isinstance(preset, str) else preset
    data_seed, chain_seed = np.random.SeedSequence(seed).spawn(2)
    x, z_true = simulate_mixture_data(preset.truth, data_seed)

    samplers = {
        UnivariateNormalMixture.kind: gibbs_normal_mixture,
        BivariateNormalMixture.kind: gibbs_bivariate_normal_mixture,
        PoissonHMM.kind: gibbs_poisson_hmm,
    }
    sampler = samplers[preset.truth.kind]
    chain = sampler(
        x,
        fit_K or preset.fit_K,
        iterations or preset.iterations,
        preset.burn if burn is None else burn,
        chain_seed,
        threads=threads,
    )
    logger.info(f"Preset {preset.name}: m = {chain.mcmc.m}, complete-MAP iteration {chain.map_index + 1}")
    return FixtureChain(chain.mcmc, chain.z, chain.p, chain.map_index, chain.x, z_true, seed, chain.kind)
