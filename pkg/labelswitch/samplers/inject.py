"""
Label-switch injector: relabels every iteration of a fixture chain with an
independent uniformly random permutation, consistently across parameters,
classification probabilities and allocations.
"""

from typing import Tuple

import numpy as np

from .fixtures import FixtureChain, make_rng
from ..core.chains import AllocationChain, ClassificationChain, ParameterChain, PermutationSet
from ..utils.errors import UsageError
from ..utils.logging_setup import get_logger

logger = get_logger("samplers.inject")


def inject_label_switching(
    chain: FixtureChain, seed, switch_probability: float = 1.0
) -> Tuple[FixtureChain, PermutationSet]:
    """
    Apply sigma_t to iteration t of the chain.

    Parameters become ``sigma_t xi_t`` (the family's own permutation action),
    probability columns are reindexed by ``sigma_t`` and allocations are
    relabelled with ``sigma_t^-1``, so every complete likelihood is
    unchanged. Each iteration is switched with probability
    ``switch_probability`` and left alone otherwise.

    Returns:
        Tuple of (switched chain, applied permutations); relabelling the
        switched chain with the inverse permutations restores the original
    """
    if not 0.0 <= switch_probability <= 1.0:
        raise UsageError(f"switch probability must lie in [0, 1], got {switch_probability!r}")
    rng = make_rng(seed)
    m, K = chain.mcmc.m, chain.mcmc.K
    sigmas = np.array([rng.permutation(K) for _ in range(m)], dtype=np.int64).reshape(m, K)
    keep = rng.random(m) >= switch_probability
    sigmas[keep] = np.arange(K)
    applied = PermutationSet(sigmas)

    model = chain.model
    mcmc = np.empty_like(chain.mcmc.data)
    for t in range(m):
        mcmc[t] = model.permute_parameters(chain.mcmc.data[t], sigmas[t])
    p = np.take_along_axis(chain.p.data, sigmas[:, None, :], axis=2)
    z = np.take_along_axis(applied.inverse().rows, chain.z.data, axis=1)

    logger.debug(f"Injected {int((~keep).sum())} label switches into {m} iterations")
    switched = FixtureChain(
        ParameterChain(mcmc),
        AllocationChain(z, K),
        ClassificationChain(p),
        chain.map_index,
        chain.x,
        chain.z_true,
        chain.seed,
        chain.kind,
    )
    return switched, applied
