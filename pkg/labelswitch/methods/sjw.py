"""
Probabilistic relabelling (EM over permutations).

Every iteration t carries a probability ``g[t, tau]`` for each of the K!
permutations, proportional to the complete likelihood of the current
parameter estimate and the allocations relabelled by ``tau``. The M-step
replaces the estimate with the ``g``-weighted average of the reordered
parameter draws. Permutations are enumerated in lexicographic order, so
argmax ties resolve to the lexicographically smallest permutation.
"""

import itertools
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from .base import MethodOutput
from ..config import RELABEL_DEFAULTS
from ..core.chains import AllocationChain, Dataset, ParameterChain, PermutationSet, check_compatible
from ..models.base import ModelFamily
from ..utils.errors import DimensionError, LabelSwitchError, ModelError, UsageError
from ..utils.logging_setup import get_logger
from ..utils.parallel import map_chunks

logger = get_logger("methods.sjw")


def all_permutations(K: int) -> np.ndarray:
    """All K! permutations as a (K!) x K array in lexicographic order."""
    return np.array(list(itertools.permutations(range(K))), dtype=np.int64).reshape(-1, K)


def permutation_weights(
    model: ModelFamily,
    estimate: np.ndarray,
    z: AllocationChain,
    x: Dataset,
    taus: Optional[np.ndarray] = None,
    threads: int = 1,
) -> np.ndarray:
    """
    E-step: m x (K!) matrix of permutation probabilities.

    ``g[t, tau]`` is proportional to ``exp(L_c(estimate, x, tau^-1(z[t])))``
    and normalized per row with log-sum-exp.

    Raises:
        ModelError: When every permutation has zero likelihood at some iteration
    """
    K = estimate.shape[0]
    taus = all_permutations(K) if taus is None else taus
    inverses = np.argsort(taus, axis=1)

    def work(chunk):
        rows = []
        for t in chunk:
            ll = model.complete_log_likelihood_batch(estimate, x, inverses[:, z.data[t]])
            if not np.isfinite(ll).any():
                raise ModelError(f"complete likelihood is zero under every permutation at iteration {t + 1}")
            rows.append(np.exp(ll - logsumexp(ll)))
        return rows

    return np.array(map_chunks(work, z.m, threads))


def sjw(
    mcmc: ParameterChain,
    z: AllocationChain,
    x: Dataset,
    model: ModelFamily,
    init_index: int = 0,
    thr: Optional[float] = None,
    max_iter: Optional[int] = None,
    threads: int = 1,
) -> MethodOutput:
    """
    Probabilistic relabelling.

    Args:
        mcmc: Parameter chain, the source of the initial estimate and the M-step
        z: Allocation chain
        x: Observed data
        model: Family providing the complete likelihood and the parameter permutation action
        init_index: 0-based iteration whose parameters start the EM
        thr: Stop when the estimate changes by less than this in max-norm
        max_iter: Iteration cap

    Returns:
        MethodOutput whose ``estimate`` is the final parameter estimate and whose
        ``extras["probabilities"]`` holds the final m x K! weights
    """
    K = mcmc.K
    if K > RELABEL_DEFAULTS.sjw_max_components:
        raise LabelSwitchError(
            f"SJW enumerates K! permutations and is limited to K <= {RELABEL_DEFAULTS.sjw_max_components}, got K = {K}"
        )
    check_compatible(mcmc=mcmc, z=z, x=x)
    if not 0 <= init_index < mcmc.m:
        raise UsageError(f"SJW initial iteration {init_index + 1} outside 1..{mcmc.m}")
    if z.n != x.n:
        raise DimensionError(f"allocations have n = {z.n}, data has n = {x.n}")
    thr = RELABEL_DEFAULTS.thr_sjw if thr is None else thr
    max_iter = RELABEL_DEFAULTS.max_sjw if max_iter is None else max_iter

    taus = all_permutations(K)
    estimate = model.validate(mcmc.data[init_index]).copy()
    trace = []
    converged = False
    iteration = 0

    while iteration < max_iter:
        iteration += 1
        g = permutation_weights(model, estimate, z, x, taus, threads)

        updated = np.zeros_like(estimate)
        for index, tau in enumerate(taus):
            updated += np.einsum("t,tkj->kj", g[:, index], model.permute_chain(mcmc.data, tau))
        updated /= mcmc.m

        change = float(np.abs(updated - estimate).max())
        estimate = updated
        trace.append(change)
        logger.debug(f"SJW iteration {iteration}: estimate change {change!r}")
        if change < thr:
            converged = True
            break

    g = permutation_weights(model, estimate, z, x, taus, threads)
    perms = PermutationSet(taus[g.argmax(axis=1)])
    logger.info(f"SJW finished after {iteration} iterations (converged={converged})")
    return MethodOutput(
        perms,
        trace,
        iteration,
        converged,
        estimate=estimate,
        extras={"probabilities": g, "permutation_list": taus},
    )
