"""
Kullback-Leibler relabelling of classification probabilities.

Each sweep averages the relabelled probabilities into ``q`` and then, for
every iteration, picks the permutation minimizing
``sum_k KL(p_{., tau_k} || q_{., k})``.
"""

from typing import Optional

import numpy as np
from scipy.special import xlogy

from .base import MethodOutput, run_sweeps
from ..assignment import solve_assignment_batch
from ..config import RELABEL_DEFAULTS
from ..core.chains import ClassificationChain, PermutationSet
from ..utils.logging_setup import get_logger

logger = get_logger("methods.stephens")


def stephens_costs(p: np.ndarray, q: np.ndarray, floor: float) -> np.ndarray:
    """
    m x K x K costs with ``cost[t, k, l] = sum_i p[t,i,l] log(p[t,i,l] / q[i,k])``.

    Zero probabilities contribute nothing; ``q`` is floored before the log.
    """
    entropy = xlogy(p, p).sum(axis=1)
    log_q = np.log(np.maximum(q, floor))
    cross = np.einsum("til,ik->tkl", p, log_q)
    return entropy[:, None, :] - cross


def stephens(
    p: ClassificationChain,
    thr: Optional[float] = None,
    max_iter: Optional[int] = None,
    threads: int = 1,
) -> MethodOutput:
    thr = RELABEL_DEFAULTS.thr_ste if thr is None else thr
    max_iter = RELABEL_DEFAULTS.max_ste if max_iter is None else max_iter
    probs = p.data
    floor = RELABEL_DEFAULTS.stephens_q_floor

    def sweep(perms: PermutationSet):
        relabelled = np.take_along_axis(probs, perms.rows[:, None, :], axis=2)
        q = relabelled.mean(axis=0)
        rows, objectives = solve_assignment_batch(stephens_costs(probs, q, floor), maximize=False, threads=threads)
        # the loss is invariant under one relabelling of every row; fix the first row to identity
        rows = rows[:, np.argsort(rows[0], kind="stable")]
        return PermutationSet(rows), float(objectives.sum())

    perms, trace, sweeps, converged = run_sweeps(sweep, p.m, p.K, thr, max_iter, maximize=False, logger=logger)
    logger.info(f"STEPHENS finished after {sweeps} sweeps (converged={converged})")
    q = np.take_along_axis(probs, perms.rows[:, None, :], axis=2).mean(axis=0)
    return MethodOutput(perms, trace, sweeps, converged, extras={"q": q})
