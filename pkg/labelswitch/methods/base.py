"""
Method Output and Sweep Loop
============================

Every relabelling method returns a :class:`MethodOutput`. The iterative
methods (Stephens, ECR iterative versions) share :func:`run_sweeps`, which
starts from identity permutations and alternates a sweep function until
the objective stops improving.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..core.chains import PermutationSet
from ..utils.errors import UsageError


@dataclass
class MethodOutput:
    """
    Result of one relabelling method.

    Attributes:
        permutations: One permutation per iteration (storage convention)
        objective_trace: Total objective after each accepted sweep
        iterations_used: Number of sweeps evaluated
        converged: False only when the iteration cap stopped the loop
        pivot: Final allocation pivot (ECR variants, data-based reference)
        estimate: Final parameter estimate (SJW)
        extras: Method-specific diagnostics
    """

    permutations: PermutationSet
    objective_trace: List[float] = field(default_factory=list)
    iterations_used: int = 1
    converged: bool = True
    pivot: Optional[np.ndarray] = None
    estimate: Optional[np.ndarray] = None
    extras: Dict[str, Any] = field(default_factory=dict)


Sweep = Callable[[PermutationSet], Tuple[PermutationSet, float]]


def run_sweeps(
    sweep: Sweep,
    m: int,
    K: int,
    thr: float,
    max_iter: int,
    maximize: bool,
    logger: logging.Logger,
) -> Tuple[PermutationSet, List[float], int, bool]:
    """
    Iterate ``sweep`` from identity permutations.

    A sweep that worsens the objective is discarded and ends the loop; one
    that improves it by less than ``thr`` is kept and ends the loop. The
    returned trace is therefore monotone.

    Returns:
        Tuple of (permutations, objective trace, sweeps evaluated, converged)
    """
    if thr <= 0:
        raise UsageError(f"threshold must be positive, got {thr!r}")
    if max_iter < 1:
        raise UsageError(f"iteration cap must be at least 1, got {max_iter!r}")

    perms = PermutationSet.identity(m, K)
    previous = -np.inf if maximize else np.inf
    trace: List[float] = []
    converged = False
    sweeps = 0

    while sweeps < max_iter:
        sweeps += 1
        candidate, objective = sweep(perms)
        gain = objective - previous if maximize else previous - objective
        logger.debug(f"Sweep {sweeps}: objective {objective!r}, gain {gain!r}")
        if gain < 0:
            logger.debug(f"Sweep {sweeps} worsened the objective; keeping previous permutations")
            converged = True
            break
        perms = candidate
        trace.append(objective)
        previous = objective
        if gain < thr:
            converged = True
            break

    return perms, trace, sweeps, converged
