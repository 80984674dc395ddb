"""
Linear Assignment Solver
========================

Exact K x K assignment with a deterministic tie-break. The optimum value
comes from ``scipy.optimize.linear_sum_assignment``; the lexicographically
smallest optimal permutation is then fixed row by row, keeping a column
only when the best completion of the remaining rows still attains the
optimum.
"""

import itertools
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..config import RELABEL_DEFAULTS
from ..core.permutations import Permutation
from ..utils.errors import DimensionError, LabelSwitchError
from ..utils.parallel import map_chunks

BRUTE_FORCE_MAX_K = 8


@dataclass(frozen=True)
class AssignmentResult:
    """
    Optimal permutation and the attained objective.

    Attributes:
        perm: Row k is assigned column ``perm[k]``
        objective: ``sum_k cost[k][perm[k]]`` accumulated in row order
    """

    perm: Permutation
    objective: float


def _validate(cost) -> np.ndarray:
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise DimensionError(f"cost matrix must be square, got shape {cost.shape}")
    if cost.shape[0] < 1:
        raise DimensionError("cost matrix must be at least 1 x 1")
    if not np.isfinite(cost).all():
        r, c = (int(v) for v in np.argwhere(~np.isfinite(cost))[0])
        raise LabelSwitchError(f"non-finite cost entry at ({r + 1}, {c + 1})")
    return cost


def _tie_tolerance(cost: np.ndarray) -> float:
    scale = max(1.0, cost.shape[0] * float(np.abs(cost).max()))
    return RELABEL_DEFAULTS.assignment_tolerance * scale


def _objective(cost: np.ndarray, perm) -> float:
    total = 0.0
    for k, l in enumerate(perm):
        total += cost[k, l]
    return float(total)


def _lsa_value(cost: np.ndarray) -> Tuple[float, np.ndarray]:
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum()), cols


def _unique_optimum(cost: np.ndarray, cols: np.ndarray, optimum: float, tol: float) -> bool:
    # every other permutation avoids at least one edge of the optimum
    for k in range(cost.shape[0]):
        banned = cost.copy()
        banned[k, cols[k]] = np.inf
        value, _ = _lsa_value(banned)
        if value <= optimum + tol:
            return False
    return True


def _lexicographic_min(cost: np.ndarray) -> np.ndarray:
    K = cost.shape[0]
    optimum, cols = _lsa_value(cost)
    tol = _tie_tolerance(cost)
    if K == 1 or _unique_optimum(cost, cols, optimum, tol):
        return cols

    perm = cols.copy()
    free = list(range(K))
    fixed = 0.0
    for k in range(K):
        current = int(perm[k])
        for l in sorted(free):
            if l >= current:
                break
            rest_cols = [c for c in free if c != l]
            if k + 1 < K:
                rest_value, rest_assign = _lsa_value(cost[np.ix_(range(k + 1, K), rest_cols)])
            else:
                rest_value, rest_assign = 0.0, np.empty(0, dtype=np.int64)
            if fixed + cost[k, l] + rest_value <= optimum + tol:
                perm[k] = l
                perm[k + 1:] = np.asarray(rest_cols, dtype=np.int64)[rest_assign]
                break
        fixed += cost[k, perm[k]]
        free.remove(int(perm[k]))
    return perm


def solve_min_assignment(cost) -> AssignmentResult:
    """
    Minimize ``sum_k cost[k][perm[k]]`` over permutations.

    Among optimal permutations the lexicographically smallest is returned.

    Raises:
        LabelSwitchError: On non-finite entries
        DimensionError: On a non-square matrix
    """
    cost = _validate(cost)
    perm = _lexicographic_min(cost)
    return AssignmentResult(Permutation(tuple(perm.tolist())), _objective(cost, perm))


def solve_max_assignment(score) -> AssignmentResult:
    """Maximize ``sum_k score[k][perm[k]]`` by minimizing the negated scores."""
    score = _validate(score)
    perm = _lexicographic_min(-score)
    return AssignmentResult(Permutation(tuple(perm.tolist())), _objective(score, perm))


def brute_force_assignment(cost, maximize: bool = False) -> AssignmentResult:
    """
    Exhaustive search over all K! permutations, used as a test oracle.

    The first permutation in lexicographic order whose objective is within
    the tie tolerance of the optimum is returned.

    Raises:
        LabelSwitchError: When K > 8
    """
    cost = _validate(cost)
    K = cost.shape[0]
    if K > BRUTE_FORCE_MAX_K:
        raise LabelSwitchError(f"brute force limited to K <= {BRUTE_FORCE_MAX_K}, got K = {K}")

    signed = -cost if maximize else cost
    perms = list(itertools.permutations(range(K)))
    values = [_objective(signed, p) for p in perms]
    best = min(values)
    tol = _tie_tolerance(signed)
    chosen = next(p for p, v in zip(perms, values) if v <= best + tol)
    return AssignmentResult(Permutation(chosen), _objective(cost, chosen))


def solve_assignment_batch(costs, maximize: bool = False, threads: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """
    Solve m independent K x K problems.

    Args:
        costs: m x K x K array
        maximize: Maximize instead of minimize
        threads: Worker threads

    Returns:
        Tuple of (m x K permutation rows, m objectives)
    """
    costs = np.asarray(costs, dtype=np.float64)
    if costs.ndim != 3 or costs.shape[1] != costs.shape[2]:
        raise DimensionError(f"expected m x K x K costs, got shape {costs.shape}")
    m, K, _ = costs.shape
    solve = solve_max_assignment if maximize else solve_min_assignment

    def work(chunk):
        out = []
        for t in chunk:
            result = solve(costs[t])
            out.append((result.perm.mapping, result.objective))
        return out

    results = map_chunks(work, m, threads)
    perms = np.array([r[0] for r in results], dtype=np.int64).reshape(m, K)
    objectives = np.array([r[1] for r in results], dtype=np.float64)
    return perms, objectives
