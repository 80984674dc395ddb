import itertools
import time

import numpy as np
import pytest

from labelswitch.assignment import (
    brute_force_assignment,
    solve_assignment_batch,
    solve_max_assignment,
    solve_min_assignment,
)
from labelswitch.utils.errors import DimensionError, LabelSwitchError


def test_diagonal_minimum_is_identity():
    cost = np.array([[0.0, 5.0, 5.0], [5.0, 0.0, 5.0], [5.0, 5.0, 0.0]])
    result = solve_min_assignment(cost)
    assert result.perm.mapping == (0, 1, 2)
    assert result.objective == 0.0


def test_maximize_picks_largest_entries():
    score = np.array([[1.0, 9.0], [8.0, 2.0]])
    result = solve_max_assignment(score)
    assert result.perm.mapping == (1, 0)
    assert result.objective == 17.0


def test_all_ties_return_identity():
    result = solve_min_assignment(np.ones((4, 4)))
    assert result.perm.mapping == (0, 1, 2, 3)


def test_tie_break_is_lexicographic():
    tied = np.array([[0.0, 0.0, 5.0], [0.0, 0.0, 5.0], [5.0, 5.0, 0.0]])
    assert solve_min_assignment(tied).perm.mapping == (0, 1, 2)
    derangements = np.array([[9.0, 0.0, 0.0], [0.0, 9.0, 0.0], [0.0, 0.0, 9.0]])
    assert solve_min_assignment(derangements).perm.mapping == (1, 2, 0)


@pytest.mark.parametrize("K", [2, 3, 4, 5])
def test_matches_brute_force_on_random_matrices(K, rng):
    for _ in range(100):
        cost = rng.normal(size=(K, K))
        fast = solve_min_assignment(cost)
        slow = brute_force_assignment(cost)
        assert fast.perm == slow.perm
        assert fast.objective == slow.objective


@pytest.mark.parametrize("K", [3, 4, 5])
def test_matches_brute_force_with_many_ties(K, rng):
    for _ in range(100):
        score = rng.integers(0, 3, size=(K, K)).astype(float)
        fast = solve_max_assignment(score)
        slow = brute_force_assignment(score, maximize=True)
        assert fast.perm == slow.perm
        assert fast.objective == slow.objective


def test_large_instances_are_fast(rng):
    start = time.perf_counter()
    result = solve_min_assignment(rng.random((100, 100)))
    assert time.perf_counter() - start < 1.0
    assert sorted(result.perm.mapping) == list(range(100))


def test_rejects_non_square():
    with pytest.raises(DimensionError):
        solve_min_assignment(np.zeros((2, 3)))


def test_rejects_non_finite():
    cost = np.zeros((2, 2))
    cost[1, 0] = np.inf
    with pytest.raises(LabelSwitchError, match=r"\(2, 1\)"):
        solve_min_assignment(cost)


def test_brute_force_limit():
    with pytest.raises(LabelSwitchError):
        brute_force_assignment(np.zeros((9, 9)))


def test_batch_is_thread_count_independent(rng):
    costs = rng.integers(0, 4, size=(50, 4, 4)).astype(float)
    serial = solve_assignment_batch(costs, maximize=True, threads=1)
    threaded = solve_assignment_batch(costs, maximize=True, threads=4)
    np.testing.assert_array_equal(serial[0], threaded[0])
    np.testing.assert_array_equal(serial[1], threaded[1])
    for t in range(50):
        assert tuple(serial[0][t]) == solve_max_assignment(costs[t]).perm.mapping


def test_permutation_objective_is_exact_sum():
    cost = np.arange(9, dtype=float).reshape(3, 3)
    for perm in itertools.permutations(range(3)):
        masked = np.full((3, 3), 100.0)
        masked[range(3), perm] = cost[range(3), perm]
        assert solve_min_assignment(masked).objective == sum(cost[k, l] for k, l in enumerate(perm))
