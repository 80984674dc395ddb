import numpy as np
import pytest

from labelswitch.core import AllocationChain, ClassificationChain, Dataset, ParameterChain, PermutationSet
from labelswitch.methods import (
    all_permutations,
    cluster_statistics,
    contingency_tables,
    data_based,
    ecr,
    ecr_iterative_1,
    ecr_iterative_2,
    linear_combination_constraint,
    ordering_constraint,
    ordering_constraint_all,
    permutation_weights,
    pra,
    sjw,
    stephens,
    user_perm,
)
from labelswitch.methods.base import run_sweeps
from labelswitch.methods.stephens import stephens_costs
from labelswitch.models import UnivariateNormalMixture
from labelswitch.utils.errors import DimensionError, LabelSwitchError, UsageError
from labelswitch.utils.logging_setup import get_logger


def undone(applied: PermutationSet, found: PermutationSet) -> bool:
    """True when relabelling the switched chain leaves one constant relabelling of the original."""
    combined = np.take_along_axis(applied.rows, found.rows, axis=1)
    return bool((combined == combined[0]).all())


def test_ordering_constraint_sorts_each_iteration(switched):
    chain, _ = switched
    out = ordering_constraint(chain.mcmc, 0)
    means = np.take_along_axis(chain.mcmc.data[:, :, 0], out.permutations.rows, axis=1)
    assert (np.diff(means, axis=1) >= 0).all()


def test_ordering_constraint_is_stable_on_ties():
    mcmc = ParameterChain(np.array([[[1.0], [0.0], [1.0]]]))
    np.testing.assert_array_equal(ordering_constraint(mcmc, 0).permutations.rows, [[1, 0, 2]])


def test_ordering_constraint_index_checked(switched):
    with pytest.raises(UsageError, match="outside 1..3"):
        ordering_constraint(switched[0].mcmc, 3)


def test_ordering_constraint_all_gives_one_output_per_type(switched):
    outputs = ordering_constraint_all(switched[0].mcmc)
    assert [o.extras["constraint"] for o in outputs] == [0, 1, 2]


def test_linear_combination_constraint():
    mcmc = ParameterChain(np.array([[[1.0, 0.0], [0.0, 1.0], [2.0, 2.0]]]))
    out = linear_combination_constraint(mcmc, [1.0, -2.0])
    # values 1, -2, -2
    np.testing.assert_array_equal(out.permutations.rows, [[1, 2, 0]])
    with pytest.raises(DimensionError):
        linear_combination_constraint(mcmc, [1.0])


def test_aic_undoes_switching_for_separated_means(switched):
    chain, applied = switched
    assert undone(applied, ordering_constraint(chain.mcmc, 0).permutations)


def test_stephens_undoes_switching(switched):
    chain, applied = switched
    out = stephens(chain.p)
    assert out.converged
    assert undone(applied, out.permutations)
    assert all(b <= a for a, b in zip(out.objective_trace, out.objective_trace[1:]))


def stephens_loss(probs: np.ndarray, rows: np.ndarray) -> float:
    relabelled = np.take_along_axis(probs, rows[:, None, :], axis=2)
    q = relabelled.mean(axis=0)
    return float((relabelled * np.log(relabelled / q)).sum())


def test_stephens_reaches_exhaustive_minimum(rng):
    K = 3
    base = rng.dirichlet(np.ones(K), size=8)
    cycle = np.array([2, 0, 1])
    probs = np.stack([base, base[:, cycle]])

    out = stephens(ClassificationChain(probs))
    rows = out.permutations.rows
    np.testing.assert_array_equal(rows[0], np.arange(K))
    np.testing.assert_array_equal(rows[1], np.argsort(cycle))
    relabelled = np.take_along_axis(probs, rows[:, None, :], axis=2)
    np.testing.assert_array_equal(relabelled[1], relabelled[0])

    perms = all_permutations(K)
    best = min(stephens_loss(probs, np.stack([a, b])) for a in perms for b in perms)
    assert stephens_loss(probs, rows) == pytest.approx(best, abs=1e-12)
    assert out.objective_trace[-1] == pytest.approx(best, abs=1e-12)


def test_stephens_costs_are_zero_for_identical_probabilities(rng):
    p = rng.dirichlet(np.ones(3), size=(1, 10))
    costs = stephens_costs(p, p[0], 1e-300)
    np.testing.assert_allclose(np.diag(costs[0]), 0.0, atol=1e-12)


def test_pra_undoes_switching(switched):
    chain, applied = switched
    out = pra(chain.mcmc, chain.prapivot)
    assert undone(applied, out.permutations)
    np.testing.assert_array_equal(out.permutations.rows[chain.map_index], [0, 1, 2])


def test_pra_pivot_shape_checked(switched):
    with pytest.raises(DimensionError):
        pra(switched[0].mcmc, np.zeros((2, 3)))


def test_contingency_tables_count_pairs():
    z = np.array([[0, 1, 1, 2]])
    pivot = np.array([0, 0, 1, 2])
    tables = contingency_tables(z, pivot, 3)
    np.testing.assert_array_equal(tables[0], [[1, 1, 0], [0, 1, 0], [0, 0, 1]])


def test_ecr_identity_on_pivot_iteration(switched):
    chain, applied = switched
    out = ecr(chain.z, chain.zpivot, chain.mcmc.K)
    assert undone(applied, out.permutations)
    np.testing.assert_array_equal(out.permutations.rows[chain.map_index], [0, 1, 2])
    assert out.extras["matches"][chain.map_index] == chain.x.n


def test_ecr_on_unswitched_chain_is_identity(clean_chain):
    out = ecr(clean_chain.z, clean_chain.zpivot, 3)
    assert out.permutations.is_identity()


def test_ecr_iterative_1_undoes_switching(switched):
    chain, applied = switched
    out = ecr_iterative_1(chain.z, 3)
    assert out.converged
    assert undone(applied, out.permutations)
    assert all(b >= a for a, b in zip(out.objective_trace, out.objective_trace[1:]))


def test_ecr_iterative_2_undoes_switching(switched):
    chain, applied = switched
    out = ecr_iterative_2(chain.z, chain.p, 3)
    assert undone(applied, out.permutations)
    assert out.pivot.shape == (chain.x.n,)


def test_ecr_iterative_2_checks_dimensions(switched):
    chain, _ = switched
    with pytest.raises(DimensionError):
        ecr_iterative_2(chain.z, ClassificationChain(chain.p.data[:, :5]), 3)


def test_iteration_cap_reports_not_converged(switched):
    chain, _ = switched
    out = stephens(chain.p, thr=1e9, max_iter=1)
    assert out.iterations_used == 1
    out = ecr_iterative_1(chain.z, 3, thr=1e-300, max_iter=1)
    assert out.iterations_used == 1


def test_run_sweeps_rejects_bad_settings():
    logger = get_logger("tests")
    with pytest.raises(UsageError):
        run_sweeps(lambda perms: (perms, 0.0), 2, 2, 0.0, 5, True, logger)
    with pytest.raises(UsageError):
        run_sweeps(lambda perms: (perms, 0.0), 2, 2, 1e-6, 0, True, logger)


def test_run_sweeps_discards_worsening_sweep():
    values = iter([5.0, 7.0, 6.0])
    swapped = PermutationSet(np.array([[1, 0], [1, 0]]))

    def sweep(perms):
        return swapped, next(values)

    perms, trace, sweeps, converged = run_sweeps(sweep, 2, 2, 1e-6, 10, True, get_logger("tests"))
    assert trace == [5.0, 7.0]
    assert sweeps == 3
    assert converged


def test_run_sweeps_hits_cap():
    values = iter(range(100))
    perms, trace, sweeps, converged = run_sweeps(
        lambda p: (p, float(next(values))), 1, 2, 0.5, 4, True, get_logger("tests")
    )
    assert sweeps == 4 and not converged


def test_all_permutations_lexicographic():
    np.testing.assert_array_equal(all_permutations(3)[:3], [[0, 1, 2], [0, 2, 1], [1, 0, 2]])
    assert len(all_permutations(4)) == 24


def test_permutation_weights_rows_sum_to_one(switched):
    chain, _ = switched
    g = permutation_weights(chain.model, chain.prapivot, chain.z, chain.x)
    assert g.shape == (chain.mcmc.m, 6)
    np.testing.assert_allclose(g.sum(axis=1), 1.0, atol=1e-12)


def test_permutation_weights_follow_relabelled_estimate(rng):
    model = UnivariateNormalMixture(2)
    estimate = UnivariateNormalMixture.pack([-3.0, 3.0], [1.0, 1.5], [0.4, 0.6])
    x = Dataset(rng.normal(0.0, 3.0, size=12))
    z = AllocationChain(rng.integers(0, 2, size=(8, 12)), 2)
    g = permutation_weights(model, estimate, z, x)
    swapped = permutation_weights(model, model.permute_parameters(estimate, (1, 0)), z, x)
    np.testing.assert_allclose(swapped, g[:, ::-1], rtol=1e-12, atol=1e-15)


def test_sjw_undoes_switching(switched):
    chain, applied = switched
    out = sjw(chain.mcmc, chain.z, chain.x, chain.model, init_index=chain.map_index)
    assert undone(applied, out.permutations)
    assert out.estimate.shape == (3, 3)
    assert out.extras["probabilities"].shape == (chain.mcmc.m, 6)


def test_sjw_refuses_large_K():
    K = 7
    params = UnivariateNormalMixture.pack(np.arange(K, dtype=float), np.ones(K), np.full(K, 1 / K))
    mcmc = ParameterChain(params[None])
    z = AllocationChain(np.zeros((1, 3), dtype=int), K)
    with pytest.raises(LabelSwitchError, match="K <= 6"):
        sjw(mcmc, z, Dataset(np.zeros(3)), UnivariateNormalMixture(K))


def test_sjw_init_index_checked(switched):
    chain, _ = switched
    with pytest.raises(UsageError):
        sjw(chain.mcmc, chain.z, chain.x, chain.model, init_index=chain.mcmc.m)


def test_cluster_statistics_fallbacks():
    x = Dataset(np.array([0.0, 2.0, 10.0]))
    centers, scales = cluster_statistics(x, np.array([0, 0, 1]), 3)
    assert centers[0, 0] == 1.0
    assert centers[1, 0] == 10.0
    assert centers[2, 0] == pytest.approx(4.0)
    # singleton and empty clusters use the global standard deviation
    assert scales[1, 0] == pytest.approx(np.std([0.0, 2.0, 10.0], ddof=1))
    assert scales[2, 0] == scales[1, 0]


def test_data_based_undoes_switching(switched):
    chain, applied = switched
    out = data_based(chain.z, chain.x, 3, reference=chain.zpivot)
    assert undone(applied, out.permutations)
    assert out.extras["centers"].shape == (3, 1)


def test_data_based_default_reference(switched):
    chain, applied = switched
    out = data_based(chain.z, chain.x, 3)
    assert undone(applied, out.permutations)


def test_user_perm_checks_shape():
    perms = np.array([[1, 0], [0, 1]])
    assert user_perm(perms, m=2, K=2).permutations.m == 2
    with pytest.raises(DimensionError):
        user_perm(perms, m=3)


def test_methods_are_thread_count_independent(switched):
    chain, _ = switched
    for run in (
        lambda threads: stephens(chain.p, threads=threads),
        lambda threads: ecr_iterative_1(chain.z, 3, threads=threads),
        lambda threads: sjw(chain.mcmc, chain.z, chain.x, chain.model, chain.map_index, threads=threads),
    ):
        assert run(1).permutations == run(3).permutations
