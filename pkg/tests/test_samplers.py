import numpy as np
import pytest

from labelswitch.core import relabel_allocations
from labelswitch.models import BivariateNormalMixture, PoissonHMM, UnivariateNormalMixture
from labelswitch.samplers import (
    NormalWishartPrior,
    PRESETS,
    PoissonHMMPrior,
    TruthSpec,
    gibbs_bivariate_normal_mixture,
    gibbs_normal_mixture,
    gibbs_poisson_hmm,
    get_preset,
    inject_label_switching,
    make_rng,
    simulate_fixture,
    simulate_mixture_data,
)
from labelswitch.samplers.gibbs_bivariate import kmeans_partition, pooled_covariance
from labelswitch.utils.errors import DimensionError, ModelError, UsageError


def test_presets_are_valid():
    assert set(PRESETS) == {"separated-normal", "fishery-like", "bivariate-1", "bivariate-2", "lamb-like"}
    assert get_preset("bivariate-2").truth.K == 9
    with pytest.raises(UsageError, match="unknown preset"):
        get_preset("galaxy")


def test_truth_spec_validates_parameters():
    with pytest.raises(ModelError):
        TruthSpec("normal", 2, UnivariateNormalMixture.pack([0.0, 1.0], [1.0, 1.0], [0.5, 0.6]), 10)
    with pytest.raises(DimensionError):
        TruthSpec("normal", 2, UnivariateNormalMixture.pack([0.0, 1.0], [1.0, 1.0], [0.5, 0.5]), 0)


def test_generator_is_pinned():
    assert make_rng(5).random() == np.random.Generator(np.random.PCG64(5)).random()


def test_simulated_label_frequencies_match_weights():
    truth = TruthSpec("normal", 3, UnivariateNormalMixture.pack([0.0, 5.0, 10.0], [1.0, 1.0, 1.0], [0.2, 0.3, 0.5]), 20000)
    _, z = simulate_mixture_data(truth, 1)
    freq = np.bincount(z, minlength=3) / truth.n
    sigma = np.sqrt(truth.params[:, 2] * (1 - truth.params[:, 2]) / truth.n)
    assert (np.abs(freq - truth.params[:, 2]) < 4 * sigma).all()


def test_simulation_is_deterministic():
    truth = get_preset("bivariate-1").truth
    x1, z1 = simulate_mixture_data(truth, 9)
    x2, z2 = simulate_mixture_data(truth, 9)
    np.testing.assert_array_equal(x1.x, x2.x)
    np.testing.assert_array_equal(z1, z2)


def test_hmm_data_are_counts():
    x, z = simulate_mixture_data(get_preset("lamb-like").truth, 2)
    assert (x.x == np.round(x.x)).all() and (x.x >= 0).all()
    assert z.shape == (240,)


def test_normal_sampler_draws_are_valid():
    x, _ = simulate_mixture_data(get_preset("separated-normal").truth, 3)
    chain = gibbs_normal_mixture(x, 3, iterations=60, burn=10, seed=4)
    assert chain.mcmc.data.shape == (50, 3, 3)
    assert (chain.mcmc.data[:, :, 1] > 0).all()
    np.testing.assert_allclose(chain.mcmc.data[:, :, 2].sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(chain.p.data.sum(axis=2), 1.0, atol=1e-12)
    assert 0 <= chain.map_index < 50


def test_normal_sampler_is_deterministic_across_threads():
    x, _ = simulate_mixture_data(get_preset("separated-normal").truth, 3)
    a = gibbs_normal_mixture(x, 3, iterations=30, burn=5, seed=4, threads=1)
    b = gibbs_normal_mixture(x, 3, iterations=30, burn=5, seed=4, threads=3)
    np.testing.assert_array_equal(a.mcmc.data, b.mcmc.data)
    np.testing.assert_array_equal(a.z.data, b.z.data)
    np.testing.assert_array_equal(a.p.data, b.p.data)


def test_bivariate_sampler_draws_are_valid():
    x, _ = simulate_mixture_data(get_preset("bivariate-1").truth, 3)
    chain = gibbs_bivariate_normal_mixture(x, 4, iterations=30, burn=5, seed=6)
    model = BivariateNormalMixture(4)
    for t in range(chain.mcmc.m):
        model.validate(chain.mcmc.data[t])


def test_hmm_sampler_draws_are_valid():
    x, _ = simulate_mixture_data(get_preset("lamb-like").truth, 3)
    chain = gibbs_poisson_hmm(x, 4, iterations=30, burn=5, seed=6)
    assert chain.mcmc.data.shape == (25, 4, 5)
    model = PoissonHMM(4)
    for t in range(chain.mcmc.m):
        model.validate(chain.mcmc.data[t])


def test_sampler_run_length_checked():
    with pytest.raises(UsageError):
        gibbs_normal_mixture(np.arange(10.0), 2, iterations=5, burn=5, seed=1)


def test_simulate_fixture_records_truth_and_seed():
    chain = simulate_fixture("separated-normal", seed=12, iterations=40, burn=10)
    assert chain.mcmc.m == 30
    assert chain.seed == 12
    assert chain.z_true.shape == (100,)
    again = simulate_fixture("separated-normal", seed=12, iterations=40, burn=10)
    np.testing.assert_array_equal(chain.mcmc.data, again.mcmc.data)


def test_injection_preserves_complete_likelihood(clean_chain):
    switched, applied = inject_label_switching(clean_chain, seed=21)
    model = clean_chain.model
    for t in range(clean_chain.mcmc.m):
        before = model.complete_log_likelihood(clean_chain.mcmc.data[t], clean_chain.x, clean_chain.z.data[t])
        after = model.complete_log_likelihood(switched.mcmc.data[t], switched.x, switched.z.data[t])
        assert abs(before - after) <= 1e-10 * max(1.0, abs(before))
    restored = relabel_allocations(switched.z, applied.inverse())
    np.testing.assert_array_equal(restored, clean_chain.z.data)


def test_injection_with_zero_probability_is_identity(clean_chain):
    switched, applied = inject_label_switching(clean_chain, seed=21, switch_probability=0.0)
    assert applied.is_identity()
    np.testing.assert_array_equal(switched.mcmc.data, clean_chain.mcmc.data)


def test_injection_probability_range(clean_chain):
    with pytest.raises(UsageError):
        inject_label_switching(clean_chain, seed=1, switch_probability=1.5)


def test_injection_of_hmm_moves_transitions():
    x, _ = simulate_mixture_data(get_preset("lamb-like").truth, 3)
    chain = gibbs_poisson_hmm(x, 3, iterations=12, burn=2, seed=6)
    switched, applied = inject_label_switching(chain, seed=2)
    model = chain.model
    for t in range(chain.mcmc.m):
        np.testing.assert_array_equal(switched.mcmc.data[t], model.permute_parameters(chain.mcmc.data[t], applied.rows[t]))
        before = model.complete_log_likelihood(chain.mcmc.data[t], chain.x, chain.z.data[t])
        after = model.complete_log_likelihood(switched.mcmc.data[t], switched.x, switched.z.data[t])
        assert after == pytest.approx(before, rel=1e-10, abs=1e-10)


def test_pooled_covariance_is_within_cluster_scale(rng):
    cov = np.array([[1.0, 0.4], [0.4, 0.5]])
    a = rng.multivariate_normal([-20.0, 0.0], cov, size=400)
    b = rng.multivariate_normal([20.0, 5.0], cov, size=400)
    x = np.vstack([a, b])
    labels = np.repeat([0, 1], 400)
    np.testing.assert_allclose(pooled_covariance(x, labels, 2), cov, atol=0.15)
    # the full-data covariance is dominated by the gap between the clusters
    assert np.cov(x, rowvar=False)[0, 0] > 100.0


def test_pooled_covariance_falls_back_when_clusters_are_degenerate():
    x = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 0.5]])
    within = pooled_covariance(x, np.arange(3), 3)
    assert np.linalg.eigvalsh(within)[0] > 0.0


def test_normal_wishart_prior_centres_on_within_covariance(rng):
    x = rng.normal(size=(50, 2))
    within = np.array([[0.5, 0.1], [0.1, 0.3]])
    prior = NormalWishartPrior.from_data(x, within)
    np.testing.assert_allclose(prior.nu * prior.W, np.linalg.inv(within))
    np.testing.assert_allclose(prior.mu0, x.mean(axis=0))


def test_kmeans_partition_uses_every_label(rng):
    x = np.vstack([rng.normal(c, 0.2, size=(30, 2)) for c in ([0, 0], [5, 0], [0, 5])])
    centroids, labels = kmeans_partition(x, 3, make_rng(4))
    assert centroids.shape == (3, 2)
    assert sorted(np.bincount(labels, minlength=3)) == [30, 30, 30]


def agreement_up_to_swap(z, truth):
    same = (z == truth).mean(axis=1)
    return np.maximum(same, 1.0 - same)


@pytest.mark.slow
def test_normal_sampler_separates_distant_groups():
    rng = make_rng(801)
    x = np.concatenate([rng.normal(-10.0, 1.0, 50), rng.normal(10.0, 1.0, 50)])
    truth = np.repeat([0, 1], 50)
    chain = gibbs_normal_mixture(x, 2, iterations=600, burn=100, seed=802)
    assert agreement_up_to_swap(chain.z.data, truth).min() >= 0.99


@pytest.mark.slow
def test_single_state_hmm_matches_conjugate_posterior():
    x = make_rng(811).poisson(4.0, size=200).astype(float)
    chain = gibbs_poisson_hmm(x, 1, iterations=4000, burn=0, seed=812)
    prior = PoissonHMMPrior.from_data(x)
    shape, rate = prior.shape + x.sum(), prior.rate + x.size
    draws = chain.mcmc.data[:, 0, 0]
    standard_error = np.sqrt(shape) / rate / np.sqrt(draws.size)
    assert abs(draws.mean() - shape / rate) < 4.0 * standard_error
    np.testing.assert_array_equal(chain.mcmc.data[:, 0, 1], 1.0)


@pytest.mark.slow
def test_two_state_hmm_recovers_hidden_states():
    sticky = np.array([[0.95, 0.05], [0.05, 0.95]])
    truth = TruthSpec(PoissonHMM.kind, 2, PoissonHMM.pack([0.1, 3.0], sticky), 240)
    x, z_true = simulate_mixture_data(truth, 821)
    chain = gibbs_poisson_hmm(x, 2, iterations=1500, burn=500, seed=822)
    # order the states by rate so that state 0 is the quiet one
    swapped = chain.mcmc.data[:, 0, 0] > chain.mcmc.data[:, 1, 0]
    aligned = np.where(swapped[:, None], 1 - chain.z.data, chain.z.data)
    modal = (aligned.mean(axis=0) > 0.5).astype(np.int64)
    assert (modal == z_true).mean() >= 0.85
