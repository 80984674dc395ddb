"""
Shared fixtures: seeded generators and small fixture chains built without
running a sampler, so that most tests stay fast.
"""

import numpy as np
import pytest

from labelswitch.samplers import assemble_chain, get_preset, inject_label_switching, make_rng
from labelswitch.samplers.fixtures import categorical
from labelswitch.samplers.simulate import simulate_mixture_data


def jittered_chain(preset: str = "separated-normal", m: int = 40, seed: int = 11, spread: float = 0.05):
    """
    Draws scattered tightly around the true parameters, with allocations
    drawn from the classification probabilities of each draw.
    """
    truth = get_preset(preset).truth
    model = truth.model
    x, z_true = simulate_mixture_data(truth, seed)
    rng = make_rng(seed + 1)
    draws = np.repeat(truth.params[None], m, axis=0)
    draws[:, :, 0] += rng.normal(0.0, spread, (m, truth.K))
    allocations = np.empty((m, x.n), dtype=np.int64)
    for t in range(m):
        allocations[t] = categorical(rng, model.classification_probabilities(draws[t], x))
    return assemble_chain(model, draws, allocations, x, seed, z_true=z_true)


@pytest.fixture
def rng():
    return make_rng(20240917)


@pytest.fixture(scope="session")
def clean_chain():
    return jittered_chain()


@pytest.fixture(scope="session")
def switched(clean_chain):
    """(switched chain, applied permutations)"""
    return inject_label_switching(clean_chain, seed=3)


@pytest.fixture(scope="session")
def bivariate_chain():
    return jittered_chain("bivariate-1", m=30, seed=5, spread=0.02)
