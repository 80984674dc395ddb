"""
Samplers Module for labelswitch
===============================

Desk-scale fixture generation: data simulation, Gibbs samplers for the
three model families and a label-switch injector.
"""

from .fixtures import TruthSpec, FixtureChain, FixturePreset, PRESETS, get_preset, make_rng, assemble_chain
from .gibbs_normal import NormalMixturePrior, gibbs_normal_mixture
from .gibbs_bivariate import NormalWishartPrior, gibbs_bivariate_normal_mixture
from .gibbs_hmm import PoissonHMMPrior, gibbs_poisson_hmm
from .simulate import simulate_mixture_data, simulate_fixture
from .inject import inject_label_switching

__all__ = [
    "TruthSpec",
    "FixtureChain",
    "FixturePreset",
    "PRESETS",
    "get_preset",
    "make_rng",
    "assemble_chain",
    "NormalMixturePrior",
    "gibbs_normal_mixture",
    "NormalWishartPrior",
    "gibbs_bivariate_normal_mixture",
    "PoissonHMMPrior",
    "gibbs_poisson_hmm",
    "simulate_mixture_data",
    "simulate_fixture",
    "inject_label_switching",
]
