"""
Models Module for labelswitch
=============================

Likelihood families used for classification probabilities, complete
likelihoods and pivot selection.
"""

from .base import ModelFamily
from .normal import UnivariateNormalMixture
from .bivariate import BivariateNormalMixture
from .poisson_hmm import PoissonHMM
from .stationary import stationary_distribution
from .registry import MODEL_FAMILIES, get_model, register_model

__all__ = [
    "ModelFamily",
    "UnivariateNormalMixture",
    "BivariateNormalMixture",
    "PoissonHMM",
    "stationary_distribution",
    "MODEL_FAMILIES",
    "get_model",
    "register_model",
]
