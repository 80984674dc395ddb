"""
Registry of likelihood families, keyed by kind.

Short aliases (``normal``, ``bivariate-normal``) are accepted wherever a
kind is looked up.
"""

from typing import Dict, Optional, Type

from .base import ModelFamily
from .bivariate import BivariateNormalMixture
from .normal import UnivariateNormalMixture
from .poisson_hmm import PoissonHMM
from ..utils.errors import ModelError

MODEL_FAMILIES: Dict[str, Type[ModelFamily]] = {
    UnivariateNormalMixture.kind: UnivariateNormalMixture,
    BivariateNormalMixture.kind: BivariateNormalMixture,
    PoissonHMM.kind: PoissonHMM,
}

ALIASES = {
    "normal": UnivariateNormalMixture.kind,
    "bivariate-normal": BivariateNormalMixture.kind,
}


def register_model(kind: str, cls: Type[ModelFamily]) -> None:
    """Register a user-defined family so that it can be selected by name."""
    if not issubclass(cls, ModelFamily):
        raise ModelError(f"{cls!r} does not implement the model contract")
    MODEL_FAMILIES[kind] = cls


def get_model(kind: str, K: Optional[int] = None) -> ModelFamily:
    """
    Instantiate a registered family.

    Raises:
        ModelError: For an unknown kind
    """
    key = ALIASES.get(kind, kind)
    try:
        cls = MODEL_FAMILIES[key]
    except KeyError:
        known = ", ".join(sorted(set(MODEL_FAMILIES) | set(ALIASES)))
        raise ModelError(f"unknown model '{kind}'. Available: {known}") from None
    return cls(K)
