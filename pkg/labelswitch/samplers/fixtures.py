"""
Fixture Types and Presets
=========================

Truth specifications for data simulation, the fixture chain bundle
produced by the Gibbs samplers, and named presets at desk scale.
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..core.chains import AllocationChain, ClassificationChain, Dataset, ParameterChain, check_compatible
from ..models import BivariateNormalMixture, PoissonHMM, UnivariateNormalMixture, get_model
from ..models.base import ModelFamily
from ..pipeline.clustering import select_map_pivot
from ..utils.errors import DimensionError, UsageError
from ..utils.parallel import map_chunks


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator; every random draw in the package goes through one of these."""
    return np.random.Generator(np.random.PCG64(seed))


def categorical(rng: np.random.Generator, probs: np.ndarray) -> np.ndarray:
    """One draw per row of an n x K probability matrix, by inverse CDF."""
    cum = np.cumsum(probs, axis=1)
    u = rng.random(probs.shape[0]) * cum[:, -1]
    return np.minimum((cum < u[:, None]).sum(axis=1), probs.shape[1] - 1)


def check_run_length(iterations: int, burn: int) -> None:
    if burn < 0 or iterations <= burn:
        raise UsageError(f"need iterations > burn >= 0, got iterations={iterations}, burn={burn}")


@dataclass(frozen=True, eq=False)
class TruthSpec:
    """
    Data-generating configuration.

    Attributes:
        kind: Model family kind
        K: Number of components or states
        params: K x J true parameters in the family layout
        n: Number of observations
    """

    kind: str
    K: int
    params: np.ndarray
    n: int

    def __post_init__(self):
        model = get_model(self.kind, self.K)
        object.__setattr__(self, "kind", model.kind)
        object.__setattr__(self, "params", model.validate(self.params))
        if self.n < 1:
            raise DimensionError(f"need n >= 1 observations, got {self.n}")

    @property
    def model(self) -> ModelFamily:
        return get_model(self.kind, self.K)


@dataclass(frozen=True, eq=False)
class FixtureChain:
    """
    MCMC output of a fixture sampler, with everything the methods consume.

    ``map_index`` is 0-based.
    """

    mcmc: ParameterChain
    z: AllocationChain
    p: ClassificationChain
    map_index: int
    x: Dataset
    z_true: Optional[np.ndarray] = None
    seed: int = 0
    kind: str = UnivariateNormalMixture.kind

    def __post_init__(self):
        check_compatible(mcmc=self.mcmc, z=self.z, p=self.p, x=self.x)
        if not 0 <= self.map_index < self.mcmc.m:
            raise DimensionError(f"map index {self.map_index + 1} outside 1..{self.mcmc.m}")
        if self.z_true is not None and np.asarray(self.z_true).shape != (self.x.n,):
            raise DimensionError(f"true allocation must have length n = {self.x.n}")

    @property
    def model(self) -> ModelFamily:
        return get_model(self.kind, self.mcmc.K)

    @property
    def zpivot(self) -> np.ndarray:
        return self.z.data[self.map_index]

    @property
    def prapivot(self) -> np.ndarray:
        return self.mcmc.data[self.map_index]


def assemble_chain(
    model: ModelFamily,
    draws: np.ndarray,
    allocations: np.ndarray,
    x: Dataset,
    seed: int,
    z_true: Optional[np.ndarray] = None,
    threads: int = 1,
) -> FixtureChain:
    """Add classification probabilities and the complete-MAP index to stored draws."""
    K = draws.shape[1]
    mcmc = ParameterChain(draws)
    z = AllocationChain(allocations, K)

    def work(chunk):
        return [model.classification_probabilities(draws[t], x) for t in chunk]

    p = ClassificationChain(np.array(map_chunks(work, mcmc.m, threads)))
    map_index = select_map_pivot(model, mcmc, z, x, threads)
    return FixtureChain(mcmc, z, p, map_index, x, z_true, seed, model.kind)


@dataclass(frozen=True)
class FixturePreset:
    """A truth specification together with sampler settings."""

    name: str
    truth: TruthSpec
    fit_K: int
    iterations: int
    burn: int
    description: str = ""


def _circle(radius: float, count: int, step: float) -> np.ndarray:
    angles = np.arange(count) * step
    return radius * np.column_stack([np.cos(angles), np.sin(angles)])


def _presets() -> Dict[str, FixturePreset]:
    unit = np.tile(np.eye(2), (4, 1, 1))
    wide = np.concatenate([np.tile(np.eye(2), (8, 1, 1)), 4.0 * np.eye(2)[None]], axis=0)
    bivariate_2_means = np.vstack([_circle(6.0, 8, np.pi / 8), [[0.0, 0.0]]])
    sticky = np.array([
        [0.95, 0.04, 0.01],
        [0.10, 0.85, 0.05],
        [0.10, 0.20, 0.70],
    ])
    presets = [
        FixturePreset(
            "separated-normal",
            TruthSpec(UnivariateNormalMixture.kind, 3,
                      UnivariateNormalMixture.pack([-5.0, 0.0, 5.0], [1.0, 1.0, 1.0], [1 / 3, 1 / 3, 1 / 3]), 100),
            fit_K=3, iterations=1100, burn=100,
            description="Three unit-variance normals at -5, 0 and 5",
        ),
        FixturePreset(
            "fishery-like",
            TruthSpec(UnivariateNormalMixture.kind, 4,
                      UnivariateNormalMixture.pack([3.3, 5.2, 7.4, 9.8], [0.15, 0.4, 0.7, 1.5], [0.1, 0.45, 0.3, 0.15]),
                      256),
            fit_K=5, iterations=1100, burn=100,
            description="Length-frequency style data with four age groups, fitted with five components",
        ),
        FixturePreset(
            "bivariate-1",
            TruthSpec(BivariateNormalMixture.kind, 4,
                      BivariateNormalMixture.pack(_circle(2.5, 4, np.pi / 4), unit, np.full(4, 0.25)), 100),
            fit_K=4, iterations=2200, burn=200,
            description="Four unit-covariance bivariate normals on a radius 2.5 arc",
        ),
        FixturePreset(
            "bivariate-2",
            TruthSpec(BivariateNormalMixture.kind, 9,
                      BivariateNormalMixture.pack(bivariate_2_means, wide, np.r_[np.full(8, 0.1), 0.2]), 280),
            fit_K=9, iterations=3000, burn=1000,
            description="Eight bivariate normals on a radius 6 arc plus a wide central component",
        ),
        FixturePreset(
            "lamb-like",
            TruthSpec(PoissonHMM.kind, 3, PoissonHMM.pack([0.05, 1.2, 4.0], sticky), 240),
            fit_K=4, iterations=2000, burn=1000,
            description="Count series dominated by a near-zero intensity, fitted with four states",
        ),
    ]
    return {preset.name: preset for preset in presets}


PRESETS: Dict[str, FixturePreset] = _presets()


def get_preset(name: str) -> FixturePreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise UsageError(f"unknown preset '{name}'. Available: {', '.join(PRESETS)}") from None
