"""
Relabelling Orchestrator
========================

Runs a user-ordered selection of relabelling methods on one set of MCMC
output, then derives single best clusterings, aligns every method to a
common reference (the first method, or the ground truth) and compares the
methods through a similarity matrix.
"""

import importlib
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from .clustering import (
    alignment_solution,
    cluster_frequencies,
    select_map_pivot,
    similarity_matrix,
    single_best_clustering,
)
from ..config import METHOD_REGISTRY, RELABEL_DEFAULTS
from ..core.chains import (
    AllocationChain,
    ClassificationChain,
    Dataset,
    ParameterChain,
    PermutationSet,
    check_compatible,
)
from ..methods.base import MethodOutput
from ..models.base import ModelFamily
from ..utils.errors import ConfigError, DimensionError, LabelRangeError, MissingInputError, UsageError
from ..utils.logging_setup import get_logger

logger = get_logger("pipeline.orchestrator")

ALL_CONSTRAINTS = "ALL"


@dataclass
class RunConfig:
    """
    Method selection and settings for one relabelling run.

    Labels, pivots and indices are 0-based.

    Attributes:
        methods: Method identifiers in execution order
        K: Component count; inferred from the inputs when omitted
        zpivot: One allocation pivot (n-vector) or several (d x n)
        prapivot: K x J parameter pivot for PRA
        constraint: Parameter type for AIC, or "ALL"
        ground_truth: True allocation used as alignment reference
        sjw_init: Initial iteration for SJW; the complete-MAP iteration when omitted
        user_perms: Permutation sets for USER-PERM
        model: Likelihood family for SJW and complete-MAP selection
    """

    methods: List[str]
    K: Optional[int] = None
    zpivot: Optional[np.ndarray] = None
    prapivot: Optional[np.ndarray] = None
    constraint: Union[int, str] = 0
    ground_truth: Optional[np.ndarray] = None
    thr_ecr: float = field(default_factory=lambda: RELABEL_DEFAULTS.thr_ecr)
    thr_ste: float = field(default_factory=lambda: RELABEL_DEFAULTS.thr_ste)
    thr_sjw: float = field(default_factory=lambda: RELABEL_DEFAULTS.thr_sjw)
    max_ecr: int = field(default_factory=lambda: RELABEL_DEFAULTS.max_ecr)
    max_ste: int = field(default_factory=lambda: RELABEL_DEFAULTS.max_ste)
    max_sjw: int = field(default_factory=lambda: RELABEL_DEFAULTS.max_sjw)
    sjw_init: Optional[int] = None
    user_perms: List[PermutationSet] = field(default_factory=list)
    model: Optional[ModelFamily] = None
    threads: int = field(default_factory=lambda: RELABEL_DEFAULTS.threads)

    def __post_init__(self):
        if not self.methods:
            raise ConfigError("at least one method must be selected")
        methods = [m.strip().upper() for m in self.methods]
        unknown = [m for m in methods if m not in METHOD_REGISTRY]
        if unknown:
            raise ConfigError(f"unknown method(s) {', '.join(unknown)}. Available: {', '.join(METHOD_REGISTRY)}")
        duplicated = sorted({m for m in methods if methods.count(m) > 1})
        if duplicated:
            raise ConfigError(f"method(s) selected more than once: {', '.join(duplicated)}")
        self.methods = methods

        if isinstance(self.constraint, str):
            if self.constraint.strip().upper() != ALL_CONSTRAINTS:
                raise ConfigError(f"constraint must be a parameter index or ALL, got {self.constraint!r}")
            self.constraint = ALL_CONSTRAINTS
        if self.zpivot is not None:
            self.zpivot = np.atleast_2d(np.asarray(self.zpivot, dtype=np.int64))
        for name in ("thr_ecr", "thr_ste", "thr_sjw"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        for name in ("max_ecr", "max_ste", "max_sjw"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1")
        self.threads = max(1, int(self.threads))


@dataclass
class RelabelResult:
    """
    Output of :func:`run`.

    Attributes:
        names: Output names in execution order (ECR-1, AIC-2, ... when expanded)
        outputs: Method outputs with permutations aligned to the reference
        clusters: f x n single best clusterings (None without allocations)
        similarity: f' x f' similarity matrix (None without allocations)
        similarity_labels: Row labels of the similarity matrix
        timings: Seconds spent in each method
        reference: Description of the alignment target
        K: Component count
    """

    names: List[str]
    outputs: Dict[str, MethodOutput]
    clusters: Optional[np.ndarray]
    similarity: Optional[np.ndarray]
    similarity_labels: List[str]
    timings: Dict[str, float]
    reference: str
    K: int

    @property
    def permutations(self) -> Dict[str, PermutationSet]:
        return {name: self.outputs[name].permutations for name in self.names}

    def frequencies(self) -> Optional[np.ndarray]:
        if self.clusters is None:
            return None
        return cluster_frequencies(self.clusters, self.K)

    def summary(self) -> Dict[str, Any]:
        """JSON-safe summary of the run (1-based where labels appear)."""
        methods = {}
        for name in self.names:
            out = self.outputs[name]
            methods[name] = {
                "iterations_used": int(out.iterations_used),
                "converged": bool(out.converged),
                "objective_trace": [float(v) for v in out.objective_trace],
                "seconds": float(self.timings[name]),
            }
        return {
            "methods": methods,
            "order": list(self.names),
            "K": int(self.K),
            "m": int(self.outputs[self.names[0]].permutations.m),
            "reference": self.reference,
            "similarity_labels": list(self.similarity_labels),
            "similarity": None if self.similarity is None else self.similarity.tolist(),
        }


@dataclass
class _Inputs:
    config: RunConfig
    mcmc: Optional[ParameterChain]
    z: Optional[AllocationChain]
    p: Optional[ClassificationChain]
    x: Optional[Dataset]
    K: Optional[int]
    map_index: Optional[int] = None

    def available(self) -> Dict[str, bool]:
        cfg = self.config
        return {
            "mcmc": self.mcmc is not None,
            "z": self.z is not None,
            "p": self.p is not None,
            "x": self.x is not None,
            "K": self.K is not None,
            "zpivot": cfg.zpivot is not None,
            "prapivot": cfg.prapivot is not None,
            "model": cfg.model is not None,
            "user_perms": bool(cfg.user_perms),
        }

    def complete_map_index(self) -> Optional[int]:
        cfg = self.config
        if self.map_index is None and None not in (cfg.model, self.mcmc, self.z, self.x):
            self.map_index = select_map_pivot(cfg.model, self.mcmc, self.z, self.x, cfg.threads)
        return self.map_index


def _infer_K(config: RunConfig, mcmc, z, p) -> Optional[int]:
    for source in (config.K, mcmc.K if mcmc is not None else None, p.K if p is not None else None):
        if source is not None:
            return int(source)
    return z.K if z is not None else None


def _numbered(prefix: str, count: int) -> List[str]:
    return [prefix] if count == 1 else [f"{prefix}-{i + 1}" for i in range(count)]


def _calls(method: str, inputs: _Inputs) -> List[Tuple[str, Dict[str, Any]]]:
    """Output names and keyword arguments for one selected method."""
    cfg = inputs.config
    threads = cfg.threads

    if method == "STEPHENS":
        return [(method, dict(p=inputs.p, thr=cfg.thr_ste, max_iter=cfg.max_ste, threads=threads))]
    if method == "PRA":
        return [(method, dict(mcmc=inputs.mcmc, pivot=cfg.prapivot, threads=threads))]
    if method == "ECR":
        names = _numbered(method, len(cfg.zpivot))
        return [
            (name, dict(z=inputs.z, zpivot=pivot, K=inputs.K, threads=threads))
            for name, pivot in zip(names, cfg.zpivot)
        ]
    if method == "ECR-ITERATIVE-1":
        return [(method, dict(z=inputs.z, K=inputs.K, thr=cfg.thr_ecr, max_iter=cfg.max_ecr, threads=threads))]
    if method == "ECR-ITERATIVE-2":
        return [(method, dict(
            z=inputs.z, p=inputs.p, K=inputs.K, thr=cfg.thr_ecr, max_iter=cfg.max_ecr, threads=threads
        ))]
    if method == "SJW":
        init = cfg.sjw_init if cfg.sjw_init is not None else inputs.complete_map_index()
        return [(method, dict(
            mcmc=inputs.mcmc, z=inputs.z, x=inputs.x, model=cfg.model, init_index=init,
            thr=cfg.thr_sjw, max_iter=cfg.max_sjw, threads=threads,
        ))]
    if method == "AIC":
        if cfg.constraint == ALL_CONSTRAINTS:
            return [(f"AIC-{s + 1}", dict(mcmc=inputs.mcmc, s=s)) for s in range(inputs.mcmc.J)]
        return [(method, dict(mcmc=inputs.mcmc, s=int(cfg.constraint)))]
    if method == "DATA-BASED":
        return [(method, dict(z=inputs.z, x=inputs.x, K=inputs.K, reference=_data_based_reference(inputs),
                              threads=threads))]
    if method == "USER-PERM":
        m = inputs.mcmc.m if inputs.mcmc is not None else (inputs.z.m if inputs.z is not None else None)
        names = _numbered(method, len(cfg.user_perms))
        return [(name, dict(perms=perms, m=m, K=inputs.K)) for name, perms in zip(names, cfg.user_perms)]
    raise ConfigError(f"unknown method {method}")


def _data_based_reference(inputs: _Inputs) -> Optional[np.ndarray]:
    index = inputs.complete_map_index()
    if index is not None:
        return inputs.z.data[index]
    if inputs.config.zpivot is not None:
        return inputs.config.zpivot[0]
    return None


def _resolve(method: str) -> Callable[..., MethodOutput]:
    entry = METHOD_REGISTRY[method]
    module = importlib.import_module(entry["module"])
    return getattr(module, entry["function"])


def _check_inputs(inputs: _Inputs) -> None:
    available = inputs.available()
    for method in inputs.config.methods:
        for name in METHOD_REGISTRY[method]["requires"]:
            if not available.get(name, False):
                raise MissingInputError(method, name)


def _check_pivots(inputs: _Inputs) -> None:
    cfg = inputs.config
    K = inputs.K
    n = inputs.z.n if inputs.z is not None else (inputs.x.n if inputs.x is not None else None)
    if cfg.zpivot is not None:
        if n is not None and cfg.zpivot.shape[1] != n:
            raise DimensionError(f"zpivot has length {cfg.zpivot.shape[1]}, expected n = {n}")
        if K is not None and (cfg.zpivot.min() < 0 or cfg.zpivot.max() >= K):
            raise LabelRangeError(f"zpivot labels must lie in 1..{K}")
    if cfg.ground_truth is not None:
        truth = np.asarray(cfg.ground_truth, dtype=np.int64)
        if n is not None and truth.shape != (n,):
            raise DimensionError(f"ground truth has shape {truth.shape}, expected ({n},)")
        if K is not None and truth.size and (truth.min() < 0 or truth.max() >= K):
            raise LabelRangeError(f"ground truth labels must lie in 1..{K}")
    if "AIC" in cfg.methods and cfg.constraint != ALL_CONSTRAINTS and inputs.mcmc is not None:
        if not 0 <= int(cfg.constraint) < inputs.mcmc.J:
            raise UsageError(f"constraint index {int(cfg.constraint) + 1} outside 1..{inputs.mcmc.J}")


def run(
    config: RunConfig,
    mcmc: Optional[ParameterChain] = None,
    z: Optional[AllocationChain] = None,
    p: Optional[ClassificationChain] = None,
    x: Optional[Dataset] = None,
) -> RelabelResult:
    """
    Execute the selected methods and compare their clusterings.

    Raises:
        MissingInputError: When a selected method lacks a required input
        DimensionError: When the inputs disagree in m, n or K
    """
    K = _infer_K(config, mcmc, z, p)
    if K is not None and mcmc is not None and mcmc.K != K:
        raise DimensionError(f"K = {K}, but the parameter chain has {mcmc.K} components")
    if K is not None and p is not None and p.K != K:
        raise DimensionError(f"K = {K}, but the classification chain has {p.K} components")
    if z is not None and K is not None and z.K != K:
        z = AllocationChain(z.data, K)
    check_compatible(mcmc=mcmc, z=z, p=p, x=x)

    inputs = _Inputs(config, mcmc, z, p, x, K)
    _check_inputs(inputs)
    _check_pivots(inputs)

    outputs: Dict[str, MethodOutput] = {}
    timings: Dict[str, float] = {}
    names: List[str] = []
    for method in config.methods:
        func = _resolve(method)
        for name, kwargs in _calls(method, inputs):
            start = time.perf_counter()
            output = func(**kwargs)
            timings[name] = time.perf_counter() - start
            outputs[name] = output
            names.append(name)
            logger.info(f"{name} finished in {timings[name]:.3f}s")

    K = K if K is not None else outputs[names[0]].permutations.K
    if z is None:
        logger.info("No allocations supplied; skipping clusterings and similarity")
        return RelabelResult(names, outputs, None, None, [], timings, "none", K)

    clusters = {name: single_best_clustering(z, outputs[name].permutations) for name in names}
    if config.ground_truth is not None:
        reference = np.asarray(config.ground_truth, dtype=np.int64)
        reference_name = "ground truth"
    else:
        reference = clusters[names[0]]
        reference_name = f"method {names[0]}"

    for name in names:
        solution = alignment_solution(clusters[name], reference, K)
        if not np.array_equal(solution.mapping, np.arange(K)):
            outputs[name].permutations = outputs[name].permutations.compose(solution)
            clusters[name] = single_best_clustering(z, outputs[name].permutations)

    rows = [clusters[name] for name in names]
    labels = list(names)
    if config.ground_truth is not None:
        rows.append(reference)
        labels.append("TRUE")
    similarity = similarity_matrix(rows, K)

    return RelabelResult(
        names,
        outputs,
        np.stack([clusters[name] for name in names]),
        similarity,
        labels,
        timings,
        reference_name,
        K,
    )
