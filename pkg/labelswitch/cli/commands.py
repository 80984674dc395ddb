"""
CLI Commands
============

The operations behind the ``relabel``, ``permute``, ``simulate``, ``inject``
and ``map-pivot`` subcommands. Each takes file paths and options, converts
1-based file contents to the 0-based library types, runs the library and
writes its outputs, returning a JSON-safe report. The MCP tools call the
same functions.
"""

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .arrays import read_array, write_array
from .config_file import read_config_file, write_config_file
from ..config import METHOD_REGISTRY, RELABEL_DEFAULTS
from ..core.chains import (
    AllocationChain,
    ClassificationChain,
    Dataset,
    ParameterChain,
    PermutationSet,
    relabel_allocations,
)
from ..models import get_model
from ..pipeline import RelabelResult, RunConfig, permute_mcmc, run, select_map_pivot
from ..samplers import FixtureChain, FixturePreset, TruthSpec, inject_label_switching, simulate_fixture
from ..samplers.fixtures import get_preset
from ..utils.errors import ConfigError, MissingInputError, UsageError
from ..utils.logging_setup import get_logger

logger = get_logger("cli.commands")

PathLike = Union[str, Path]
EXTENSION = ".lsa"

# Input name in the method registry -> command line flag
INPUT_FLAGS = {
    "z": "--z",
    "mcmc": "--mcmc",
    "p": "--p",
    "x": "--data",
    "zpivot": "--zpivot",
    "prapivot": "--prapivot",
    "model": "--model",
    "user_perms": "--user-perm",
}


def _split(value) -> List[str]:
    if value is None:
        return []
    if isinstance(value, str):
        value = [value]
    return [part.strip() for item in value for part in str(item).split(",") if part.strip()]


def _as_int(name: str, value) -> Optional[int]:
    if value is None or isinstance(value, int):
        return value
    try:
        return int(str(value).strip())
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {value!r}") from None


def _as_float(name: str, value) -> Optional[float]:
    if value is None or isinstance(value, float):
        return value
    try:
        return float(str(value).strip())
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {value!r}") from None


@dataclass
class CliConfig:
    """
    Paths and options for one ``relabel`` run, as given on the command line
    or in a configuration file. Labels and indices are 1-based.
    """

    methods: List[str] = field(default_factory=list)
    out_dir: Optional[str] = None
    z: Optional[str] = None
    mcmc: Optional[str] = None
    p: Optional[str] = None
    data: Optional[str] = None
    zpivot: Optional[str] = None
    prapivot: Optional[str] = None
    constraint: str = "1"
    ground_truth: Optional[str] = None
    model: Optional[str] = None
    K: Optional[int] = None
    sjw_init: Optional[int] = None
    thr_ecr: float = RELABEL_DEFAULTS.thr_ecr
    thr_ste: float = RELABEL_DEFAULTS.thr_ste
    thr_sjw: float = RELABEL_DEFAULTS.thr_sjw
    max_ecr: int = RELABEL_DEFAULTS.max_ecr
    max_ste: int = RELABEL_DEFAULTS.max_ste
    max_sjw: int = RELABEL_DEFAULTS.max_sjw
    user_perm: List[str] = field(default_factory=list)
    threads: int = RELABEL_DEFAULTS.threads
    seed: int = 0

    @classmethod
    def from_values(cls, values: Dict[str, Any]) -> "CliConfig":
        """
        Build a config from raw values (strings from a config file or typed
        values from argparse). ``method`` and ``k`` are accepted as aliases.
        """
        known = {f.name for f in fields(cls)}
        raw = dict(values)
        if "method" in raw:
            raw["methods"] = _split(raw.pop("method")) + _split(raw.get("methods"))
        if "k" in raw:
            raw["K"] = raw.pop("k")
        unknown = sorted(key for key in raw if key not in known)
        if unknown:
            raise ConfigError(f"unknown option(s): {', '.join(unknown)}")

        raw["methods"] = [m.upper() for m in _split(raw.get("methods"))]
        raw["user_perm"] = _split(raw.get("user_perm"))
        for name in ("K", "sjw_init", "max_ecr", "max_ste", "max_sjw", "threads", "seed"):
            if name in raw:
                raw[name] = _as_int(name, raw[name])
        for name in ("thr_ecr", "thr_ste", "thr_sjw"):
            if name in raw:
                raw[name] = _as_float(name, raw[name])
        if "constraint" in raw and raw["constraint"] is not None:
            raw["constraint"] = str(raw["constraint"]).strip()
        return cls(**{key: value for key, value in raw.items() if value is not None})

    def check_required(self) -> None:
        """Every selected method needs a path for each of its inputs; K may be inferred."""
        given = {
            "z": self.z, "mcmc": self.mcmc, "p": self.p, "x": self.data,
            "zpivot": self.zpivot, "prapivot": self.prapivot, "model": self.model,
            "user_perms": self.user_perm or None,
        }
        for method in self.methods:
            if method not in METHOD_REGISTRY:
                raise ConfigError(f"unknown method {method}. Available: {', '.join(METHOD_REGISTRY)}")
            for name in METHOD_REGISTRY[method]["requires"]:
                if name in given and given[name] is None:
                    raise MissingInputError(method, name, f"pass {INPUT_FLAGS[name]}")

    def constraint_index(self) -> Union[int, str]:
        if self.constraint.upper() == "ALL":
            return "ALL"
        index = _as_int("constraint", self.constraint)
        if index < 1:
            raise ConfigError(f"constraint must be a 1-based parameter index or ALL, got {self.constraint!r}")
        return index - 1


def load_cli_config(config_path: Optional[PathLike], overrides: Dict[str, Any]) -> CliConfig:
    """Merge a configuration file with explicit options; options win."""
    values: Dict[str, Any] = read_config_file(config_path) if config_path else {}
    values.update({key: value for key, value in overrides.items() if value is not None})
    return CliConfig.from_values(values)


def _read_allocations(path: PathLike, K: Optional[int]) -> AllocationChain:
    return AllocationChain.from_one_based(read_array(path, "int"), K)


def _labels(path: PathLike) -> np.ndarray:
    return read_array(path, "int").astype(np.int64) - 1


def _format_float(value: float) -> str:
    return f"{value:.17g}"


def _summary_text(result: RelabelResult, cli: CliConfig) -> str:
    lines = [
        f"K = {result.K}",
        f"m = {result.outputs[result.names[0]].permutations.m}",
        f"methods = {', '.join(result.names)}",
        f"reference = {result.reference}",
        f"seed = {cli.seed}",
    ]
    for name in result.names:
        out = result.outputs[name]
        lines += [
            "",
            f"[{name}]",
            f"iterations_used = {out.iterations_used}",
            f"converged = {str(out.converged).lower()}",
            "objective_trace = " + ", ".join(_format_float(v) for v in out.objective_trace),
        ]
    if result.similarity is not None:
        lines += ["", "[similarity]", "labels = " + ", ".join(result.similarity_labels)]
        for label, row in zip(result.similarity_labels, result.similarity):
            lines.append(f"{label} = " + ", ".join(_format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def _write_outputs(result: RelabelResult, cli: CliConfig, z: Optional[AllocationChain]) -> Dict[str, str]:
    out_dir = Path(cli.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files: Dict[str, str] = {}

    for name in result.names:
        perms = result.outputs[name].permutations
        files[f"permutations_{name}"] = str(write_array(perms.to_one_based(), out_dir / f"permutations_{name}{EXTENSION}"))
        if z is not None:
            relabelled = relabel_allocations(z, perms) + 1
            files[f"relabelled_z_{name}"] = str(write_array(relabelled, out_dir / f"relabelled_z_{name}{EXTENSION}"))

    if result.clusters is not None:
        files["clusters"] = str(write_array(result.clusters + 1, out_dir / f"clusters{EXTENSION}"))
        files["similarity"] = str(write_array(result.similarity, out_dir / f"similarity{EXTENSION}"))
        files["frequencies"] = str(write_array(result.frequencies(), out_dir / f"frequencies{EXTENSION}"))

    timings = "".join(f"{name} {result.timings[name]:.6f}\n" for name in result.names)
    (out_dir / "timings.txt").write_text(timings, encoding="utf-8")
    files["timings"] = str(out_dir / "timings.txt")
    (out_dir / "summary.txt").write_text(_summary_text(result, cli), encoding="utf-8")
    files["summary"] = str(out_dir / "summary.txt")
    return files


def relabel_command(cli: CliConfig) -> Dict[str, Any]:
    """
    Run the relabelling orchestrator on array files and write its outputs.

    Raises:
        MissingInputError: When a selected method lacks one of its input paths
        UsageError: When no output directory is given
    """
    if not cli.methods:
        raise ConfigError("select at least one method with --method")
    cli.check_required()
    if not cli.out_dir:
        raise UsageError("relabel needs --out-dir")

    mcmc = ParameterChain(read_array(cli.mcmc, "float")) if cli.mcmc else None
    p = ClassificationChain(read_array(cli.p, "float")) if cli.p else None
    K = cli.K or (mcmc.K if mcmc is not None else (p.K if p is not None else None))
    z = _read_allocations(cli.z, K) if cli.z else None
    x = Dataset(read_array(cli.data, "float")) if cli.data else None
    model = get_model(cli.model, K) if cli.model else None

    config = RunConfig(
        methods=cli.methods,
        K=K,
        zpivot=_labels(cli.zpivot) if cli.zpivot else None,
        prapivot=read_array(cli.prapivot, "float") if cli.prapivot else None,
        constraint=cli.constraint_index(),
        ground_truth=_labels(cli.ground_truth) if cli.ground_truth else None,
        thr_ecr=cli.thr_ecr,
        thr_ste=cli.thr_ste,
        thr_sjw=cli.thr_sjw,
        max_ecr=cli.max_ecr,
        max_ste=cli.max_ste,
        max_sjw=cli.max_sjw,
        sjw_init=cli.sjw_init - 1 if cli.sjw_init is not None else None,
        user_perms=[PermutationSet.from_one_based(read_array(path, "int")) for path in cli.user_perm],
        model=model,
        threads=cli.threads,
    )
    result = run(config, mcmc, z, p, x)
    files = _write_outputs(result, cli, z)
    logger.info(f"Relabelled with {', '.join(result.names)}; outputs in {cli.out_dir}")
    return {"files": files, "summary": result.summary()}


def permute_command(
    mcmc_path: PathLike, permutations_path: PathLike, out_path: PathLike, model: Optional[str] = None
) -> Dict[str, Any]:
    """Reorder a parameter chain file; with a model kind its own permutation action is used."""
    mcmc = ParameterChain(read_array(mcmc_path, "float"))
    perms = PermutationSet.from_one_based(read_array(permutations_path, "int"))
    family = get_model(model, mcmc.K) if model else None
    reordered = permute_mcmc(mcmc, perms, family)
    write_array(reordered.data, out_path)
    logger.info(f"Reordered {mcmc.m} iterations into {out_path}")
    return {"files": {"mcmc": str(out_path)}, "m": mcmc.m, "K": mcmc.K}


def map_pivot_command(
    model: str, mcmc_path: PathLike, z_path: PathLike, data_path: PathLike, threads: int = 1
) -> Dict[str, Any]:
    """1-based index of the complete-MAP iteration."""
    mcmc = ParameterChain(read_array(mcmc_path, "float"))
    z = _read_allocations(z_path, mcmc.K)
    x = Dataset(read_array(data_path, "float"))
    index = select_map_pivot(get_model(model, mcmc.K), mcmc, z, x, threads)
    return {"map_index": index + 1, "m": mcmc.m}


# Fixture directories: array files plus fixture.txt describing the chain
FIXTURE_ARRAYS = ("mcmc", "z", "p", "data", "zpivot", "prapivot")


def save_fixture(chain: FixtureChain, out_dir: PathLike, preset: str = "custom") -> Dict[str, str]:
    out_dir = Path(out_dir)
    arrays = {
        "mcmc": chain.mcmc.data,
        "z": chain.z.data + 1,
        "p": chain.p.data,
        "data": chain.x.x,
        "zpivot": chain.zpivot + 1,
        "prapivot": chain.prapivot,
    }
    if chain.z_true is not None:
        arrays["z_true"] = np.asarray(chain.z_true) + 1
    files = {name: str(write_array(values, out_dir / f"{name}{EXTENSION}")) for name, values in arrays.items()}
    files["fixture"] = str(write_config_file(
        {
            "kind": chain.kind,
            "preset": preset,
            "seed": chain.seed,
            "K": chain.mcmc.K,
            "m": chain.mcmc.m,
            "n": chain.x.n,
            "map_index": chain.map_index + 1,
        },
        out_dir / "fixture.txt",
    ))
    return files


def load_fixture(in_dir: PathLike) -> FixtureChain:
    in_dir = Path(in_dir)
    meta = read_config_file(in_dir / "fixture.txt")
    try:
        kind, K, map_index = meta["kind"], int(meta["k"]), int(meta["map_index"]) - 1
    except (KeyError, ValueError) as e:
        raise ConfigError(f"{in_dir / 'fixture.txt'}: missing or malformed entry {e}") from None
    truth_path = in_dir / f"z_true{EXTENSION}"
    z_true = _labels(truth_path) if truth_path.exists() else None
    return FixtureChain(
        ParameterChain(read_array(in_dir / f"mcmc{EXTENSION}", "float")),
        _read_allocations(in_dir / f"z{EXTENSION}", K),
        ClassificationChain(read_array(in_dir / f"p{EXTENSION}", "float")),
        map_index,
        Dataset(read_array(in_dir / f"data{EXTENSION}", "float")),
        z_true,
        _as_int("seed", meta.get("seed", "0")),
        get_model(kind, K).kind,
    )


def read_truth_config(path: PathLike) -> FixturePreset:
    """
    Truth configuration file with keys ``kind``, ``k``, ``n``, ``params``
    (path to a K x J float array, relative to the file), ``fit_k``,
    ``iterations`` and ``burn``.
    """
    path = Path(path)
    values = read_config_file(path)
    try:
        kind, K, n = values["kind"], int(values["k"]), int(values["n"])
        params_path = path.parent / values["params"]
        fit_K = int(values.get("fit_k", K))
        iterations = int(values.get("iterations", 1100))
        burn = int(values.get("burn", 100))
    except KeyError as e:
        raise ConfigError(f"{path}: missing key {e}") from None
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from None
    truth = TruthSpec(kind, K, read_array(params_path, "float"), n)
    return FixturePreset(path.stem, truth, fit_K, iterations, burn, f"Truth configuration {path.name}")


def simulate_command(
    out_dir: PathLike,
    preset: Optional[str] = None,
    truth: Optional[PathLike] = None,
    seed: int = 0,
    iterations: Optional[int] = None,
    burn: Optional[int] = None,
    K: Optional[int] = None,
    threads: int = 1,
) -> Dict[str, Any]:
    """Simulate data from a preset or truth configuration and write the fixture chain."""
    if (preset is None) == (truth is None):
        raise UsageError("simulate needs exactly one of --preset or --truth")
    spec = get_preset(preset) if preset is not None else read_truth_config(truth)
    chain = simulate_fixture(spec, seed, iterations=iterations, burn=burn, fit_K=K, threads=threads)
    files = save_fixture(chain, out_dir, spec.name)
    return {
        "files": files,
        "preset": spec.name,
        "kind": chain.kind,
        "m": chain.mcmc.m,
        "K": chain.mcmc.K,
        "n": chain.x.n,
        "map_index": chain.map_index + 1,
    }


def inject_command(in_dir: PathLike, out_dir: PathLike, seed: int = 0, switch_probability: float = 1.0) -> Dict[str, Any]:
    """Apply random label switches to a fixture directory; writes the applied permutations as ``switches``."""
    meta = read_config_file(Path(in_dir) / "fixture.txt")
    chain = load_fixture(in_dir)
    switched, applied = inject_label_switching(chain, seed, switch_probability)
    files = save_fixture(switched, out_dir, meta.get("preset", "custom"))
    files["switches"] = str(write_array(applied.to_one_based(), Path(out_dir) / f"switches{EXTENSION}"))
    switched_count = int((~(applied.rows == np.arange(applied.K)).all(axis=1)).sum())
    logger.info(f"Switched labels in {switched_count} of {applied.m} iterations")
    return {"files": files, "switched": switched_count, "m": applied.m}
