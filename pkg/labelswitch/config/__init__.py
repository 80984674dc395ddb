"""
Configuration Module for labelswitch
====================================

Contains configuration constants, relabelling defaults and the method and
tool registries. Values can be overridden through ``LABELSWITCH_*``
environment variables, optionally loaded from a ``.env`` file with
python-dotenv.
"""

import os
from dataclasses import dataclass
from typing import Dict, Any

try:
    from dotenv import load_dotenv
    load_dotenv()  # Load .env file
except ImportError:
    pass  # dotenv not available, use environment variables directly


def get_env_bool(key: str, default: bool = False) -> bool:
    """Get boolean value from environment variable."""
    value = os.getenv(key, str(default)).lower()
    return value in ('true', '1', 'yes', 'on')


def get_env_int(key: str, default: int = 0) -> int:
    """Get integer value from environment variable."""
    try:
        return int(os.getenv(key, str(default)))
    except ValueError:
        return default


def get_env_float(key: str, default: float = 0.0) -> float:
    """Get float value from environment variable."""
    try:
        return float(os.getenv(key, repr(default)))
    except ValueError:
        return default


@dataclass
class AppConfig:
    """Application identification and logging settings."""

    name: str = "labelswitch"
    version: str = "1.0.0"
    description: str = "Relabelling algorithms for label switching in MCMC output"

    # Logging settings
    log_level: str = "INFO"
    log_format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass
class EnvironmentConfig:
    """Environment-specific configuration."""

    debug: bool = False


@dataclass
class RelabelDefaults:
    """Default thresholds, iteration caps and numerical guards."""

    thr_ecr: float = 1e-6
    thr_ste: float = 1e-6
    thr_sjw: float = 1e-6
    max_ecr: int = 100
    max_ste: int = 100
    max_sjw: int = 100

    # SJW enumerates K! permutations per iteration
    sjw_max_components: int = 6

    threads: int = 1

    stephens_q_floor: float = 1e-300
    data_based_scale_floor: float = 1e-8
    assignment_tolerance: float = 1e-10
    stationary_tolerance: float = 1e-12


APP_CONFIG = AppConfig(
    name=os.getenv('LABELSWITCH_NAME', 'labelswitch'),
    version=os.getenv('LABELSWITCH_VERSION', '1.0.0'),
    description=os.getenv(
        'LABELSWITCH_DESCRIPTION',
        'Relabelling algorithms for label switching in MCMC output'
    ),
    log_level=os.getenv('LABELSWITCH_LOG_LEVEL', 'INFO').upper(),
    log_format=os.getenv(
        'LABELSWITCH_LOG_FORMAT',
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    ),
)

ENV_CONFIG = EnvironmentConfig(
    debug=get_env_bool('LABELSWITCH_DEBUG', False),
)

RELABEL_DEFAULTS = RelabelDefaults(
    thr_ecr=get_env_float('LABELSWITCH_THR_ECR', 1e-6),
    thr_ste=get_env_float('LABELSWITCH_THR_STE', 1e-6),
    thr_sjw=get_env_float('LABELSWITCH_THR_SJW', 1e-6),
    max_ecr=get_env_int('LABELSWITCH_MAX_ECR', 100),
    max_ste=get_env_int('LABELSWITCH_MAX_STE', 100),
    max_sjw=get_env_int('LABELSWITCH_MAX_SJW', 100),
    sjw_max_components=get_env_int('LABELSWITCH_SJW_MAX_COMPONENTS', 6),
    threads=max(1, get_env_int('LABELSWITCH_THREADS', 1)),
    stephens_q_floor=get_env_float('LABELSWITCH_STEPHENS_Q_FLOOR', 1e-300),
    data_based_scale_floor=get_env_float('LABELSWITCH_DATA_BASED_SCALE_FLOOR', 1e-8),
    assignment_tolerance=get_env_float('LABELSWITCH_ASSIGNMENT_TOLERANCE', 1e-10),
    stationary_tolerance=get_env_float('LABELSWITCH_STATIONARY_TOLERANCE', 1e-12),
)

# Relabelling method registry: identifier -> implementation and required inputs.
# "K" is listed where the method needs it; the orchestrator infers it from z
# when it is not given explicitly.
METHOD_REGISTRY: Dict[str, Dict[str, Any]] = {
    "STEPHENS": {
        "description": "Kullback-Leibler relabelling of classification probabilities",
        "module": "labelswitch.methods.stephens",
        "function": "stephens",
        "requires": ["p"],
    },
    "PRA": {
        "description": "Pivotal reordering against a parameter pivot",
        "module": "labelswitch.methods.pra",
        "function": "pra",
        "requires": ["mcmc", "prapivot"],
    },
    "ECR": {
        "description": "ECR algorithm, default version with allocation pivot(s)",
        "module": "labelswitch.methods.ecr",
        "function": "ecr",
        "requires": ["z", "zpivot", "K"],
    },
    "ECR-ITERATIVE-1": {
        "description": "ECR algorithm, iterative version 1 (mode pivot)",
        "module": "labelswitch.methods.ecr",
        "function": "ecr_iterative_1",
        "requires": ["z", "K"],
    },
    "ECR-ITERATIVE-2": {
        "description": "ECR algorithm, iterative version 2 (probability pivot)",
        "module": "labelswitch.methods.ecr",
        "function": "ecr_iterative_2",
        "requires": ["z", "K", "p"],
    },
    "SJW": {
        "description": "Probabilistic relabelling (EM over permutations)",
        "module": "labelswitch.methods.sjw",
        "function": "sjw",
        "requires": ["mcmc", "z", "x", "model"],
    },
    "AIC": {
        "description": "Ordering constraint on one (or ALL) parameter types",
        "module": "labelswitch.methods.ordering",
        "function": "ordering_constraint",
        "requires": ["mcmc"],
    },
    "DATA-BASED": {
        "description": "Data-based relabelling with k-means type loss",
        "module": "labelswitch.methods.data_based",
        "function": "data_based",
        "requires": ["z", "x", "K"],
    },
    "USER-PERM": {
        "description": "User-supplied permutations",
        "module": "labelswitch.methods.user",
        "function": "user_perm",
        "requires": ["user_perms"],
    },
}

# MCP tool registry configuration
TOOL_REGISTRY = {
    "relabel": {
        "name": "relabel",
        "description": "Run relabelling methods on MCMC output files and write permutations, clusters and similarity",
    },
    "permute": {
        "name": "permute",
        "description": "Reorder a parameter chain file with a permutation file",
    },
    "map_pivot": {
        "name": "map_pivot",
        "description": "Find the complete-MAP iteration of a chain",
    },
    "simulate": {
        "name": "simulate",
        "description": "Generate a fixture chain from a preset or truth configuration",
    },
    "inject": {
        "name": "inject",
        "description": "Apply random per-iteration label switches to a chain",
    },
}

# Resource registry configuration
RESOURCE_REGISTRY = {
    "run_history": {
        "uri": "runs://history",
        "name": "Run History",
        "description": "Summaries of the runs executed in this server session",
        "mime_type": "application/json",
    },
    "run_entry": {
        "uri": "runs://history/{run_id}",
        "name": "Run Entry",
        "description": "Arguments, output files and summary of one run of this session",
        "mime_type": "application/json",
    },
}
