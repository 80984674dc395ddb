"""
Utilities Module for labelswitch
================================

Logging setup, error types, the tool result envelope, the run store
resource, MCP backend detection and the thread-pool helper.
"""

from .logging_setup import setup_logging, get_logger
from .errors import (
    LabelSwitchError,
    DimensionError,
    InvalidPermutationError,
    LabelRangeError,
    ProbabilityError,
    ModelError,
    ArrayFormatError,
    ConvergenceError,
    UsageError,
    ConfigError,
    MissingInputError,
)
from .resources import RunStore
from .mcp_backends import detect_mcp_backend, get_mcp_imports
from .validation import ToolResult
from .parallel import map_chunks, chunk_bounds

__all__ = [
    "setup_logging",
    "get_logger",
    "LabelSwitchError",
    "DimensionError",
    "InvalidPermutationError",
    "LabelRangeError",
    "ProbabilityError",
    "ModelError",
    "ArrayFormatError",
    "ConvergenceError",
    "UsageError",
    "ConfigError",
    "MissingInputError",
    "RunStore",
    "detect_mcp_backend",
    "get_mcp_imports",
    "ToolResult",
    "map_chunks",
    "chunk_bounds",
]
