"""
Error Types
===========

Exception hierarchy shared by the library, the CLI and the MCP tools. The
CLI maps usage-type errors to exit code 1 and data errors to exit code 2.
"""

from typing import Optional


class LabelSwitchError(Exception):
    """Base class for every error raised by labelswitch."""

    exit_code = 2


class DimensionError(LabelSwitchError, ValueError):
    """Array shapes disagree."""


class InvalidPermutationError(LabelSwitchError, ValueError):
    """A permutation row is not a bijection on the label set."""


class LabelRangeError(LabelSwitchError, ValueError):
    """An allocation label lies outside {1, ..., K}."""


class ProbabilityError(LabelSwitchError, ValueError):
    """Classification probabilities are out of range or not normalized."""


class ModelError(LabelSwitchError, ValueError):
    """Parameters violate a model family invariant, or the family is unknown."""


class ArrayFormatError(LabelSwitchError, ValueError):
    """An array file is malformed."""


class ConvergenceError(LabelSwitchError, RuntimeError):
    """An iterative numerical routine failed to converge."""


class UsageError(LabelSwitchError):
    """Command line or request misuse."""

    exit_code = 1


class ConfigError(UsageError):
    """Configuration file or option values are invalid."""


class MissingInputError(UsageError):
    """A selected method lacks one of its required inputs."""

    def __init__(self, method: str, input_name: str, detail: Optional[str] = None):
        self.method = method
        self.input_name = input_name
        message = f"method {method} requires input '{input_name}'"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)
