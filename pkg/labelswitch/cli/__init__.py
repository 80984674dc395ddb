"""
CLI Module for labelswitch
==========================

Array and configuration file formats, the command functions shared with the
MCP tools, and the argparse front end.
"""

from .arrays import read_array, write_array, encode_array, decode_array
from .config_file import read_config_file, write_config_file, parse_config_text
from .commands import (
    CliConfig,
    load_cli_config,
    relabel_command,
    permute_command,
    map_pivot_command,
    simulate_command,
    inject_command,
    save_fixture,
    load_fixture,
)

__all__ = [
    "read_array",
    "write_array",
    "encode_array",
    "decode_array",
    "read_config_file",
    "write_config_file",
    "parse_config_text",
    "CliConfig",
    "load_cli_config",
    "relabel_command",
    "permute_command",
    "map_pivot_command",
    "simulate_command",
    "inject_command",
    "save_fixture",
    "load_fixture",
]
