"""
Tools Module for labelswitch
============================

MCP tool implementations organized by category.
"""

from .relabel_tools import relabel_tool, permute_tool, map_pivot_tool
from .fixture_tools import simulate_tool, inject_tool

__all__ = [
    "relabel_tool",
    "permute_tool",
    "map_pivot_tool",
    "simulate_tool",
    "inject_tool",
]
