"""
Fixture Tools Implementation
============================

MCP tools for simulating fixture chains and injecting label switches.
"""

import asyncio
from typing import Any, Dict, Optional

from .relabel_tools import record_result
from ..cli.commands import inject_command, simulate_command
from ..utils.logging_setup import get_logger
from ..utils.resources import RunStore
from ..utils.validation import ToolResult

logger = get_logger("tools.fixture")


async def simulate_tool(
    out_dir: str,
    preset: Optional[str] = None,
    truth: Optional[str] = None,
    seed: int = 0,
    iterations: Optional[int] = None,
    burn: Optional[int] = None,
    K: Optional[int] = None,
    threads: int = 1,
    store: Optional[RunStore] = None,
) -> Dict[str, Any]:
    """
    Simulate data and run the matching Gibbs sampler.

    Args:
        out_dir: Fixture directory to write
        preset: Named preset (separated-normal, fishery-like, bivariate-1,
            bivariate-2, lamb-like)
        truth: Truth configuration file, instead of a preset
        seed: Seed of the PCG64 generator

    Returns:
        Dict with status, result (files, dimensions, complete-MAP index) and metadata
    """
    arguments = {
        "out_dir": out_dir, "preset": preset, "truth": truth, "seed": seed,
        "iterations": iterations, "burn": burn, "K": K, "threads": threads,
    }
    logger.info(f"Simulate tool called with preset={preset}, truth={truth}, seed={seed}")

    try:
        result = await asyncio.to_thread(
            simulate_command, out_dir, preset, truth, seed, iterations, burn, K, threads
        )
        return record_result(store, "simulate", arguments, result)

    except Exception as e:
        logger.error(f"Simulate tool error: {e}")
        return ToolResult.from_exception(e, "simulate").to_dict()


async def inject_tool(
    in_dir: str,
    out_dir: str,
    seed: int = 0,
    switch_probability: float = 1.0,
    store: Optional[RunStore] = None,
) -> Dict[str, Any]:
    """Relabel each iteration of a fixture with a random permutation."""
    arguments = {"in_dir": in_dir, "out_dir": out_dir, "seed": seed, "switch_probability": switch_probability}
    logger.info(f"Inject tool called: {in_dir} -> {out_dir}")

    try:
        result = await asyncio.to_thread(inject_command, in_dir, out_dir, seed, switch_probability)
        return record_result(store, "inject", arguments, result)

    except Exception as e:
        logger.error(f"Inject tool error: {e}")
        return ToolResult.from_exception(e, "inject").to_dict()
