"""
Relabelling Tools Implementation
================================

MCP tools over the ``relabel``, ``permute`` and ``map-pivot`` commands.
Arguments mirror the command line flags: paths to array files and 1-based
labels and indices.
"""

import asyncio
from typing import Any, Dict, List, Optional, Union

from ..cli.commands import CliConfig, map_pivot_command, permute_command, relabel_command
from ..utils.logging_setup import get_logger
from ..utils.resources import RunStore
from ..utils.validation import ToolResult

logger = get_logger("tools.relabel")


def record_result(store: Optional[RunStore], tool: str, arguments: Dict[str, Any], result: Dict[str, Any]) -> Dict[str, Any]:
    metadata = {"tool": tool}
    if store is not None:
        metadata["run_id"] = store.record(tool, arguments, result)
    return ToolResult.success(result, metadata).to_dict()


async def relabel_tool(
    method: Union[str, List[str]],
    out_dir: str,
    z: Optional[str] = None,
    mcmc: Optional[str] = None,
    p: Optional[str] = None,
    data: Optional[str] = None,
    zpivot: Optional[str] = None,
    prapivot: Optional[str] = None,
    constraint: Optional[str] = None,
    ground_truth: Optional[str] = None,
    model: Optional[str] = None,
    K: Optional[int] = None,
    sjw_init: Optional[int] = None,
    thr_ecr: Optional[float] = None,
    thr_ste: Optional[float] = None,
    thr_sjw: Optional[float] = None,
    max_ecr: Optional[int] = None,
    max_ste: Optional[int] = None,
    max_sjw: Optional[int] = None,
    user_perm: Optional[Union[str, List[str]]] = None,
    threads: Optional[int] = None,
    store: Optional[RunStore] = None,
) -> Dict[str, Any]:
    """
    Run relabelling methods on array files and write their outputs.

    Args:
        method: Method identifiers, a list or a comma separated string
        out_dir: Directory receiving permutations, clusters, similarity,
            frequencies, relabelled allocations, timings and the summary
        z, mcmc, p, data, zpivot, prapivot, ground_truth: Input array paths
        user_perm: Permutation file path(s) for USER-PERM

    Returns:
        Dict with status, result (output files and run summary), error and metadata
    """
    arguments = {key: value for key, value in locals().items() if key != "store"}
    logger.info(f"Relabel tool called with methods: {method}")

    try:
        cli = CliConfig.from_values(arguments)
        result = await asyncio.to_thread(relabel_command, cli)
        return record_result(store, "relabel", arguments, result)

    except Exception as e:
        logger.error(f"Relabel tool error: {e}")
        return ToolResult.from_exception(e, "relabel").to_dict()


async def permute_tool(
    mcmc: str,
    permutations: str,
    out: str,
    model: Optional[str] = None,
    store: Optional[RunStore] = None,
) -> Dict[str, Any]:
    """Reorder a parameter chain file with a permutation file (1-based rows)."""
    arguments = {"mcmc": mcmc, "permutations": permutations, "out": out, "model": model}
    logger.info(f"Permute tool called: {mcmc} -> {out}")

    try:
        result = await asyncio.to_thread(permute_command, mcmc, permutations, out, model)
        return record_result(store, "permute", arguments, result)

    except Exception as e:
        logger.error(f"Permute tool error: {e}")
        return ToolResult.from_exception(e, "permute").to_dict()


async def map_pivot_tool(
    model: str,
    mcmc: str,
    z: str,
    data: str,
    threads: int = 1,
    store: Optional[RunStore] = None,
) -> Dict[str, Any]:
    """Find the complete-MAP iteration (1-based) of a chain."""
    arguments = {"model": model, "mcmc": mcmc, "z": z, "data": data, "threads": threads}
    logger.info(f"Map pivot tool called for model {model}")

    try:
        result = await asyncio.to_thread(map_pivot_command, model, mcmc, z, data, threads)
        return record_result(store, "map_pivot", arguments, result)

    except Exception as e:
        logger.error(f"Map pivot tool error: {e}")
        return ToolResult.from_exception(e, "map_pivot").to_dict()
