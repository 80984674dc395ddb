"""
labelswitch MCP Server
======================

Registers the relabelling and fixture tools and the run-history resource
with FastMCP. Only the stdio transport is offered.
"""

from typing import Any, Dict, List, Optional

from .config import APP_CONFIG, RESOURCE_REGISTRY, TOOL_REGISTRY
from .utils.logging_setup import setup_logging
from .utils.mcp_backends import get_mcp_imports
from .utils.resources import RunStore
from .tools import inject_tool, map_pivot_tool, permute_tool, relabel_tool, simulate_tool

# Setup logging
logger = setup_logging()


class LabelSwitchServer:
    """
    MCP server exposing labelswitch through FastMCP.

    Tool results are also recorded in a session-wide :class:`RunStore`,
    published as the ``runs://history`` resource and, one run at a time,
    as ``runs://history/{run_id}``.
    """

    def __init__(self):
        logger.info(f"Initializing {APP_CONFIG.name} v{APP_CONFIG.version}")

        self.backend, self.mcp_imports = get_mcp_imports()
        logger.info(f"Using MCP backend: {self.backend}")

        self.server = self.mcp_imports["FastMCP"](APP_CONFIG.name)
        self.run_store = RunStore()

        self._register_tools()
        self._register_resources()

        logger.info("labelswitch server initialized successfully")

    def _register_tools(self):
        """Register tools using FastMCP decorators."""
        logger.info("Registering tools...")
        store = self.run_store

        @self.server.tool(**TOOL_REGISTRY["relabel"])
        async def relabel(
            method: str,
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
            user_perm: Optional[List[str]] = None,
            threads: Optional[int] = None,
        ) -> Dict[str, Any]:
            return await relabel_tool(
                method, out_dir, z=z, mcmc=mcmc, p=p, data=data, zpivot=zpivot, prapivot=prapivot,
                constraint=constraint, ground_truth=ground_truth, model=model, K=K, sjw_init=sjw_init,
                thr_ecr=thr_ecr, thr_ste=thr_ste, thr_sjw=thr_sjw,
                max_ecr=max_ecr, max_ste=max_ste, max_sjw=max_sjw,
                user_perm=user_perm, threads=threads, store=store,
            )

        @self.server.tool(**TOOL_REGISTRY["permute"])
        async def permute(mcmc: str, permutations: str, out: str, model: Optional[str] = None) -> Dict[str, Any]:
            return await permute_tool(mcmc, permutations, out, model, store=store)

        @self.server.tool(**TOOL_REGISTRY["map_pivot"])
        async def map_pivot(model: str, mcmc: str, z: str, data: str, threads: int = 1) -> Dict[str, Any]:
            return await map_pivot_tool(model, mcmc, z, data, threads, store=store)

        @self.server.tool(**TOOL_REGISTRY["simulate"])
        async def simulate(
            out_dir: str,
            preset: Optional[str] = None,
            truth: Optional[str] = None,
            seed: int = 0,
            iterations: Optional[int] = None,
            burn: Optional[int] = None,
            K: Optional[int] = None,
            threads: int = 1,
        ) -> Dict[str, Any]:
            return await simulate_tool(out_dir, preset, truth, seed, iterations, burn, K, threads, store=store)

        @self.server.tool(**TOOL_REGISTRY["inject"])
        async def inject(in_dir: str, out_dir: str, seed: int = 0, switch_probability: float = 1.0) -> Dict[str, Any]:
            return await inject_tool(in_dir, out_dir, seed, switch_probability, store=store)

        logger.info(f"Registered {len(TOOL_REGISTRY)} tools: {', '.join(TOOL_REGISTRY)}")

    def _register_resources(self):
        """Register resources using FastMCP decorators."""
        logger.info("Registering resources...")
        store = self.run_store

        @self.server.resource(**RESOURCE_REGISTRY["run_history"])
        async def run_history() -> str:
            return store.to_json()

        @self.server.resource(**RESOURCE_REGISTRY["run_entry"])
        async def run_entry(run_id: str) -> str:
            return store.entry_json(run_id)

        logger.info(f"Registered {len(RESOURCE_REGISTRY)} resources: {', '.join(RESOURCE_REGISTRY)}")

    def run(self, transport: str = "stdio"):
        """
        Run the server. Only ``stdio`` is supported.
        """
        if transport != "stdio":
            raise ValueError(f"unsupported transport '{transport}'; only stdio is offered")
        logger.info("Starting labelswitch server with stdio transport...")
        self.server.run(transport="stdio")
