"""
MCP Backend Detection and Import Utilities
==========================================

Imports FastMCP from the ``mcp`` package. The import is deferred so that the
library and CLI work without ``mcp`` installed.
"""

from typing import Tuple

from .logging_setup import get_logger

logger = get_logger("utils.mcp_backends")


def detect_mcp_backend() -> Tuple[str, dict]:
    """
    Detect the MCP backend and return its imports.

    Returns:
        Tuple[str, dict]: Backend name and import dictionary

    Raises:
        ImportError: If the mcp package is not installed
    """
    try:
        from mcp.server.fastmcp import FastMCP
    except ImportError:
        logger.error("FastMCP is not available")
        raise ImportError(
            "No MCP backend available. Please install the 'mcp' package:\n"
            "pip install mcp"
        )
    logger.info("Using FastMCP backend")
    return "fastmcp", {"FastMCP": FastMCP}


def get_mcp_imports() -> Tuple[str, dict]:
    """
    Get MCP imports with caching.

    Returns:
        Tuple[str, dict]: Backend name and imports
    """
    if not hasattr(get_mcp_imports, "_cache"):
        get_mcp_imports._cache = detect_mcp_backend()

    return get_mcp_imports._cache
