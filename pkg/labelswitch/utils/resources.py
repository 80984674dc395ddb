"""
Resource Management Utilities
=============================

Contains resource implementations for the MCP server.
"""

import json
from datetime import datetime
from typing import Any, Dict, List, Optional

from ..utils.errors import UsageError
from ..utils.logging_setup import get_logger

logger = get_logger("resources")


class RunStore:
    """
    In-memory history of the tool runs executed in one server session.

    Each entry holds the tool name, its arguments, the output files and the
    run summary, keyed by a sequential run id.
    """

    def __init__(self, max_runs: int = 100):
        """
        Initialize the run store.

        Args:
            max_runs: Oldest entries are dropped beyond this count
        """
        self.max_runs = max_runs
        self.runs: Dict[int, Dict[str, Any]] = {}
        self._next_id = 1
        logger.debug(f"Initialized run store (max {max_runs} runs)")

    def record(self, tool: str, arguments: Dict[str, Any], result: Dict[str, Any]) -> int:
        """
        Store one successful run.

        Returns:
            The run id
        """
        run_id = self._next_id
        self._next_id += 1
        self.runs[run_id] = {
            "run_id": run_id,
            "tool": tool,
            "timestamp": datetime.now().isoformat(),
            "arguments": {key: value for key, value in arguments.items() if value is not None},
            "result": result,
        }
        while len(self.runs) > self.max_runs:
            del self.runs[min(self.runs)]
        logger.debug(f"RUN RECORD: {tool} -> run {run_id}")
        return run_id

    def get(self, run_id: int) -> Optional[Dict[str, Any]]:
        return self.runs.get(run_id)

    def entry_json(self, run_id: int) -> str:
        """
        One stored run as JSON.

        Raises:
            UsageError: When the run id is unknown or was evicted
        """
        try:
            key = int(run_id)
        except (TypeError, ValueError):
            raise UsageError(f"run id must be an integer, got {run_id!r}") from None
        entry = self.get(key)
        if entry is None:
            known = f"{min(self.runs)}..{max(self.runs)}" if self.runs else "none"
            raise UsageError(f"no run {run_id} in this session (stored runs: {known})")
        return json.dumps(entry, indent=2)

    def list_runs(self, tool: Optional[str] = None) -> List[Dict[str, Any]]:
        runs = [entry for entry in self.runs.values() if tool is None or entry["tool"] == tool]
        logger.debug(f"RUN LIST: {len(runs)} runs")
        return runs

    def get_info(self) -> Dict[str, Any]:
        """
        Get information about the store.

        Returns:
            Dictionary with the run count and every stored run
        """
        return {
            "description": "Runs executed in this server session",
            "count": len(self.runs),
            "runs": self.list_runs(),
        }

    def to_json(self) -> str:
        return json.dumps(self.get_info(), indent=2)
