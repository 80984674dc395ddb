"""
Logging Setup Utility
=====================

Configures logging for labelswitch with consistent formatting and log
levels. Records go to stderr so that stdout stays free for CLI reports and
the MCP stdio transport.
"""

import logging
import sys
from ..config import APP_CONFIG, ENV_CONFIG


def setup_logging() -> logging.Logger:
    """
    Setup logging configuration for labelswitch.

    Returns:
        logging.Logger: Configured package logger
    """
    logging.basicConfig(
        level=getattr(logging, APP_CONFIG.log_level, logging.INFO),
        format=APP_CONFIG.log_format,
        stream=sys.stderr
    )

    logger = logging.getLogger("labelswitch")

    if ENV_CONFIG.debug:
        logger.setLevel(logging.DEBUG)
        logger.debug("Debug logging enabled")

    return logger


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger for a specific module.

    Args:
        name: Module name for the logger

    Returns:
        logging.Logger: Logger instance for the module
    """
    return logging.getLogger(f"labelswitch.{name}")
