from __future__ import annotations

import os
import sys

from loguru import logger

LOG_FORMAT = (
    "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "{name}:{line} - {message}"
)


def get_log_level() -> str:
    """Resolve the log level from env with a safe default."""
    return os.getenv("SOBOLEV_FLOW_LOG_LEVEL", "INFO").strip().upper() or "INFO"


def get_output_dir() -> str:
    """Default output directory; only used when no --out is given."""
    return os.getenv("SOBOLEV_FLOW_OUTPUT_DIR", "runs").strip() or "runs"


def configure_logging(level: str | None = None) -> None:
    """Replace loguru's default sink with a single stderr sink at `level`."""
    logger.remove()
    logger.add(sys.stderr, level=(level or get_log_level()).upper(), format=LOG_FORMAT)
