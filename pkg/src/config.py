# src/config.py
import logging
import os
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


def resolve_log_level(name: str, default: str = "WARNING") -> str:
    """Upper-cased level name, or the default when logging does not know the name."""
    level = name.strip().upper()
    if isinstance(logging.getLevelName(level), int):
        return level
    logger.warning(f"Unknown log level {name!r}; using {default}")
    return default


LOG_LEVEL = resolve_log_level(os.getenv("BTSA_LOG_LEVEL", "WARNING"))
LOG_FILE = os.getenv("BTSA_LOG_FILE")

# Numerical knobs; the run configuration may override them per command.
QUADRATURE_INTERVALS = int(os.getenv("BTSA_QUADRATURE_INTERVALS", "10000"))
SEARCH_RESOLUTION = int(os.getenv("BTSA_SEARCH_RESOLUTION", "64"))
FIT_WINDOW_MM = float(os.getenv("BTSA_FIT_WINDOW_MM", "10"))
