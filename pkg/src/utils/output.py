"""
Module: output.py
Description: Writes command outputs to disk with a fixed encoding and LF line endings.
"""

import logging
from pathlib import Path
from typing import Union

from src.errors import FileAccessError

logger = logging.getLogger(__name__)


def write_text(text: str, path: Union[str, Path]) -> None:
    """
    Write text as UTF-8 without newline translation.

    Parameters:
        text (str): Content to write.
        path (str | Path): Destination file; the parent directory must exist.
    """
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as e:
        logger.error(f"Error writing {path}: {e}", exc_info=True)
        raise FileAccessError(str(e.strerror or e), str(path)) from e
    logger.info(f"Wrote {path}")
