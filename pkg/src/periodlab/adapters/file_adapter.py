"""File system adapter for PeriodLab.

Wraps file_utils to provide a clean interface for report and map I/O.
"""

import logging
import os
from typing import Any

from periodlab.utils.file_utils import (
    read_json as read_json_content,
    sha256_bytes,
    write_bytes as write_bytes_content,
)


class FileAdapter:
    """Handles file system operations with dependency injection."""

    def __init__(self, logger: logging.Logger) -> None:
        """Initialize with injected logger."""
        self._logger = logger

    def write_report(self, path: str, data: bytes) -> None:
        """Write report bytes to a file."""
        self._logger.debug(f"Writing report: {path} ({len(data)} bytes)")
        write_bytes_content(path, data)

    def read_json(self, path: str) -> Any:
        """Read and parse a JSON file."""
        self._logger.debug(f"Reading JSON: {path}")
        return read_json_content(path)

    def file_exists(self, path: str) -> bool:
        """Check if file exists."""
        return os.path.exists(path)

    def compute_hash(self, data: bytes) -> str:
        """Compute SHA256 hash of report bytes."""
        return sha256_bytes(data)
