"""Utility helpers for PeriodLab."""

from .file_utils import ensure_directory, read_json, read_text, sha256_bytes, write_bytes
from .logging_utils import log_with_emoji, setup_logger

__all__ = [
    "ensure_directory",
    "read_json",
    "read_text",
    "sha256_bytes",
    "write_bytes",
    "log_with_emoji",
    "setup_logger",
]
