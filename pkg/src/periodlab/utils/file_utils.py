"""File utilities for PeriodLab."""

import hashlib
import json
import os
from pathlib import Path
from typing import Any


def sha256_bytes(data: bytes) -> str:
    """SHA256 hex digest of raw bytes (used to compare report outputs)."""
    return hashlib.sha256(data).hexdigest()


def ensure_directory(path: str) -> None:
    """Create a directory (and parents) if it does not exist."""
    os.makedirs(path, exist_ok=True)


def write_bytes(path: str, data: bytes) -> None:
    """Write bytes, creating the parent directory when needed."""
    parent = Path(path).parent
    if str(parent) not in ("", "."):
        ensure_directory(str(parent))
    with open(path, "wb") as f:
        f.write(data)


def read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def read_json(path: str) -> Any:
    """Load a JSON document from disk."""
    return json.loads(read_text(path))
