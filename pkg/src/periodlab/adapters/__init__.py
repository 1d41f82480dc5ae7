"""Adapters for file I/O, logging and experiment configs."""

from .config_adapter import ConfigAdapter
from .file_adapter import FileAdapter
from .logger_adapter import LoggerAdapter

__all__ = ["ConfigAdapter", "FileAdapter", "LoggerAdapter"]
