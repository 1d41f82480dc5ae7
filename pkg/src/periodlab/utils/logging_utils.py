"""Logging utilities for PeriodLab.

Loggers write to stderr (and optionally a file) so report bytes on stdout
stay untouched.
"""

import logging
import sys
from typing import Optional

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logger(
    name: str,
    log_file: Optional[str] = None,
    level: int = logging.INFO,
    format_string: Optional[str] = None,
) -> logging.Logger:
    """Set up a logger with a stderr handler and an optional file handler.

    Args:
        name: Logger name
        log_file: Optional log file path
        level: Logging level
        format_string: Optional custom format string

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Avoid adding multiple handlers if logger already configured
    if logger.handlers:
        for handler in logger.handlers:
            handler.setLevel(level)
        return logger

    formatter = logging.Formatter(format_string or DEFAULT_FORMAT)

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(formatter)
    logger.addHandler(handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def log_with_emoji(logger: logging.Logger, level: int, emoji: str, message: str) -> None:
    """Log message with emoji prefix.

    Args:
        logger: Logger instance
        level: Logging level
        emoji: Emoji indicator (📥 📊 🔄 🎯 ✅ ❌)
        message: Message to log
    """
    logger.log(level, f"{emoji} {message}")
