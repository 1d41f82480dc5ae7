"""CLI entry point for PeriodLab.

Composes adapters with dependency injection and delegates to CLI logic.
"""

import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "src"))

from periodlab.adapters.config_adapter import ConfigAdapter  # noqa: E402
from periodlab.adapters.file_adapter import FileAdapter  # noqa: E402
from periodlab.adapters.logger_adapter import LoggerAdapter  # noqa: E402
from periodlab.cli import CLI  # noqa: E402


def main() -> None:
    """Entry point for CLI application."""
    logger_adapter = LoggerAdapter()
    logger = logger_adapter.setup_logger("periodlab")

    file_adapter = FileAdapter(logger)
    cli = CLI(
        config_adapter=ConfigAdapter(logger, file_adapter),
        file_adapter=file_adapter,
        logger_adapter=logger_adapter,
        logger=logger,
    )

    try:
        sys.exit(cli.run(sys.argv[1:]))
    except SystemExit:
        raise
    except Exception as e:
        logger.exception("CLI failed: %s", e)
        sys.exit(1)


if __name__ == "__main__":
    main()
