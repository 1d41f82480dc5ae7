"""Command-line interface for PeriodLab.

One subcommand per experiment. Flags (or a ``--config`` JSON file, which
flags override) build an ExperimentConfig; the runner writes the report to
``--output`` or stdout.

Exit codes: 0 success, 1 internal error or a verification counterexample,
2 domain or schema error (a JSON error object goes to stderr).
"""

import argparse
import json
import logging
import sys
from typing import Any, BinaryIO, Dict, List, Optional, TextIO

from periodlab import __version__
from periodlab.adapters.config_adapter import ConfigAdapter
from periodlab.adapters.file_adapter import FileAdapter
from periodlab.adapters.logger_adapter import LoggerAdapter
from periodlab.config import APP_NAME, LOG_EMOJI_ERROR, REPORT_FORMATS
from periodlab.domain.exceptions import PeriodLabError, SchemaError
from periodlab.domain.settings import LabSettings
from periodlab.services.experiment_runner import (
    EXIT_DOMAIN,
    EXIT_INTERNAL,
    ExperimentRunner,
)

DYNAMICS_COMMANDS = ("census", "bounds", "lift", "find-periodic", "certify")

EPILOG = """
Examples:
  periodlab census --map maps/square.json --p 7
  periodlab find-periodic --map maps/cube.json --p 5 --e 2 --n-max 4
  periodlab verify --map maps/cube.json --p 5 --f 1 --e 1,2 --n-max 4 --precision 6
  periodlab certify --map maps/zeta_shift.json --p 3 --e 2 --eisenstein zeta_p --point '[1]'
  periodlab power-map --q 2 --p 3 --k-max 3 --format csv
  periodlab sieve --q 2 --p 5 --a 1 --m-max 6
  periodlab density --p 5 --X 100000
  periodlab ec-torsion --a4 1 --a6 0 --p 5
  periodlab tower --vdelta 6 --p 3 --e 2,6,18,54
  periodlab --config run.json
"""


def _int_list(raw: str) -> List[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}") from e


def _json_value(raw: str) -> Any:
    try:
        return json.loads(raw)
    except json.JSONDecodeError as e:
        raise argparse.ArgumentTypeError(f"expected a JSON value, got {raw!r}") from e


def _preset_or_list(raw: str) -> Any:
    if raw.lstrip().startswith("["):
        return _json_value(raw)
    return raw


def _add_common(parser: argparse.ArgumentParser) -> None:
    # SUPPRESS keeps a subparser from overwriting values given before the subcommand
    parser.add_argument("--config", default=argparse.SUPPRESS, help="JSON experiment config")
    parser.add_argument(
        "--format", choices=REPORT_FORMATS, default=argparse.SUPPRESS, help="Report format (default: json)"
    )
    parser.add_argument("--output", "-o", default=argparse.SUPPRESS, help="Report path (default: stdout)")
    parser.add_argument(
        "--verbose", "-v", action="store_true", default=argparse.SUPPRESS, help="Enable debug logging"
    )


def _add_ring(parser: argparse.ArgumentParser, e_list: bool = False) -> None:
    parser.add_argument("--map", dest="map_path", help="Map JSON file")
    parser.add_argument("--p", type=int, help="Residue characteristic")
    parser.add_argument("--f", type=int, help="Residue degree (default: 1)")
    if e_list:
        parser.add_argument("--e", dest="e_list", type=_int_list, help="Ramification indices, e.g. 1,2,3")
    else:
        parser.add_argument("--e", type=int, help="Ramification index (default: 1)")
        parser.add_argument(
            "--eisenstein", type=_preset_or_list, help="default, variant, zeta_p or a coefficient list"
        )
    parser.add_argument("--precision", type=int, help="Pi-adic precision N (default: 6e)")


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog="periodlab",
        description=f"{APP_NAME} - periodic points of p-adic dynamical systems and their period bounds",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
    )
    parser.add_argument("--version", action="version", version=f"{APP_NAME} v{__version__}")
    _add_common(parser)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    helps = {
        "census": "Special-fiber census of a map",
        "bounds": "Explicit period bounds from the census",
        "lift": "Hensel-lift every residue cycle",
        "find-periodic": "Periodic points up to n_max with certificates",
        "certify": "Exact period of one point",
    }
    for name, text in helps.items():
        cmd = sub.add_parser(name, help=text)
        _add_common(cmd)
        _add_ring(cmd)
        if name == "find-periodic":
            cmd.add_argument("--n-max", type=int, help="Largest period searched (default: 4)")
        if name == "certify":
            cmd.add_argument("--point", type=_json_value, help="Coordinates as JSON, e.g. '[1]'")

    cmd = sub.add_parser("verify", help="Base-change sweep checking invariance and bounds")
    _add_common(cmd)
    _add_ring(cmd, e_list=True)
    cmd.add_argument("--n-max", type=int, help="Largest period searched (default: 4)")

    cmd = sub.add_parser("power-map", help="Periods of p-power roots of unity under x -> x^q")
    _add_common(cmd)
    cmd.add_argument("--q", type=int)
    cmd.add_argument("--p", type=int)
    cmd.add_argument("--k-max", type=int, help="Largest level k (default: 10)")
    cmd.add_argument("--f", type=int, help="Residue degree for --contrast (default: 1)")
    cmd.add_argument(
        "--contrast", action="store_true", default=None, help="Add the bounded Teichmueller periods"
    )

    cmd = sub.add_parser("sieve", help="Primes that can carry torsion")
    _add_common(cmd)
    cmd.add_argument("--q", type=int)
    cmd.add_argument("--p", type=int)
    cmd.add_argument("--a", type=int, help="Congruence level (default: 1)")
    cmd.add_argument("--m-max", type=int, help="Period bound for the box (default: 6)")

    cmd = sub.add_parser("density", help="Share of primes that are 1 mod p^a")
    _add_common(cmd)
    cmd.add_argument("--p", type=int)
    cmd.add_argument("--X", type=int, help="Cutoff (default: 100000)")
    cmd.add_argument("--a-max", type=int, help="Report a ladder for a = 1..a_max")

    cmd = sub.add_parser("ec-torsion", help="Torsion primes of a curve with good reduction")
    _add_common(cmd)
    cmd.add_argument("--a4", type=_json_value)
    cmd.add_argument("--a6", type=_json_value)
    cmd.add_argument("--p", type=int)
    cmd.add_argument("--f", type=int, help="Residue degree (default: 1)")

    cmd = sub.add_parser("tower", help="Component-group stability along a ramified tower")
    _add_common(cmd)
    cmd.add_argument("--vdelta", dest="v_delta", type=int)
    cmd.add_argument("--p", type=int)
    cmd.add_argument("--e", dest="e_seq", type=_int_list, help="Ramification indices, e.g. 2,6,18")
    cmd.add_argument("--reduction", choices=("split", "other"))
    return parser


def flags_to_config(args: argparse.Namespace) -> Dict[str, Any]:
    """Config mapping from parsed flags; unset flags are left out."""
    values = {k: v for k, v in vars(args).items() if v is not None}
    values.pop("config", None)
    values.pop("verbose", None)
    if values.get("command") in DYNAMICS_COMMANDS:
        ring_keys = ("p", "f", "e", "eisenstein", "precision")
        ring = {k: values.pop(k) for k in ring_keys if k in values}
        if ring:
            values["ring"] = ring
    return {k.replace("-", "_"): v for k, v in values.items()}


class CLI:
    """Command-line application with dependency injection."""

    def __init__(
        self,
        config_adapter: ConfigAdapter,
        file_adapter: FileAdapter,
        logger_adapter: LoggerAdapter,
        logger: logging.Logger,
        settings: Optional[LabSettings] = None,
        stdout: Optional[BinaryIO] = None,
        stderr: Optional[TextIO] = None,
    ) -> None:
        self._config_adapter = config_adapter
        self._file_adapter = file_adapter
        self._logger_adapter = logger_adapter
        self._logger = logger
        self._settings = settings
        self._stdout = stdout
        self._stderr = stderr

    def _report_error(self, error: PeriodLabError) -> None:
        stream = self._stderr if self._stderr is not None else sys.stderr
        stream.write(json.dumps(error.to_dict(), sort_keys=True) + "\n")
        stream.flush()

    def _load_settings(self) -> LabSettings:
        try:
            return LabSettings.from_env()
        except ValueError as e:
            raise SchemaError(f"invalid environment settings: {e}") from e

    def run(self, argv: List[str]) -> int:
        """Parse arguments, run the experiment and return the exit code."""
        parser = build_parser()
        args = parser.parse_args(argv)
        if getattr(args, "verbose", False):
            self._logger_adapter.setup_logger(self._logger.name, level=logging.DEBUG)
        config_path = getattr(args, "config", None)
        if args.command is None and config_path is None:
            parser.print_help(self._stderr)
            return EXIT_DOMAIN

        try:
            overrides = flags_to_config(args)
            if config_path:
                config = self._config_adapter.load_config(config_path, overrides)
            else:
                config = self._config_adapter.build_config(overrides)
            settings = self._settings or self._load_settings()
            runner = ExperimentRunner(self._config_adapter, self._file_adapter, self._logger, settings)
            return runner.run(config, self._stdout)
        except PeriodLabError as e:
            self._logger_adapter.log_with_emoji(
                self._logger, logging.ERROR, LOG_EMOJI_ERROR, f"{e.code}: {e}"
            )
            self._report_error(e)
            return EXIT_DOMAIN
        except Exception as e:
            self._logger.debug("internal error", exc_info=True)
            self._logger_adapter.log_with_emoji(
                self._logger, logging.ERROR, LOG_EMOJI_ERROR, f"Internal error: {e}"
            )
            return EXIT_INTERNAL
