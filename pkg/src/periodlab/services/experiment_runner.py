"""Experiment runner service.

Dispatches a validated ExperimentConfig to the lab services, serializes the
resulting report and delivers it to a file or to stdout.
"""

import logging
import sys
from dataclasses import dataclass
from typing import BinaryIO, Callable, Dict, Optional

from periodlab.adapters.config_adapter import ConfigAdapter
from periodlab.adapters.file_adapter import FileAdapter
from periodlab.algebra.residue_field import ff_make
from periodlab.config import LOG_EMOJI_DATA, LOG_EMOJI_SUCCESS, LOG_EMOJI_WARNING
from periodlab.domain.census import FiberCensus
from periodlab.domain.experiment_config import ExperimentConfig
from periodlab.domain.period_reports import VerificationReport
from periodlab.domain.settings import LabSettings
from periodlab.services.dynamics_core import map_validate, point_from_json, special_fiber_census
from periodlab.services.period_lab import (
    certify_period,
    compute_bounds,
    find_periodic_points,
    lift_all_cycles,
    verify_theorem,
)
from periodlab.services.power_map_lab import prime_to_p_contrast, unboundedness_report
from periodlab.services.report_emitter import Report, emit_report
from periodlab.services.torsion_sieve import (
    component_stability,
    density_estimate,
    density_ladder,
    good_reduction_torsion_primes,
    sieve,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_DOMAIN = 2


@dataclass(frozen=True)
class RunResult:
    """Outcome of one run.

    Attributes:
        report: The report record
        data: Serialized report bytes
        exit_code: 0, or 1 when a verification found a counterexample
    """

    report: Report
    data: bytes
    exit_code: int = EXIT_OK


class ExperimentRunner:
    """Runs experiments with dependency injection."""

    def __init__(
        self,
        config_adapter: ConfigAdapter,
        file_adapter: FileAdapter,
        logger: logging.Logger,
        settings: Optional[LabSettings] = None,
    ) -> None:
        self._config_adapter = config_adapter
        self._file_adapter = file_adapter
        self._logger = logger
        self._settings = settings or LabSettings()
        self._handlers: Dict[str, Callable[[ExperimentConfig], Report]] = {
            "census": self._census,
            "bounds": self._bounds,
            "lift": self._lift,
            "find-periodic": self._find_periodic,
            "certify": self._certify,
            "verify": self._verify,
            "power-map": self._power_map,
            "sieve": self._sieve,
            "density": self._density,
            "ec-torsion": self._ec_torsion,
            "tower": self._tower,
        }

    def _census(self, config: ExperimentConfig) -> FiberCensus:
        m = self._config_adapter.load_map(config)
        ring = self._config_adapter.load_ring(config, self._settings)
        map_validate(m, ring, self._settings.enumeration_cap)
        return special_fiber_census(m, ring.residue_field, self._settings.enumeration_cap)

    def _bounds(self, config: ExperimentConfig) -> Report:
        ring = self._config_adapter.load_ring(config, self._settings)
        census = self._census(config)
        return compute_bounds(census, ring.e, ring.p)

    def _lift(self, config: ExperimentConfig) -> Report:
        m = self._config_adapter.load_map(config)
        ring = self._config_adapter.load_ring(config, self._settings)
        return lift_all_cycles(m, ring, self._settings)

    def _find_periodic(self, config: ExperimentConfig) -> Report:
        m = self._config_adapter.load_map(config)
        ring = self._config_adapter.load_ring(config, self._settings)
        return find_periodic_points(m, config.n_max, ring, self._settings)

    def _certify(self, config: ExperimentConfig) -> Report:
        m = self._config_adapter.load_map(config)
        ring = self._config_adapter.load_ring(config, self._settings)
        point = point_from_json(m.space, config.point or [], ring)
        return certify_period(m, point, self._settings)

    def _verify(self, config: ExperimentConfig) -> Report:
        m = self._config_adapter.load_map(config)
        return verify_theorem(
            m,
            int(config.p),  # type: ignore[arg-type]
            config.f,
            config.e_list or [],
            config.n_max,
            config.precision,
            self._settings,
        )

    def _power_map(self, config: ExperimentConfig) -> Report:
        q, p = int(config.q), int(config.p)  # type: ignore[arg-type]
        if config.contrast:
            return prime_to_p_contrast(q, p, config.f, config.k_max)
        return unboundedness_report(q, p, config.k_max)

    def _sieve(self, config: ExperimentConfig) -> Report:
        return sieve(int(config.q), int(config.p), config.a, config.m_max, self._settings)  # type: ignore[arg-type]

    def _density(self, config: ExperimentConfig) -> Report:
        p = int(config.p)  # type: ignore[arg-type]
        if config.a_max is not None:
            return density_ladder(p, config.X, config.a_max)
        return density_estimate(p, config.X)

    def _ec_torsion(self, config: ExperimentConfig) -> Report:
        field = ff_make(int(config.p), config.f, self._settings.enumeration_cap)  # type: ignore[arg-type]
        return good_reduction_torsion_primes(config.a4, config.a6, field)  # type: ignore[arg-type]

    def _tower(self, config: ExperimentConfig) -> Report:
        return component_stability(
            int(config.v_delta), config.e_seq or [], int(config.p), config.reduction  # type: ignore[arg-type]
        )

    def execute(self, config: ExperimentConfig) -> RunResult:
        """Run the command and serialize its report (nothing is written).

        Raises:
            PeriodLabError: Domain errors from the services pass through
        """
        self._logger.info(f"{LOG_EMOJI_DATA} Running {config.command}")
        report = self._handlers[config.command](config)
        data = emit_report(report, config.format, title=config.command)
        exit_code = EXIT_OK
        if isinstance(report, VerificationReport) and not report.ok:
            self._logger.warning(
                f"{LOG_EMOJI_WARNING} {len(report.counterexamples)} counterexamples found"
            )
            exit_code = EXIT_INTERNAL
        return RunResult(report, data, exit_code)

    def run(self, config: ExperimentConfig, stdout: Optional[BinaryIO] = None) -> int:
        """Execute and deliver the report; returns the exit code."""
        result = self.execute(config)
        if config.output:
            self._file_adapter.write_report(config.output, result.data)
            self._logger.info(
                f"{LOG_EMOJI_SUCCESS} Report written to {config.output} "
                f"(sha256 {self._file_adapter.compute_hash(result.data)[:12]})"
            )
        else:
            stream = stdout if stdout is not None else sys.stdout.buffer
            stream.write(result.data)
            stream.flush()
        return result.exit_code
