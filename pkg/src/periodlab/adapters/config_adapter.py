"""Experiment configuration adapter for PeriodLab.

Loads run configs and map documents from JSON, validates them against the
pydantic schemas and turns them into the service-layer objects.
"""

import json
import logging
from typing import Any, Dict, Optional

from pydantic import ValidationError

from periodlab.adapters.file_adapter import FileAdapter
from periodlab.algebra.dvr_tower import RingSpec, dvr_make
from periodlab.domain.exceptions import SchemaError
from periodlab.domain.experiment_config import ExperimentConfig, MapSpecModel
from periodlab.domain.settings import LabSettings
from periodlab.services.dynamics_core import MapSpec


def _schema_error(what: str, error: ValidationError) -> SchemaError:
    problems = [
        {"loc": [str(part) for part in item["loc"]], "msg": item["msg"]}
        for item in error.errors(include_url=False, include_context=False, include_input=False)
    ]
    return SchemaError(f"{what} does not validate: {problems[0]['msg']}", {"errors": problems})


def merge_overrides(data: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Overlay non-None overrides on data; nested mappings such as ``ring`` merge key by key."""
    merged = dict(data)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_overrides(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigAdapter:
    """Builds validated experiment configs, maps and rings with dependency injection."""

    def __init__(self, logger: logging.Logger, file_adapter: Optional[FileAdapter] = None) -> None:
        """Initialize with injected logger and file adapter."""
        self._logger = logger
        self._files = file_adapter or FileAdapter(logger)

    def _read(self, path: str, what: str) -> Any:
        if not self._files.file_exists(path):
            raise SchemaError(f"{what} not found: {path}")
        try:
            return self._files.read_json(path)
        except json.JSONDecodeError as e:
            self._logger.error(f"Failed to parse {what} {path}: {e}")
            raise SchemaError(f"{what} {path} is not valid JSON: {e.msg}") from e

    def build_config(self, data: Dict[str, Any]) -> ExperimentConfig:
        """Validate a config mapping.

        Raises:
            SchemaError: If the mapping does not match ExperimentConfig
        """
        try:
            return ExperimentConfig.model_validate(data)
        except ValidationError as e:
            raise _schema_error("experiment config", e) from e

    def load_config(self, path: str, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
        """Load a config file; non-None overrides (from CLI flags) win over the file."""
        data = self._read(path, "config file")
        if not isinstance(data, dict):
            raise SchemaError(f"config file {path} must hold a JSON object")
        merged = merge_overrides(data, overrides or {})
        config = self.build_config(merged)
        self._logger.info(f"Loaded {config.command} config from {path}")
        return config

    def load_map(self, config: ExperimentConfig) -> MapSpec:
        """The map of a dynamics run, inline or from ``map_path``.

        Raises:
            SchemaError: If the map file is missing, not JSON, or malformed
        """
        if config.map is not None:
            model = config.map
        else:
            data = self._read(str(config.map_path), "map file")
            try:
                model = MapSpecModel.model_validate(data)
            except ValidationError as e:
                raise _schema_error(f"map file {config.map_path}", e) from e
            self._logger.debug(f"Loaded map from {config.map_path}")
        return MapSpec.from_dict(model.model_dump())

    def load_ring(self, config: ExperimentConfig, settings: LabSettings) -> RingSpec:
        """The ring O/pi^N named by ``config.ring``."""
        if config.ring is None:
            raise SchemaError(f"{config.command} needs a ring")
        spec = config.ring
        return dvr_make(
            spec.p, spec.f, spec.e, spec.eisenstein, spec.precision, settings.enumeration_cap
        )
