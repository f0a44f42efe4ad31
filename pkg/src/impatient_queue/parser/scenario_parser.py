"""
Parser for scenario configuration files.

This module reads JSON scenario files into validated ScenarioConfig models
and writes scenarios back out in the same schema.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError

from impatient_queue.errors import ConfigurationError
from impatient_queue.models.scenario import ScenarioConfig


class ScenarioParser:
    """
    Parser for scenario files.

    The JSON schema is the ScenarioConfig model itself: field names equal the
    model's, and `server` and `policy` objects are tagged by `kind`.
    """

    def __init__(self, logger: Optional[logging.Logger] = None):
        """Initialize the parser."""
        self.logger = logger or logging.getLogger(__name__)

    def parse_dict(self, data: Dict[str, Any]) -> ScenarioConfig:
        """
        Validate a scenario mapping.

        Args:
            data: Mapping in the scenario file schema

        Returns:
            The validated scenario

        """
        try:
            return ScenarioConfig.model_validate(data)
        except ValidationError as e:
            self.logger.error(f"Invalid scenario: {e}")
            raise ConfigurationError(f"invalid scenario: {e}") from e

    def parse_json(self, text: str) -> ScenarioConfig:
        try:
            return ScenarioConfig.model_validate_json(text)
        except ValidationError as e:
            self.logger.error(f"Invalid scenario: {e}")
            raise ConfigurationError(f"invalid scenario: {e}") from e

    def parse_file(self, path: Path) -> ScenarioConfig:
        """
        Read and validate a scenario file.

        Args:
            path: Path to a JSON scenario file

        Returns:
            The validated scenario

        """
        path = Path(path)
        self.logger.info(f"Reading scenario from {path}")
        return self.parse_json(path.read_text())

    def write_file(self, scenario: ScenarioConfig, path: Path) -> Path:
        """Write a scenario so that parse_file reproduces it exactly."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(scenario.model_dump(mode="json"), indent=2) + "\n")
        self.logger.info(f"Wrote scenario to {path}")
        return path
