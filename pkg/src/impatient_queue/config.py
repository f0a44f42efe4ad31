"""
Configuration management for impatient-queue.

This module handles run settings from environment variables,
default values, and user overrides.
"""

import os
from dataclasses import dataclass


@dataclass
class SimulatorSettings:
    """Settings shared by the experiment runner and the command line."""

    output_dir: str = "results"

    horizon: float = 300.0
    replications: int = 10
    master_seed: int = 1

    workers: int = 1
    log_level: str = "INFO"

    def __post_init__(self):
        """Initialize from environment variables if available."""
        self.output_dir = os.environ.get("IMPATIENT_QUEUE_OUTPUT_DIR", self.output_dir)
        self.horizon = float(os.environ.get("IMPATIENT_QUEUE_HORIZON", str(self.horizon)))
        self.replications = int(os.environ.get("IMPATIENT_QUEUE_REPLICATIONS", str(self.replications)))
        self.master_seed = int(os.environ.get("IMPATIENT_QUEUE_SEED", str(self.master_seed)))
        self.workers = int(os.environ.get("IMPATIENT_QUEUE_WORKERS", str(self.workers)))
        self.log_level = os.environ.get("IMPATIENT_QUEUE_LOG_LEVEL", self.log_level)


def get_settings() -> SimulatorSettings:
    """
    Get the current settings.

    Returns:
        A SimulatorSettings object with current settings

    """
    return SimulatorSettings()
