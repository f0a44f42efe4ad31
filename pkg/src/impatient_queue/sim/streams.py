"""
Named random substreams of one simulation run.

Every stream is derived from the run seed with its own spawn key, so a
policy that consumes more service draws never shifts the arrival, local
latency or server-state randomness (common random numbers across policies).
"""

from typing import Dict

import numpy as np

STREAM_NAMES = ("arrivals", "local_means", "local_draws", "service", "mmp_path")


def make_streams(seed: int) -> Dict[str, np.random.Generator]:
    """
    Build one generator per named stream.

    Args:
        seed: Run seed

    Returns:
        Mapping from stream name to an independent numpy Generator

    """
    return {
        name: np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
        for index, name in enumerate(STREAM_NAMES)
    }


def replication_seed(master_seed: int, replication: int) -> int:
    """Run seed of replication `replication`: a SeedSequence over (master_seed, replication)."""
    return int(np.random.SeedSequence([master_seed, replication]).generate_state(1)[0])
