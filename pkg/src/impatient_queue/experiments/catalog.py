"""
Built-in scenario catalog.

Catalog keys have the form `<scenario>/<method>`, e.g. `poisson-high/T5` or
`imperfect-high/fixed3`. Every entry uses lambda = 1.5, tau_s = 0, u0 = 1,
beta = 0.1 and T0 = 1; low load means mu = 2 and high load mu = 1.
"""

import logging
from typing import Dict, List, Optional, Tuple

from impatient_queue.errors import UnknownScenarioError
from impatient_queue.models.policy import (
    PatientFcfsPolicy,
    Policy,
    PreemptPolicy,
    RiskImperfectPolicy,
    RiskPerfectPolicy,
    TruncatePolicy,
)
from impatient_queue.models.scenario import LOCAL_MODEL_1, LOCAL_MODEL_2, LocalModel, ScenarioConfig
from impatient_queue.models.server import MmpServer, MmpSpec, PoissonServer, ServerProcess

LOW_LOAD_RATE = 2.0
HIGH_LOAD_RATE = 1.0

MMP_RATES = (LOW_LOAD_RATE, HIGH_LOAD_RATE)
MMP_TRANSITIONS = {
    "A": ((0.9, 0.1), (0.8, 0.2)),
    "B": ((0.7, 0.3), (0.3, 0.7)),
    "C": ((0.2, 0.8), (0.1, 0.9)),
}

PERFECT_METHODS: Dict[str, Policy] = {
    "R0.1": RiskPerfectPolicy(outage=0.001),
    "R10": RiskPerfectPolicy(outage=0.1),
    "T5": TruncatePolicy(max_length=5),
    "T10": TruncatePolicy(max_length=10),
    "P3": PreemptPolicy(timeout=3.0),
    "P6": PreemptPolicy(timeout=6.0),
    "fcfs": PatientFcfsPolicy(),
}

IMPERFECT_OUTAGE = 0.1
IMPERFECT_METHODS: Dict[str, Policy] = {
    "optlearn": RiskImperfectPolicy(outage=IMPERFECT_OUTAGE),
    "fixed3": RiskImperfectPolicy(outage=IMPERFECT_OUTAGE, min_observations=3),
    "fixed6": RiskImperfectPolicy(outage=IMPERFECT_OUTAGE, min_observations=6),
    "perfect": RiskPerfectPolicy(outage=IMPERFECT_OUTAGE),
}


def _mmp(label: str) -> MmpServer:
    return MmpServer(spec=MmpSpec(rates=MMP_RATES, transition=MMP_TRANSITIONS[label]), initial_state=0)


# scenario key -> (server, local model, method table)
SCENARIOS: Dict[str, Tuple[ServerProcess, LocalModel, Dict[str, Policy]]] = {
    "poisson-low": (PoissonServer(rate=LOW_LOAD_RATE), LOCAL_MODEL_1, PERFECT_METHODS),
    "poisson-high": (PoissonServer(rate=HIGH_LOAD_RATE), LOCAL_MODEL_1, PERFECT_METHODS),
    "mmpA": (_mmp("A"), LOCAL_MODEL_1, PERFECT_METHODS),
    "mmpB": (_mmp("B"), LOCAL_MODEL_1, PERFECT_METHODS),
    "mmpC": (_mmp("C"), LOCAL_MODEL_1, PERFECT_METHODS),
    "mmpC-model2": (_mmp("C"), LOCAL_MODEL_2, PERFECT_METHODS),
    "imperfect-low": (PoissonServer(rate=LOW_LOAD_RATE), LOCAL_MODEL_1, IMPERFECT_METHODS),
    "imperfect-high": (PoissonServer(rate=HIGH_LOAD_RATE), LOCAL_MODEL_1, IMPERFECT_METHODS),
    "imperfect-high-model2": (PoissonServer(rate=HIGH_LOAD_RATE), LOCAL_MODEL_2, IMPERFECT_METHODS),
}

BENCH_METHODS = ("R0.1", "R10", "T5", "T10", "P3", "P6")
BENCHES: Dict[str, Tuple[Tuple[str, ...], Tuple[str, ...]]] = {
    "table2": (("poisson-low", "poisson-high"), BENCH_METHODS),
    "table3": (("mmpA", "mmpB", "mmpC", "mmpC-model2"), BENCH_METHODS),
    "table4": (
        ("imperfect-low", "imperfect-high", "imperfect-high-model2"),
        ("optlearn", "fixed3", "fixed6", "perfect"),
    ),
}


class ScenarioRegistry:
    """
    Lookup service for the built-in experiments.

    The registry resolves catalog keys to validated ScenarioConfig objects
    and expands bench names into their ordered scenario lists.
    """

    def __init__(self, logger: Optional[logging.Logger] = None):
        """
        Initialize the registry.

        Args:
            logger: Logger for tracking lookups

        """
        self.logger = logger or logging.getLogger(__name__)
        self._entries: Dict[str, ScenarioConfig] = {}
        for scenario, (server, local_model, methods) in SCENARIOS.items():
            for method, policy in methods.items():
                name = f"{scenario}/{method}"
                self._entries[name] = ScenarioConfig(
                    name=name, server=server, local_model=local_model, policy=policy
                )

    def names(self) -> List[str]:
        """All catalog keys in catalog order."""
        return list(self._entries)

    def get(self, name: str) -> ScenarioConfig:
        """
        Resolve a catalog key.

        Args:
            name: Catalog key such as `mmpB/T10`

        Returns:
            The scenario configuration with default horizon, replications and seed

        """
        try:
            return self._entries[name]
        except KeyError:
            self.logger.error(f"Unknown scenario {name!r}")
            raise UnknownScenarioError(name, self.names()) from None

    def bench(self, bench: str) -> List[ScenarioConfig]:
        """Scenarios of a bench, grouped by scenario and ordered by method."""
        if bench not in BENCHES:
            self.logger.error(f"Unknown bench {bench!r}")
            raise UnknownScenarioError(bench, list(BENCHES))
        scenarios, methods = BENCHES[bench]
        return [self.get(f"{scenario}/{method}") for scenario in scenarios for method in methods]


_REGISTRY: Optional[ScenarioRegistry] = None


def builtin_scenario(name: str) -> ScenarioConfig:
    """Resolve a catalog key with the shared registry; unknown names raise UnknownScenarioError."""
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = ScenarioRegistry()
    return _REGISTRY.get(name)
