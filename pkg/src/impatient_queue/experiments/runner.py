"""
Monte-Carlo replication runner.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Tuple, Union

from impatient_queue.experiments.kpi import kpi_from_tasks
from impatient_queue.models.kpi import KpiSummary
from impatient_queue.models.policy import RiskImperfectPolicy
from impatient_queue.models.scenario import ScenarioConfig
from impatient_queue.models.task import Task
from impatient_queue.sim.engine import ensure_scenario, run_simulation
from impatient_queue.sim.streams import replication_seed

SPREAD_FIELDS = ("admission_rate", "avg_utility", "median_utility")


def _replicate(scenario: ScenarioConfig, replication: int) -> List[Task]:
    tasks, _ = run_simulation(scenario, replication_seed(scenario.master_seed, replication), record_events=False)
    return tasks


class MonteCarloRunner:
    """
    Runs every replication of a scenario and pools the tasks.

    Replication r uses the run seed derived from (master_seed, r). Results
    are gathered in replication order, so a process pool gives exactly the
    sequential output.
    """

    def __init__(self, workers: int = 1, logger: Optional[logging.Logger] = None):
        self.workers = max(1, workers)
        self.logger = logger or logging.getLogger(__name__)

    def replicate(self, scenario: ScenarioConfig) -> List[List[Task]]:
        indices = range(scenario.replications)
        if self.workers == 1 or scenario.replications == 1:
            return [_replicate(scenario, r) for r in indices]
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(_replicate, [scenario] * scenario.replications, indices))

    def run(self, scenario: Union[ScenarioConfig, Dict[str, Any]]) -> KpiSummary:
        """
        Run a scenario's replications and summarise the pooled tasks.

        Args:
            scenario: Scenario model or mapping

        Returns:
            Pooled KPIs with the per-replication min/max spread

        """
        scenario = ensure_scenario(scenario)
        self.logger.info(
            f"Running {scenario.name}: {scenario.replications} replications x {scenario.horizon} time units"
        )
        per_replication = self.replicate(scenario)
        pooled = [task for tasks in per_replication for task in tasks]

        observing = 0
        observations = 0
        if isinstance(scenario.policy, RiskImperfectPolicy):
            entered = [task for task in pooled if task.entry_position is not None]
            observing = len(entered)
            observations = sum(task.observations for task in entered)

        summary = kpi_from_tasks(pooled, observing_tasks=observing, observations=observations)
        summary.seed = scenario.master_seed
        summary.replication_spread = _spread([kpi_from_tasks(tasks) for tasks in per_replication if tasks])
        self.logger.info(
            f"Finished {scenario.name}: {summary.task_count} tasks, admission {summary.admission_rate:.4f}, "
            f"average utility {summary.avg_utility:.4f}"
        )
        return summary


def _spread(summaries: List[KpiSummary]) -> Dict[str, Tuple[float, float]]:
    if not summaries:
        return {}
    spread = {}
    for name in SPREAD_FIELDS:
        values = [getattr(summary, name) for summary in summaries]
        spread[name] = (min(values), max(values))
    return spread


def run_monte_carlo(scenario: Union[ScenarioConfig, Dict[str, Any]], workers: int = 1) -> KpiSummary:
    """Pooled KPIs over all replications of `scenario`; deterministic in its master seed."""
    return MonteCarloRunner(workers=workers).run(scenario)
