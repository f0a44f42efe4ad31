"""
KPI computation over completed tasks.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np

from impatient_queue.errors import ContractViolation
from impatient_queue.models.kpi import KpiSummary
from impatient_queue.models.task import ServedBy, Task

logger = logging.getLogger(__name__)


def empirical_cdf(values: Sequence[float]) -> List[Tuple[float, float]]:
    """(value, cumulative fraction) at each distinct value, ascending; the last fraction is 1."""
    unique, counts = np.unique(np.asarray(values, dtype=float), return_counts=True)
    fractions = np.cumsum(counts) / len(values)
    fractions[-1] = 1.0
    return [(float(u), float(f)) for u, f in zip(unique, fractions)]


def lower_median(values: Sequence[float]) -> float:
    """Median; for an even count, the lower of the two middle values."""
    ordered = np.sort(np.asarray(values, dtype=float))
    return float(ordered[(len(ordered) - 1) // 2])


def kpi_from_tasks(tasks: Sequence[Task], observing_tasks: int = 0, observations: int = 0) -> KpiSummary:
    """
    KPIs of a pooled task set.

    A task counts as admitted iff its computation completed at the MEC server.

    Args:
        tasks: Completed tasks
        observing_tasks: Tasks that learned from queue-position observations
        observations: Total observations made by those tasks

    Returns:
        The KPI summary; `KpiSummary.absent()` for an empty task set

    """
    if not tasks:
        logger.warning("No tasks to summarise; reporting absent KPIs")
        return KpiSummary.absent()
    if any(task.end_utility is None for task in tasks):
        raise ContractViolation("KPIs need every task completed")
    utilities = np.array([task.end_utility for task in tasks], dtype=float)
    served = [task.served_by for task in tasks]
    mec_served = served.count(ServedBy.MEC_SERVER)
    return KpiSummary(
        admission_rate=mec_served / len(tasks),
        avg_utility=float(np.mean(utilities)),
        median_utility=lower_median(utilities),
        ecdf=empirical_cdf(utilities),
        task_count=len(tasks),
        mec_served_count=mec_served,
        renege_count=served.count(ServedBy.LOCAL_AFTER_RENEGE),
        balk_count=served.count(ServedBy.LOCAL_DEVICE),
        preempt_count=served.count(ServedBy.LOCAL_AFTER_PREEMPT),
        mean_observations_per_task=observations / observing_tasks if observing_tasks else None,
    )
