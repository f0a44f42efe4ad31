"""
KPI summary of one experiment.
"""

import math
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field


class KpiSummary(BaseModel):
    """
    Admission rate, utility statistics and empirical CDF for a pooled task set.

    When no task was generated, `empty` is True and the rate/utility fields
    hold NaN.
    """

    admission_rate: float
    avg_utility: float
    median_utility: float
    ecdf: List[Tuple[float, float]] = Field(default_factory=list)
    task_count: int = 0
    mec_served_count: int = 0
    renege_count: int = 0
    balk_count: int = 0
    preempt_count: int = 0
    mean_observations_per_task: Optional[float] = None
    replication_spread: Dict[str, Tuple[float, float]] = Field(default_factory=dict)
    seed: Optional[int] = None
    empty: bool = False

    @classmethod
    def absent(cls) -> "KpiSummary":
        """KPI sentinel for an empty task set."""
        return cls(admission_rate=math.nan, avg_utility=math.nan, median_utility=math.nan, empty=True)
