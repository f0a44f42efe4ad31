"""
Experiments: the built-in scenario catalog, Monte-Carlo replications, KPIs
and reports.
"""

from impatient_queue.experiments.catalog import BENCHES, ScenarioRegistry, builtin_scenario
from impatient_queue.experiments.kpi import empirical_cdf, kpi_from_tasks, lower_median
from impatient_queue.experiments.report import REPORT_COLUMNS, ReportWriter, compare_report, read_report_csv
from impatient_queue.experiments.runner import MonteCarloRunner, run_monte_carlo

__all__ = [
    "BENCHES",
    "ScenarioRegistry",
    "builtin_scenario",
    "kpi_from_tasks",
    "empirical_cdf",
    "lower_median",
    "MonteCarloRunner",
    "run_monte_carlo",
    "REPORT_COLUMNS",
    "ReportWriter",
    "compare_report",
    "read_report_csv",
]
