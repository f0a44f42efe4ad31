"""
Impatient Queue - risk-based balking and reneging for MEC task offloading.

This package provides tools for:
1. Risk-quantile offloading decisions under Poisson and MMP service beliefs
2. Online service-rate learning with optimal stopping under imperfect queue information
3. Discrete-event simulation of a single MEC server with impatient users
4. Monte-Carlo experiments, KPI reports and ECDF plots
"""

__version__ = "0.1.0"

from impatient_queue.experiments.catalog import ScenarioRegistry, builtin_scenario
from impatient_queue.experiments.runner import MonteCarloRunner, run_monte_carlo
from impatient_queue.parser.scenario_parser import ScenarioParser
from impatient_queue.sim.engine import Simulator, run_simulation

__all__ = [
    "ScenarioRegistry",
    "builtin_scenario",
    "MonteCarloRunner",
    "run_monte_carlo",
    "ScenarioParser",
    "Simulator",
    "run_simulation",
]
