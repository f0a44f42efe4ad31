"""
Discrete-event simulation of a single MEC server with balking and reneging users.
"""

from impatient_queue.sim.engine import SimulationResult, Simulator, ensure_scenario, run_simulation
from impatient_queue.sim.policies import (
    ArrivalDecision,
    TickDecision,
    UpdateDecision,
    on_arrival,
    on_position_update,
    on_service_tick,
)
from impatient_queue.sim.service import StatePath, draw_service_completion
from impatient_queue.sim.streams import make_streams, replication_seed

__all__ = [
    "Simulator",
    "SimulationResult",
    "run_simulation",
    "ensure_scenario",
    "ArrivalDecision",
    "UpdateDecision",
    "TickDecision",
    "on_arrival",
    "on_position_update",
    "on_service_tick",
    "StatePath",
    "draw_service_completion",
    "make_streams",
    "replication_seed",
]
