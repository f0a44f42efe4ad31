"""
Parser module for scenario files and event logs.
"""

from impatient_queue.parser.event_writer import EventLogWriter
from impatient_queue.parser.scenario_parser import ScenarioParser

__all__ = [
    "ScenarioParser",
    "EventLogWriter",
]
