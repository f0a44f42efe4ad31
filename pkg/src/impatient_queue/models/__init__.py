"""
Models for impatient-queue.

This module contains Pydantic models for the queueing domain: distributions,
server processes, policies, tasks, scenarios and KPI summaries.
"""

from impatient_queue.models.belief import MmpBelief, PoissonBelief
from impatient_queue.models.distributions import ErlangDist, ExpDist, UtilitySpec
from impatient_queue.models.kpi import KpiSummary
from impatient_queue.models.learner import ObservationLog
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
from impatient_queue.models.task import Decision, EventKind, EventRecord, ServedBy, Task

__all__ = [
    "UtilitySpec",
    "ExpDist",
    "ErlangDist",
    "MmpSpec",
    "PoissonBelief",
    "MmpBelief",
    "ObservationLog",
    "PoissonServer",
    "MmpServer",
    "ServerProcess",
    "RiskPerfectPolicy",
    "RiskImperfectPolicy",
    "TruncatePolicy",
    "PreemptPolicy",
    "PatientFcfsPolicy",
    "Policy",
    "LocalModel",
    "LOCAL_MODEL_1",
    "LOCAL_MODEL_2",
    "ScenarioConfig",
    "Task",
    "Decision",
    "ServedBy",
    "EventKind",
    "EventRecord",
    "KpiSummary",
]
