"""
Task lifecycle and event records produced by the simulator.
"""

from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field


class Decision(str, Enum):
    """Offloading decision: compute locally or in the MEC cloud."""

    LOCAL = "Local"
    CLOUD = "Cloud"


class ServedBy(str, Enum):
    """Where a task's computation finally completed."""

    MEC_SERVER = "MecServer"
    LOCAL_DEVICE = "LocalDevice"
    LOCAL_AFTER_RENEGE = "LocalAfterRenege"
    LOCAL_AFTER_PREEMPT = "LocalAfterPreempt"


class EventKind(str, Enum):
    """Kinds of simulator event records."""

    ARRIVAL = "Arrival"
    SERVICE_START = "ServiceStart"
    SERVICE_COMPLETE = "ServiceComplete"
    RENEGE = "Renege"
    BALK = "Balk"
    PREEMPT = "Preempt"
    STATE_SWITCH = "StateSwitch"
    QSI_UPDATE = "QsiUpdate"


class Task(BaseModel):
    """
    One computing job from generation to completion.

    `decision_trace` holds every decision taken for the task; once Local
    appears, no Cloud entry may follow.
    """

    id: int
    arrival_time: float
    local_mean: float = Field(..., gt=0)
    decision_trace: List[Tuple[float, Decision]] = Field(default_factory=list)
    entry_position: Optional[int] = None
    observations: int = 0
    served_by: Optional[ServedBy] = None
    completion_time: Optional[float] = None
    end_utility: Optional[float] = None


class EventRecord(BaseModel):
    """One entry of the simulator's event log."""

    time: float
    kind: EventKind
    task_id: Optional[int] = None
    queue_length: int = Field(..., ge=0)
    position: Optional[int] = None
    state: Optional[int] = None
