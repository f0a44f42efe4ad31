"""
Congestion-control policies.

Each policy is a pydantic model tagged by `kind`, so a policy can be read
straight out of a JSON scenario file.
"""

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class RiskPerfectPolicy(BaseModel):
    """Risk-quantile balking/reneging with perfect queue status information."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["risk-perfect"] = "risk-perfect"
    outage: float = Field(..., gt=0, lt=1)


class RiskImperfectPolicy(BaseModel):
    """
    Risk-quantile reneging with position-only observations and online rate learning.

    With `min_observations` unset the optimal stopping rule decides when to stop
    learning; with it set, the learning-saturation test is replaced by
    "at least `min_observations` observations".
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["risk-imperfect"] = "risk-imperfect"
    outage: float = Field(..., gt=0, lt=1)
    prior_rate: Optional[float] = Field(None, gt=0)
    min_observations: Optional[int] = Field(None, ge=1)


class TruncatePolicy(BaseModel):
    """Arrivals balk when the system holds `max_length` tasks (waiting plus in service)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["truncate"] = "truncate"
    max_length: int = Field(..., ge=1)


class PreemptPolicy(BaseModel):
    """Service longer than `timeout` is aborted and the task computed locally."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["preempt"] = "preempt"
    timeout: float = Field(..., gt=0)


class PatientFcfsPolicy(BaseModel):
    """Everyone offloads and waits."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["patient-fcfs"] = "patient-fcfs"


Policy = Union[RiskPerfectPolicy, RiskImperfectPolicy, TruncatePolicy, PreemptPolicy, PatientFcfsPolicy]
