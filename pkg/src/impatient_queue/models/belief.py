"""
A user's belief about the remaining cloud sojourn time at queue position k.
"""

from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from impatient_queue.models.server import MmpSpec

PMF_TOLERANCE = 1e-9


class PoissonBelief(BaseModel):
    """
    Poisson-service belief: k remaining completions at rate `rate`, plus the
    offloading overhead when the task has not entered the queue yet.
    """

    model_config = ConfigDict(frozen=True)

    position: int = Field(..., ge=1)
    rate: float = Field(..., gt=0)
    offload_overhead: float = Field(0.0, ge=0)


class MmpBelief(BaseModel):
    """
    MMP-service belief: position, pmf of the current server state and the
    time already elapsed in the current period.
    """

    model_config = ConfigDict(frozen=True)

    position: int = Field(..., ge=1)
    state_pmf: Tuple[float, ...]
    spec: MmpSpec
    offset: float = Field(0.0, ge=0)

    @model_validator(mode="after")
    def check_pmf(self) -> "MmpBelief":
        if len(self.state_pmf) != self.spec.states:
            raise ValueError(f"state pmf has {len(self.state_pmf)} entries for {self.spec.states} states")
        if any(p < 0 for p in self.state_pmf):
            raise ValueError(f"state pmf has negative entries: {self.state_pmf}")
        if abs(sum(self.state_pmf) - 1.0) > PMF_TOLERANCE:
            raise ValueError(f"state pmf sums to {sum(self.state_pmf)}, not 1")
        if self.offset >= self.spec.period:
            raise ValueError(f"offset {self.offset} must be shorter than the period {self.spec.period}")
        return self

    @classmethod
    def known_state(cls, position: int, state: int, spec: MmpSpec, offset: float = 0.0) -> "MmpBelief":
        """Belief of a user who observed the server in `state`."""
        pmf = tuple(1.0 if d == state else 0.0 for d in range(spec.states))
        return cls(position=position, state_pmf=pmf, spec=spec, offset=offset)
