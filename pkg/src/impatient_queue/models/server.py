"""
Service process models for the MEC server.

A server is either a consistent Poisson process or a Markov-modulated
Poisson (MMP) process whose state switches once per period according to a
discrete-time transition matrix.
"""

from typing import Literal, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

ROW_SUM_TOLERANCE = 1e-12


class MmpSpec(BaseModel):
    """
    Markov-modulated Poisson service specification.

    `transition[i][j]` is the probability of moving from state i to state j
    at a period boundary. Rows must sum to one.
    """

    model_config = ConfigDict(frozen=True)

    rates: Tuple[float, ...]
    transition: Tuple[Tuple[float, ...], ...]
    period: float = Field(1.0, gt=0)

    @model_validator(mode="after")
    def check_shape(self) -> "MmpSpec":
        d = len(self.rates)
        if d < 1:
            raise ValueError("an MMP needs at least one state")
        if any(r <= 0 for r in self.rates):
            raise ValueError(f"all service rates must be positive, got {self.rates}")
        if len(self.transition) != d or any(len(row) != d for row in self.transition):
            raise ValueError(f"transition matrix must be {d}x{d}")
        for i, row in enumerate(self.transition):
            if any(p < 0 or p > 1 for p in row):
                raise ValueError(f"transition row {i} has entries outside [0, 1]")
            if abs(sum(row) - 1.0) > ROW_SUM_TOLERANCE:
                raise ValueError(f"transition row {i} sums to {sum(row)}, not 1")
        return self

    @property
    def states(self) -> int:
        return len(self.rates)


class PoissonServer(BaseModel):
    """Consistent Poisson service with rate `rate`."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["poisson"] = "poisson"
    rate: float = Field(..., gt=0)


class MmpServer(BaseModel):
    """MMP service starting in `initial_state` (0-based)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["mmp"] = "mmp"
    spec: MmpSpec
    initial_state: int = Field(0, ge=0)

    @model_validator(mode="after")
    def check_initial_state(self) -> "MmpServer":
        if self.initial_state >= self.spec.states:
            raise ValueError(f"initial_state {self.initial_state} out of range for {self.spec.states} states")
        return self


ServerProcess = Union[PoissonServer, MmpServer]
