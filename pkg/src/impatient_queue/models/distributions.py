"""
Distribution and utility parameter models.

These are small immutable value objects; the numerical work on them lives
in impatient_queue.dist.
"""

from pydantic import BaseModel, ConfigDict, Field


class UtilitySpec(BaseModel):
    """
    Latency-discounted utility u(dt) = u0 * exp(-beta * dt).

    beta = 0 is accepted as a degenerate, latency-insensitive utility.
    """

    model_config = ConfigDict(frozen=True)

    u0: float = Field(1.0, gt=0)
    beta: float = Field(0.1, ge=0)


class ExpDist(BaseModel):
    """Exponential distribution parameterised by its mean."""

    model_config = ConfigDict(frozen=True)

    mean: float = Field(..., gt=0)


class ErlangDist(BaseModel):
    """Erlang distribution: sum of `shape` exponentials with rate `rate`."""

    model_config = ConfigDict(frozen=True)

    shape: int = Field(..., ge=1)
    rate: float = Field(..., gt=0)
