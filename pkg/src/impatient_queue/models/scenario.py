"""
Scenario configuration: everything one Monte-Carlo experiment needs.
"""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from impatient_queue.models.distributions import UtilitySpec
from impatient_queue.models.policy import Policy
from impatient_queue.models.server import ServerProcess


class LocalModel(BaseModel):
    """Per-task mean local latency drawn from Uniform(low, high)."""

    model_config = ConfigDict(frozen=True)

    name: str = "model1"
    low: float = Field(2.0, gt=0)
    high: float = Field(10.0, gt=0)

    @model_validator(mode="after")
    def check_bounds(self) -> "LocalModel":
        if self.low >= self.high:
            raise ValueError(f"local model bounds must be ordered, got ({self.low}, {self.high})")
        return self


LOCAL_MODEL_1 = LocalModel(name="model1", low=2.0, high=10.0)
LOCAL_MODEL_2 = LocalModel(name="model2", low=4.0, high=15.0)


class ScenarioConfig(BaseModel):
    """
    A complete experiment definition.

    The JSON form of this model is the documented config-file schema.
    """

    model_config = ConfigDict(frozen=True)

    name: str = "custom"
    arrival_rate: float = Field(1.5, gt=0)
    local_model: LocalModel = LOCAL_MODEL_1
    offload_overhead: float = Field(0.0, ge=0)
    server: ServerProcess = Field(..., discriminator="kind")
    policy: Policy = Field(..., discriminator="kind")
    utility: UtilitySpec = UtilitySpec()
    horizon: float = Field(300.0, gt=0)
    period: float = Field(1.0, gt=0)
    replications: int = Field(10, ge=1)
    master_seed: int = Field(1, ge=0)

    @model_validator(mode="after")
    def check_period(self) -> "ScenarioConfig":
        if self.server.kind == "mmp" and abs(self.server.spec.period - self.period) > 1e-12:
            raise ValueError(
                f"MMP period {self.server.spec.period} differs from scenario period {self.period}"
            )
        return self
