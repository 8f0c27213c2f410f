import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator


class HalfPlaneTag(str, Enum):
    """Which branch of the continued pairing applies at a point."""
    RIGHT = "Right"
    AXIS = "Axis"
    LEFT = "Left"


class SystemParams(BaseModel):
    """Model tuple of the delayed linear evolution with Gaussian frequencies"""
    model_config = ConfigDict(frozen=True)

    k: float = Field(..., description="Coupling strength; any real value")
    tau: float = Field(..., gt=0, description="Delay")
    omega0: float = Field(..., description="Mean natural frequency")
    h: float = Field(..., gt=0, description="Gaussian concentration; variance is 1/(2h)")

    @field_validator("k", "tau", "omega0", "h")
    @classmethod
    def finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("parameters must be finite")
        return value

    def with_coupling(self, k: float) -> "SystemParams":
        return SystemParams(k=k, tau=self.tau, omega0=self.omega0, h=self.h)

    def with_concentration(self, h: float) -> "SystemParams":
        return SystemParams(k=self.k, tau=self.tau, omega0=self.omega0, h=h)
