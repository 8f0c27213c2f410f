from enum import Enum
from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator


class StabilityRule(str, Enum):
    CONDITION_A = "ConditionA"
    CONDITION_B = "ConditionB"
    UNSTABLE = "Unstable"


class StabilityMode(str, Enum):
    CLOSED_FORM = "closed_form"
    NISHI = "nishi"
    LAMBERT = "lambert"


class StabilityVerdict(BaseModel):
    """Outcome of a stability test with the slack of its deciding inequality"""
    model_config = ConfigDict(frozen=True)

    stable: bool
    rule: StabilityRule
    margin: float = Field(..., description="Left minus right of the deciding inequality")

    @model_validator(mode="after")
    def consistent(self) -> "StabilityVerdict":
        if self.stable and (self.rule == StabilityRule.UNSTABLE or self.margin <= 0):
            raise ValueError("a stable verdict needs a deciding condition and positive margin")
        if not self.stable and (self.rule != StabilityRule.UNSTABLE or self.margin > 0):
            raise ValueError("an unstable verdict must carry rule Unstable and margin <= 0")
        return self


class StabilityCell(BaseModel):
    tau: float
    k: float
    verdict: StabilityVerdict


class StabilityGrid(BaseModel):
    """Verdicts ordered by (tau index, k index)"""
    omega0: float
    mode: StabilityMode
    rows: List[List[StabilityCell]]

    def cells(self) -> List[StabilityCell]:
        return [cell for row in self.rows for cell in row]


class CriticalCoupling(BaseModel):
    tau: float
    omega0: float
    k_c: float
    k_minus: float = Field(..., description="Lower signed threshold min(0, k_c)")
    k_plus: float = Field(..., description="Upper signed threshold max(0, k_c)")
