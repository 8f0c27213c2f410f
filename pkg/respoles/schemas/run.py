from enum import Enum
from pathlib import Path
from typing import Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from respoles.schemas.params import SystemParams
from respoles.schemas.poles import ContourBox
from respoles.schemas.stability import StabilityMode


class Command(str, Enum):
    POLES = "poles"
    KC = "kc"
    STABILITY_MAP = "stability-map"
    SIMULATE = "simulate"
    COMPARE = "compare"
    EXPANSION = "expansion"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class SimulationConfig(BaseModel):
    nodes: int = Field(..., ge=1)
    dt_divisor: int = Field(..., ge=4)
    T: Optional[float] = Field(None, gt=0, description="End time; defaults from the recurrence time")
    terms: int = Field(8, ge=1, description="Poles kept in a reconstruction")
    window_start: Optional[float] = Field(None, ge=0, description="Comparison window start; defaults to 2 tau")


class StabilityGridConfig(BaseModel):
    tau_min: float = Field(..., gt=0)
    tau_max: float = Field(..., gt=0)
    tau_count: int = Field(..., ge=1)
    k_min: float
    k_max: float
    k_count: int = Field(..., ge=1)
    mode: StabilityMode = StabilityMode.CLOSED_FORM


class OutputConfig(BaseModel):
    path: Optional[Path] = None
    format: OutputFormat = OutputFormat.CSV


class RunConfig(BaseModel):
    """One validated command invocation"""
    command: Command
    params: SystemParams
    region: Optional[ContourBox] = None
    branches: Optional[Tuple[int, int]] = None
    sim: Optional[SimulationConfig] = None
    grid: Optional[StabilityGridConfig] = None
    io: OutputConfig = OutputConfig()
    jobs: int = -1
    k_relative: Optional[float] = Field(None, description="k as a multiple of k_c when given that way")

    @model_validator(mode="after")
    def required_per_command(self) -> "RunConfig":
        needs_region = {Command.POLES, Command.COMPARE, Command.EXPANSION}
        needs_sim = {Command.SIMULATE, Command.COMPARE, Command.EXPANSION}
        if self.command in needs_region and self.region is None:
            raise ValueError(f"command '{self.command.value}' requires a region")
        if self.command in needs_sim and self.sim is None:
            raise ValueError(f"command '{self.command.value}' requires simulation settings")
        if self.command == Command.STABILITY_MAP and self.grid is None:
            raise ValueError("command 'stability-map' requires a tau/k grid")
        if self.branches is not None and self.branches[0] > self.branches[1]:
            raise ValueError("branch range must satisfy lo <= hi")
        return self
