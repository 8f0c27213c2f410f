import math
from typing import Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from respoles.core.config import settings
from respoles.schemas.common import ComplexValue
from respoles.schemas.params import SystemParams


class Pole(BaseModel):
    """A located resonance pole with its residue weight"""
    model_config = ConfigDict(populate_by_name=True, frozen=True)

    lam: ComplexValue = Field(..., alias="lambda", description="Pole position")
    residue: ComplexValue = Field(..., description="Residue weight D_p")
    seed_branch: Optional[int] = Field(
        None, description="Lambert branch that seeded the pole; absent for box-search finds"
    )
    newton_iters: int = Field(..., ge=0)
    final_residual: float = Field(..., ge=0)

    @field_validator("residue")
    @classmethod
    def nonzero_residue(cls, value: complex) -> complex:
        if value == 0:
            raise ValueError("residue of a simple pole cannot vanish")
        return value

    @field_validator("final_residual")
    @classmethod
    def converged(cls, value: float) -> float:
        if value > settings.POLE_RESIDUAL_MAX:
            raise ValueError(f"residual {value:.3e} above {settings.POLE_RESIDUAL_MAX:.0e}")
        return value


class ContourBox(BaseModel):
    """Axis-aligned rectangle in the complex plane"""
    model_config = ConfigDict(frozen=True)

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    @model_validator(mode="after")
    def ordered(self) -> "ContourBox":
        values = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("box bounds must be finite")
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("box bounds must satisfy re_min < re_max and im_min < im_max")
        return self

    @classmethod
    def around(cls, center: complex, half_width: float) -> "ContourBox":
        return cls(
            re_min=center.real - half_width,
            re_max=center.real + half_width,
            im_min=center.imag - half_width,
            im_max=center.imag + half_width,
        )

    @classmethod
    def parse(cls, text: str) -> "ContourBox":
        """Build a box from ``re_min:re_max:im_min:im_max``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError("region must look like re_min:re_max:im_min:im_max")
        re_min, re_max, im_min, im_max = (float(part) for part in parts)
        return cls(re_min=re_min, re_max=re_max, im_min=im_min, im_max=im_max)

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (
            self.re_min + margin < z.real < self.re_max - margin
            and self.im_min + margin < z.imag < self.im_max - margin
        )

    def inflate(self, fraction: float) -> "ContourBox":
        dx = 0.5 * fraction * self.width
        dy = 0.5 * fraction * self.height
        return ContourBox(
            re_min=self.re_min - dx,
            re_max=self.re_max + dx,
            im_min=self.im_min - dy,
            im_max=self.im_max + dy,
        )

    def clamp_left(self, re_floor: float) -> "ContourBox":
        if self.re_min >= re_floor:
            return self
        return ContourBox(
            re_min=re_floor, re_max=self.re_max, im_min=self.im_min, im_max=self.im_max
        )

    def split(self, fraction: float = 0.5) -> List["ContourBox"]:
        """Quarter the box at ``fraction`` of its width and height."""
        xm = self.re_min + fraction * self.width
        ym = self.im_min + fraction * self.height
        return [
            ContourBox(re_min=self.re_min, re_max=xm, im_min=self.im_min, im_max=ym),
            ContourBox(re_min=xm, re_max=self.re_max, im_min=self.im_min, im_max=ym),
            ContourBox(re_min=self.re_min, re_max=xm, im_min=ym, im_max=self.im_max),
            ContourBox(re_min=xm, re_max=self.re_max, im_min=ym, im_max=self.im_max),
        ]

    def strips(self, count: int, shift: float = 0.0) -> List["ContourBox"]:
        """Cut along the longer side into ``count`` pieces; interior cuts move by ``shift`` pieces."""
        if count <= 1:
            return [self]
        cuts = [(i + (shift if 0 < i < count else 0.0)) / count for i in range(count + 1)]
        if self.height >= self.width:
            ys = [self.im_min + c * self.height for c in cuts]
            return [
                ContourBox(re_min=self.re_min, re_max=self.re_max, im_min=lo, im_max=hi)
                for lo, hi in zip(ys[:-1], ys[1:])
            ]
        xs = [self.re_min + c * self.width for c in cuts]
        return [
            ContourBox(re_min=lo, re_max=hi, im_min=self.im_min, im_max=self.im_max)
            for lo, hi in zip(xs[:-1], xs[1:])
        ]

    def edges(self) -> Iterator[Tuple[complex, complex]]:
        """Boundary segments in counter-clockwise order."""
        a = complex(self.re_min, self.im_min)
        b = complex(self.re_max, self.im_min)
        c = complex(self.re_max, self.im_max)
        d = complex(self.re_min, self.im_max)
        yield a, b
        yield b, c
        yield c, d
        yield d, a


class PoleTable(BaseModel):
    """Poles of one parameter set, as written by the command line"""
    params: SystemParams
    region: ContourBox
    count: int
    poles: List[Pole]
