from typing import Callable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from respoles.schemas.common import ComplexArray, ComplexValue, FloatArray


class QuadratureRule(BaseModel):
    """Frequency nodes and weights discretizing the Gaussian average"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    nodes: FloatArray
    weights: FloatArray

    @model_validator(mode="after")
    def check(self) -> "QuadratureRule":
        if self.nodes.shape != self.weights.shape or self.nodes.size == 0:
            raise ValueError("nodes and weights must be non-empty and of equal length")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to one")
        return self

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def average(self, values: np.ndarray) -> complex:
        return complex(np.dot(self.weights, values))


class ExpTerm(BaseModel):
    """One term c * exp(i a omega) of the initial state"""
    c: ComplexValue
    a: float = Field(0.0, ge=0)


class InitialData(BaseModel):
    """Initial state x and history f(s) = phi(s) x on [-tau, 0]"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    exp_terms: List[ExpTerm]
    history_profile: ComplexArray

    @field_validator("exp_terms")
    @classmethod
    def non_empty(cls, value: List[ExpTerm]) -> List[ExpTerm]:
        if not value:
            raise ValueError("at least one exponential term is required")
        return value

    @field_validator("history_profile")
    @classmethod
    def anchored(cls, value: np.ndarray) -> np.ndarray:
        if value.size < 2:
            raise ValueError("history profile needs at least two samples")
        if abs(value[-1] - 1.0) > 1e-12:
            raise ValueError("history profile must equal 1 at s = 0")
        return value

    @classmethod
    def constant(cls, m: int, exp_terms: Optional[List[ExpTerm]] = None) -> "InitialData":
        """phi = 1 on m + 1 samples; x = 1 unless terms are given."""
        terms = exp_terms or [ExpTerm(c=1.0, a=0.0)]
        return cls(exp_terms=terms, history_profile=np.ones(m + 1, dtype=complex))

    @classmethod
    def from_profile(
        cls,
        phi: Callable[[np.ndarray], np.ndarray],
        tau: float,
        m: int,
        exp_terms: Optional[List[ExpTerm]] = None,
    ) -> "InitialData":
        s = np.linspace(-tau, 0.0, m + 1)
        terms = exp_terms or [ExpTerm(c=1.0, a=0.0)]
        return cls(exp_terms=terms, history_profile=np.asarray(phi(s), dtype=complex))

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([term.c for term in self.exp_terms], dtype=complex)

    @property
    def shifts(self) -> np.ndarray:
        return np.array([term.a for term in self.exp_terms], dtype=float)

    def state(self, omega: np.ndarray) -> np.ndarray:
        """x(omega) = sum_m c_m exp(i a_m omega)."""
        omega = np.asarray(omega, dtype=float)
        return np.exp(1j * np.outer(omega, self.shifts)) @ self.coefficients


class TimeGrid(BaseModel):
    t0: float = 0.0
    dt: float = Field(..., gt=0)
    n: int = Field(..., ge=1)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)


class TimeSeries(BaseModel):
    """Uniformly sampled order parameter r(t)"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    t0: float = 0.0
    dt: float = Field(..., gt=0)
    values: ComplexArray

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.values.size)

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid(t0=self.t0, dt=self.dt, n=self.values.size)

    def window_mask(self, t_lo: float, t_hi: float) -> np.ndarray:
        t = self.times
        slack = 1e-9 * self.dt
        return (t >= t_lo - slack) & (t <= t_hi + slack)


class DecayFit(BaseModel):
    rate: float
    r2: float
    samples: int


class CompareSummary(BaseModel):
    """Simulation against pole expansion on one comparison window"""
    fitted_rate: float
    fit_r2: float
    leading_pole_re: Optional[float] = None
    relative_gap: Optional[float] = None
    l2_mismatch: Optional[float] = None
    window_lo: float
    window_hi: float
    poles: int
    terms: int
