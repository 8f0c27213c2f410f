import cmath
import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from respoles.core.config import settings
from respoles.core.exceptions import BetaZeroError, require
from respoles.schemas.stability import (
    StabilityCell,
    StabilityGrid,
    StabilityMode,
    StabilityRule,
    StabilityVerdict,
)
from respoles.services.specialfn_service import SpecialFunctionService, specialfn_service

logger = logging.getLogger(__name__)


def _clipped_arccos(x: float) -> float:
    return math.acos(min(1.0, max(-1.0, x)))


class StabilityService:
    """Stability of lam + alpha - beta exp(-lam tau) = 0 and the coupling threshold."""

    def __init__(self, special: SpecialFunctionService = specialfn_service):
        self.special = special

    def delayed_root_sign(self, alpha: complex, beta: complex, tau: float) -> StabilityVerdict:
        """Decide whether every root has a negative real part."""
        require(tau > 0, "tau must be positive", tau=tau)
        alpha, beta = complex(alpha), complex(beta)
        modulus = abs(beta)
        if modulus == 0:
            raise BetaZeroError("beta must be non-zero")
        re = alpha.real
        if re > modulus:
            return StabilityVerdict(stable=True, rule=StabilityRule.CONDITION_A, margin=re - modulus)
        if re <= -modulus:
            return StabilityVerdict(stable=False, rule=StabilityRule.UNSTABLE, margin=min(0.0, re + modulus))
        lhs = _clipped_arccos(math.cos(alpha.imag * tau + cmath.phase(beta)))
        rhs = _clipped_arccos(re / modulus) + tau * math.sqrt(modulus * modulus - re * re)
        margin = lhs - rhs
        if margin > 0:
            return StabilityVerdict(stable=True, rule=StabilityRule.CONDITION_B, margin=margin)
        return StabilityVerdict(stable=False, rule=StabilityRule.UNSTABLE, margin=margin)

    def rightmost_root_re(self, alpha: complex, beta: complex, tau: float) -> float:
        """Largest Re of (1/tau) W_n(beta tau exp(alpha tau)) - alpha over a widening branch range."""
        alpha, beta = complex(alpha), complex(beta)
        z = beta * tau * cmath.exp(alpha * tau)
        reach = settings.BRANCH_EXHAUSTION
        while True:
            branches = np.arange(-reach, reach + 1)
            roots = self.special.lambert_w_many(z, branches) / tau - alpha
            best = int(np.nanargmax(roots.real))
            if abs(branches[best]) < reach:
                return float(roots.real[best])
            logger.debug("rightmost root on branch edge %d, widening", branches[best])
            reach *= 2

    def lambert_verdict(self, alpha: complex, beta: complex, tau: float) -> StabilityVerdict:
        require(tau > 0, "tau must be positive", tau=tau)
        if complex(beta) == 0:
            raise BetaZeroError("beta must be non-zero")
        top = self.rightmost_root_re(alpha, beta, tau)
        if top < 0:
            rule = StabilityRule.CONDITION_A if complex(alpha).real > abs(beta) else StabilityRule.CONDITION_B
            return StabilityVerdict(stable=True, rule=rule, margin=-top)
        return StabilityVerdict(stable=False, rule=StabilityRule.UNSTABLE, margin=-top)

    def critical_coupling(self, tau: float, omega0: float) -> float:
        """k_c = (2/tau) arccos(cos(omega0 tau)) - pi/tau."""
        require(tau > 0, "tau must be positive", tau=tau)
        require(omega0 != 0, "critical coupling needs omega0 != 0")
        return 2.0 / tau * _clipped_arccos(math.cos(omega0 * tau)) - math.pi / tau

    def critical_coupling_pair(self, tau: float, omega0: float) -> Tuple[float, float]:
        """Signed thresholds (k_c-, k_c+); stable iff k_c- < k < k_c+ and k != 0."""
        kc = self.critical_coupling(tau, omega0)
        return min(0.0, kc), max(0.0, kc)

    def classify_coupling(self, k: float, tau: float, omega0: float) -> StabilityVerdict:
        kc = self.critical_coupling(tau, omega0)
        if k == 0:
            return StabilityVerdict(stable=False, rule=StabilityRule.UNSTABLE, margin=0.0)
        margin = abs(kc) - abs(k) if k * kc > 0 else -abs(k)
        if margin > 0:
            return StabilityVerdict(stable=True, rule=StabilityRule.CONDITION_B, margin=margin)
        return StabilityVerdict(stable=False, rule=StabilityRule.UNSTABLE, margin=min(margin, 0.0))

    def verdict(self, tau: float, k: float, omega0: float, mode: StabilityMode) -> StabilityVerdict:
        if mode is StabilityMode.CLOSED_FORM:
            return self.classify_coupling(k, tau, omega0)
        if k == 0:
            return StabilityVerdict(stable=False, rule=StabilityRule.UNSTABLE, margin=0.0)
        alpha, beta = -1j * omega0, 0.5 * k
        if mode is StabilityMode.NISHI:
            return self.delayed_root_sign(alpha, beta, tau)
        return self.lambert_verdict(alpha, beta, tau)

    def _row(self, tau: float, k_grid: Sequence[float], omega0: float, mode: StabilityMode) -> List[StabilityCell]:
        return [
            StabilityCell(tau=tau, k=k, verdict=self.verdict(tau, k, omega0, mode))
            for k in k_grid
        ]

    def stability_map(
        self,
        tau_grid: Sequence[float],
        k_grid: Sequence[float],
        omega0: float,
        mode: StabilityMode = StabilityMode.CLOSED_FORM,
        jobs: int = 1,
    ) -> StabilityGrid:
        """One verdict per (tau, k) cell, rows ordered by tau."""
        tau_grid = [float(t) for t in tau_grid]
        k_grid = [float(k) for k in k_grid]
        require(all(t > 0 for t in tau_grid), "all tau must be positive")
        if jobs == 1:
            rows = [self._row(tau, k_grid, omega0, mode) for tau in tau_grid]
        else:
            rows = Parallel(n_jobs=jobs)(
                delayed(self._row)(tau, k_grid, omega0, mode) for tau in tau_grid
            )
        logger.info("stability map %dx%d in mode %s", len(tau_grid), len(k_grid), mode.value)
        return StabilityGrid(omega0=omega0, mode=mode, rows=rows)


stability_service = StabilityService()
