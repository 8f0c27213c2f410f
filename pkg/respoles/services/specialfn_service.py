import cmath
import logging
import math
from typing import Iterable

import numpy as np
from scipy import special

from respoles.core.config import settings
from respoles.core.exceptions import (
    BranchDomainError,
    ExponentOverflowError,
    NoConvergenceError,
    require,
)

logger = logging.getLogger(__name__)

TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


class SpecialFunctionService:
    """Lambert W branches, the Faddeeva function and the complex Gaussian density.

    Scipy supplies the raw evaluations; this service adds branch checks,
    residual polishing and typed overflow signals on top of them.
    """

    def __init__(
        self,
        max_iter: int = settings.LAMBERT_MAX_ITER,
        lambert_tol: float = settings.LAMBERT_TOL,
        exponent_limit: float = settings.JUMP_EXPONENT_LIMIT,
    ):
        self.max_iter = max_iter
        self.lambert_tol = lambert_tol
        self.exponent_limit = exponent_limit

    # Lambert W

    def lambert_w(self, branch: int, z: complex) -> complex:
        """Branch ``branch`` of the inverse of w -> w e^w at ``z``."""
        z = complex(z)
        require(cmath.isfinite(z), "Lambert W argument must be finite", z=z)
        if z == 0:
            if branch != 0:
                raise BranchDomainError("W_n(0) is undefined for n != 0", branch=branch)
            return 0j

        target = self.lambert_tol * max(1.0, abs(z))
        w = complex(special.lambertw(z, k=branch, tol=1e-15))
        if not cmath.isfinite(w):
            w = self._asymptotic_seed(branch, z)
        if abs(self._residual(w, z)) <= target:
            return w
        return self._halley(branch, z, w, target)

    def lambert_w_many(self, z: complex, branches: Iterable[int]) -> np.ndarray:
        """Unpolished values of several branches at one argument."""
        k = np.asarray(list(branches), dtype=int)
        return special.lambertw(complex(z), k=k)

    @staticmethod
    def _residual(w: complex, z: complex) -> complex:
        return w * cmath.exp(w) - z

    @staticmethod
    def _asymptotic_seed(branch: int, z: complex) -> complex:
        # Near the branch point the square-root series is the better start.
        p = 2.0 * (math.e * z + 1.0)
        if abs(p) < 0.3 and branch in (0, -1):
            root = cmath.sqrt(p)
            if branch == -1:
                root = -root
            return -1.0 + root - root * root / 3.0
        log_z = cmath.log(z) + 2j * math.pi * branch
        return log_z - cmath.log(log_z)

    def _halley(self, branch: int, z: complex, w: complex, target: float) -> complex:
        best, best_res = w, abs(self._residual(w, z))
        for iteration in range(self.max_iter):
            ew = cmath.exp(w)
            f = w * ew - z
            wp1 = w + 1.0
            if wp1 == 0:
                break
            step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
            w = w - step
            res = abs(self._residual(w, z))
            if res < best_res:
                best, best_res = w, res
            if best_res <= target:
                logger.debug("lambert_w polished branch %d in %d steps", branch, iteration + 1)
                return best
        raise NoConvergenceError(
            "Lambert W iteration did not converge",
            branch=branch,
            z=z,
            residual=best_res,
        )

    # Faddeeva

    def faddeeva(self, z: complex) -> complex:
        """w(z) = exp(-z^2) erfc(-iz) in every quadrant."""
        z = complex(z)
        if z.imag >= 0:
            return complex(special.wofz(z))
        exponent = -(z * z)
        if exponent.real > self.exponent_limit:
            raise ExponentOverflowError(
                "Faddeeva reflection term exceeds the float range", exponent=exponent.real
            )
        return 2.0 * cmath.exp(exponent) - complex(special.wofz(-z))

    def faddeeva_values(self, z: np.ndarray) -> np.ndarray:
        """Array form of :meth:`faddeeva` with the same overflow guard."""
        z = np.asarray(z, dtype=complex)
        lower = z.imag < 0
        if not np.any(lower):
            return special.wofz(z)
        exponent = -(z[lower] ** 2)
        worst = float(exponent.real.max())
        if worst > self.exponent_limit:
            raise ExponentOverflowError(
                "Faddeeva reflection term exceeds the float range", exponent=worst
            )
        out = special.wofz(np.where(lower, -z, z))
        out[lower] = 2.0 * np.exp(exponent) - out[lower]
        return out

    def faddeeva_deriv(self, z: complex) -> complex:
        z = complex(z)
        return -2.0 * z * self.faddeeva(z) + 1j * TWO_OVER_SQRT_PI

    # Gaussian density

    def gaussian_density_complex(self, h: float, omega0: float, zeta: complex) -> complex:
        """sqrt(h/pi) exp(-h (zeta - omega0)^2) at complex ``zeta``."""
        require(h > 0, "concentration h must be positive", h=h)
        exponent = -h * (complex(zeta) - omega0) ** 2
        if exponent.real > self.exponent_limit:
            raise ExponentOverflowError(
                "Gaussian density exponent exceeds the float range", exponent=exponent.real
            )
        return math.sqrt(h / math.pi) * cmath.exp(exponent)


specialfn_service = SpecialFunctionService()
