import cmath
import logging
import math
import warnings
from typing import Tuple

import numpy as np
from scipy import integrate

from respoles.core.config import settings
from respoles.core.exceptions import (
    ExponentOverflowError,
    OnAxisError,
    QuadratureError,
    require,
)
from respoles.schemas.params import HalfPlaneTag, SystemParams
from respoles.services.specialfn_service import SpecialFunctionService, specialfn_service

logger = logging.getLogger(__name__)

SQRT_PI = math.sqrt(math.pi)
TWO_OVER_SQRT_PI = 2.0 / SQRT_PI


class DispersionService:
    """Characteristic functions of the delayed Gaussian model.

    With mu = lam - i omega0 and a = sqrt(h) mu the Gaussian Cauchy integral is
    sqrt(h pi) w(i a) for Re lam > 0 and -sqrt(h pi) w(-i a) for Re lam < 0.
    The continued pairing adds the jump 2 pi g(lam / i) on the left, which makes
    it equal to sqrt(h pi) w(i a) everywhere.
    """

    def __init__(self, special: SpecialFunctionService = specialfn_service):
        self.special = special
        self.axis_epsilon = settings.AXIS_EPSILON
        self.exponent_limit = settings.JUMP_EXPONENT_LIMIT

    # helpers

    def half_plane(self, lam: complex) -> HalfPlaneTag:
        re = complex(lam).real
        if abs(re) <= self.axis_epsilon:
            return HalfPlaneTag.AXIS
        return HalfPlaneTag.RIGHT if re > 0 else HalfPlaneTag.LEFT

    def _exp(self, x: complex, what: str) -> complex:
        if x.real > self.exponent_limit:
            raise ExponentOverflowError(f"{what} exceeds the float range", exponent=x.real)
        return cmath.exp(x)

    def _jump(self, lam: complex, p: SystemParams) -> complex:
        """2 pi g(lam / i), the residue contribution picked up crossing the axis."""
        return 2.0 * math.pi * self.special.gaussian_density_complex(p.h, p.omega0, lam / 1j)

    @staticmethod
    def _scaled(lam: complex, p: SystemParams) -> complex:
        return math.sqrt(p.h) * (complex(lam) - 1j * p.omega0)

    # identical-frequency limit

    def char_identical(self, lam: complex, p: SystemParams) -> complex:
        """lam - i omega0 - (k/2) exp(-lam tau)."""
        lam = complex(lam)
        return lam - 1j * p.omega0 - 0.5 * p.k * self._exp(-lam * p.tau, "exp(-lam tau)")

    def identical_limit(self, lam: complex, p: SystemParams) -> complex:
        """(k/2) exp(-lam tau) / (lam - i omega0); equals 1 at the Lambert roots."""
        lam = complex(lam)
        return 0.5 * p.k * self._exp(-lam * p.tau, "exp(-lam tau)") / (lam - 1j * p.omega0)

    # Gaussian Cauchy integral and its continuation

    def cauchy_gauss(self, lam: complex, p: SystemParams) -> complex:
        """The convergent integral of g(omega) / (lam - i omega) off the axis."""
        tag = self.half_plane(lam)
        if tag is HalfPlaneTag.AXIS:
            raise OnAxisError("Cauchy integral is singular on the imaginary axis", lam=lam)
        a = self._scaled(lam, p)
        scale = math.sqrt(p.h * math.pi)
        if tag is HalfPlaneTag.RIGHT:
            return scale * self.special.faddeeva(1j * a)
        return -scale * self.special.faddeeva(-1j * a)

    def cauchy_gauss_asymptotic(self, lam: complex, p: SystemParams, order: int = 1) -> complex:
        """Large-h expansion (1/mu) sum_n (-1)^n (2n-1)!! / (2 h mu^2)^n."""
        require(order >= 0, "order must be non-negative", order=order)
        mu = complex(lam) - 1j * p.omega0
        x = 1.0 / (2.0 * p.h * mu * mu)
        term, total = 1.0 + 0j, 1.0 + 0j
        for n in range(1, order + 1):
            term *= -(2 * n - 1) * x
            total += term
        return total / mu

    def continued_pairing_II(self, lam: complex, p: SystemParams) -> complex:
        """<A(lam) 1 | 1>: right value, Plemelj boundary value, or left value plus jump."""
        lam = complex(lam)
        tag = self.half_plane(lam)
        if tag is HalfPlaneTag.AXIS:
            return math.sqrt(p.h * math.pi) * self.special.faddeeva(1j * self._scaled(lam, p))
        value = self.cauchy_gauss(lam, p)
        if tag is HalfPlaneTag.LEFT:
            value += self._jump(lam, p)
        return value

    def continued_pairing_deriv(self, lam: complex, p: SystemParams) -> complex:
        lam = complex(lam)
        a = self._scaled(lam, p)
        factor = 1j * p.h * SQRT_PI
        if self.half_plane(lam) is not HalfPlaneTag.LEFT:
            return factor * self.special.faddeeva_deriv(1j * a)
        mu = lam - 1j * p.omega0
        return factor * self.special.faddeeva_deriv(-1j * a) + self._jump(lam, p) * 2.0 * p.h * mu

    # generalized characteristic function

    def gen_char(self, lam: complex, p: SystemParams) -> complex:
        """F(lam) = 1 - (k/2) exp(-lam tau) <A(lam) 1 | 1>."""
        if p.k == 0:
            return 1.0 + 0j
        lam = complex(lam)
        decay = self._exp(-lam * p.tau, "exp(-lam tau)")
        return 1.0 - 0.5 * p.k * decay * self.continued_pairing_II(lam, p)

    def gen_char_deriv(self, lam: complex, p: SystemParams) -> complex:
        if p.k == 0:
            return 0j
        lam = complex(lam)
        decay = self._exp(-lam * p.tau, "exp(-lam tau)")
        pairing = self.continued_pairing_II(lam, p)
        deriv = self.continued_pairing_deriv(lam, p)
        return -0.5 * p.k * decay * (deriv - p.tau * pairing)

    def gen_char_values(self, lams: np.ndarray, p: SystemParams) -> np.ndarray:
        """F on an array of points, used for contour edges."""
        return self.gen_char_and_deriv_values(lams, p)[0]

    def gen_char_and_deriv_values(self, lams: np.ndarray, p: SystemParams) -> Tuple[np.ndarray, np.ndarray]:
        """F and dF/dlam on an array of points."""
        lams = np.asarray(lams, dtype=complex)
        if p.k == 0:
            return np.ones_like(lams), np.zeros_like(lams)
        a = math.sqrt(p.h) * (lams - 1j * p.omega0)
        exponent = -lams * p.tau
        jump = np.where(lams.real < 0, np.maximum((a * a).real, 0.0), 0.0)
        worst = float(np.max(exponent.real + jump))
        if worst > self.exponent_limit:
            raise ExponentOverflowError("F exceeds the float range on the contour", exponent=worst)
        w = self.special.faddeeva_values(1j * a)
        w_prime = -2.0j * a * w + 1j * TWO_OVER_SQRT_PI
        decay = 0.5 * p.k * np.exp(exponent)
        pairing = math.sqrt(p.h * math.pi) * w
        pairing_deriv = 1j * p.h * SQRT_PI * w_prime
        return 1.0 - decay * pairing, -decay * (pairing_deriv - p.tau * pairing)

    def resonance_denominator(self, lam: complex, p: SystemParams) -> complex:
        """G(lam) = (2/k) exp(lam tau) - <A(lam) 1 | 1>, so that F = (k/2) exp(-lam tau) G."""
        require(p.k != 0, "resonance denominator needs k != 0")
        lam = complex(lam)
        growth = self._exp(lam * p.tau, "exp(lam tau)")
        return 2.0 / p.k * growth - self.continued_pairing_II(lam, p)

    def resonance_denominator_deriv(self, lam: complex, p: SystemParams) -> complex:
        require(p.k != 0, "resonance denominator needs k != 0")
        lam = complex(lam)
        growth = self._exp(lam * p.tau, "exp(lam tau)")
        return 2.0 * p.tau / p.k * growth - self.continued_pairing_deriv(lam, p)

    # pairing against exp(i a omega)

    def pairing_exp_family(self, lam: complex, a: float, p: SystemParams) -> complex:
        """Continued pairing of exp(i a omega) against 1, by adaptive quadrature."""
        require(a >= 0, "shift a must be non-negative", a=a)
        lam = complex(lam)
        if a == 0:
            return self.continued_pairing_II(lam, p)
        tag = self.half_plane(lam)
        if tag is HalfPlaneTag.AXIS:
            return self._axis_pairing(lam.imag, a, p)
        value = self._quad_pairing(lam, a, p)
        if tag is HalfPlaneTag.LEFT:
            value += self._exp(a * lam, "exp(a lam)") * self._jump(lam, p)
        return value

    def _window(self, p: SystemParams):
        half = settings.QUAD_WINDOW / math.sqrt(p.h)
        return p.omega0 - half, p.omega0 + half

    def _density(self, omega, p: SystemParams):
        return math.sqrt(p.h / math.pi) * np.exp(-p.h * (omega - p.omega0) ** 2)

    def _quad_parts(self, real_part, imag_part, lo, hi, **kwargs) -> complex:
        opts = dict(epsabs=settings.QUAD_TOL, epsrel=settings.QUAD_TOL, limit=settings.QUAD_LIMIT)
        opts.update(kwargs)
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                re, re_err = integrate.quad(real_part, lo, hi, **opts)
                im, im_err = integrate.quad(imag_part, lo, hi, **opts)
            except integrate.IntegrationWarning as exc:
                raise QuadratureError(f"adaptive quadrature failed: {exc}") from exc
        value = complex(re, im)
        error = math.hypot(re_err, im_err)
        if error > settings.PAIRING_TOL * (1.0 + abs(value)):
            raise QuadratureError(
                "adaptive quadrature missed the mixed tolerance", error=error, value=value
            )
        return value

    def _quad_pairing(self, lam: complex, a: float, p: SystemParams) -> complex:
        """exp(i a y) times the Cauchy integral plus a regular remainder, y = Im lam.

        The remainder integrand stays bounded by a g(omega) however close lam is
        to the axis, so quad does not have to resolve the near-pole.
        """
        lo, hi = self._window(p)
        y = lam.imag
        anchor = cmath.exp(1j * a * y)

        def integrand(omega: float) -> complex:
            if omega == y:
                return 0j
            return (cmath.exp(1j * a * omega) - anchor) * self._density(omega, p) / (lam - 1j * omega)

        points = [y] if lo < y < hi else None
        remainder = self._quad_parts(
            lambda w: integrand(w).real,
            lambda w: integrand(w).imag,
            lo,
            hi,
            points=points,
        )
        return anchor * self.cauchy_gauss(lam, p) + remainder

    def _axis_pairing(self, y: float, a: float, p: SystemParams) -> complex:
        """i PV int f(omega) / (omega - y) + pi f(y), f = exp(i a omega) g(omega)."""
        lo, hi = self._window(p)

        def f(omega: float) -> complex:
            return cmath.exp(1j * a * omega) * self._density(omega, p)

        if lo < y < hi:
            principal = self._quad_parts(
                lambda w: f(w).real,
                lambda w: f(w).imag,
                lo,
                hi,
                weight="cauchy",
                wvar=y,
            )
        else:
            principal = self._quad_parts(
                lambda w: (f(w) / (w - y)).real,
                lambda w: (f(w) / (w - y)).imag,
                lo,
                hi,
            )
        return 1j * principal + math.pi * f(y)


dispersion_service = DispersionService()
