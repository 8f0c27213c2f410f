import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, signal, special, stats

from respoles.core.config import settings
from respoles.core.exceptions import (
    InstabilityError,
    SignalUnderflowError,
    StepMismatchError,
    WindowEmptyError,
    require,
)
from respoles.schemas.evolution import DecayFit, InitialData, QuadratureRule, TimeGrid, TimeSeries
from respoles.schemas.params import SystemParams
from respoles.schemas.poles import Pole
from respoles.services.dispersion_service import DispersionService, dispersion_service

logger = logging.getLogger(__name__)

UNDERFLOW = 1e-14


class EvolutionService:
    """Time-domain integration of the delayed equation and its pole reconstruction."""

    def __init__(self, dispersion: DispersionService = dispersion_service):
        self.dispersion = dispersion

    # frequency discretization

    def hermite_rule(self, n: int, p: SystemParams) -> QuadratureRule:
        """Gauss-Hermite rule for the density of concentration h around omega0.

        Nodes whose weight underflows to zero are dropped; they carry no mass.
        """
        require(n >= 1, "node count must be positive", n=n)
        x, v = special.roots_hermite(n)
        keep = v > 0
        if not np.all(keep):
            logger.debug("dropping %d Hermite nodes with underflowed weights", int(np.sum(~keep)))
        nodes = p.omega0 + x[keep] / math.sqrt(p.h)
        weights = v[keep] / math.sqrt(math.pi)
        return QuadratureRule(nodes=nodes, weights=weights / weights.sum())

    @staticmethod
    def recurrence_time(rule: QuadratureRule) -> float:
        """2 pi over the smallest node spacing; infinite for a single node."""
        if rule.size < 2:
            return math.inf
        return 2.0 * math.pi / float(np.min(np.diff(rule.nodes)))

    @staticmethod
    def free_characteristic(t: np.ndarray, p: SystemParams, a: float = 0.0) -> np.ndarray:
        """exp(i omega0 (t + a) - (t + a)^2 / (4h)), the uncoupled order parameter."""
        s = np.asarray(t, dtype=float) + a
        return np.exp(1j * p.omega0 * s - s * s / (4.0 * p.h))

    # integrator

    @staticmethod
    def delay_steps(tau: float, dt: float) -> int:
        m = tau / dt
        steps = int(round(m))
        if steps < 4 or abs(m - steps) > 1e-9 * max(1.0, m):
            raise StepMismatchError("dt must divide tau into at least 4 steps", tau=tau, dt=dt)
        return steps

    def simulate_dde(
        self,
        p: SystemParams,
        rule: QuadratureRule,
        init: InitialData,
        dt: float,
        T: float,
    ) -> TimeSeries:
        """RK4 method of steps for du_j/dt = i omega_j u_j + (k/2) r(t - tau)."""
        m = self.delay_steps(p.tau, dt)
        require(T >= p.tau, "T must be at least tau", T=T, tau=p.tau)
        if init.history_profile.size != m + 1:
            raise StepMismatchError(
                "history profile does not match the integrator grid",
                samples=init.history_profile.size,
                expected=m + 1,
            )
        n_steps = int(round(T / dt))
        omega = rule.nodes
        w = rule.weights
        coupling = 0.5 * p.k
        spin = 1j * omega

        u = init.state(omega).astype(complex)
        # r_hist[i] holds r((i - m) dt)
        r_hist = np.empty(m + n_steps + 1, dtype=complex)
        r_hist[: m + 1] = init.history_profile * rule.average(u)
        limit = settings.INSTABILITY_LIMIT

        for n in range(n_steps):
            r0, r1 = r_hist[n], r_hist[n + 1]
            if n == 0:
                r_half = (5 * r_hist[0] + 15 * r_hist[1] - 5 * r_hist[2] + r_hist[3]) / 16
            else:
                r_half = (-r_hist[n - 1] + 9 * r0 + 9 * r1 - r_hist[n + 2]) / 16
            k1 = spin * u + coupling * r0
            k2 = spin * (u + 0.5 * dt * k1) + coupling * r_half
            k3 = spin * (u + 0.5 * dt * k2) + coupling * r_half
            k4 = spin * (u + dt * k3) + coupling * r1
            u = u + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            r_new = np.dot(w, u)
            if not np.isfinite(r_new) or abs(r_new) > limit:
                raise InstabilityError("order parameter blew up", t=(n + 1) * dt, modulus=abs(r_new))
            r_hist[m + n + 1] = r_new

        logger.debug("integrated %d steps with %d nodes", n_steps, rule.size)
        return TimeSeries(t0=0.0, dt=dt, values=r_hist[m:])

    # decay analysis

    def fit_decay_rate(
        self,
        series: TimeSeries,
        window: Tuple[float, float],
        envelope: bool = False,
    ) -> DecayFit:
        """Least-squares slope of log|r| on ``window``.

        With ``envelope`` the fit runs through the local maxima of |r|, which
        removes the beating of two equally damped modes.
        """
        t_lo, t_hi = window
        mask = series.window_mask(t_lo, t_hi)
        if t_hi <= t_lo or np.count_nonzero(mask) < 2:
            raise WindowEmptyError("window holds fewer than two samples", window=window)
        t = series.times[mask]
        modulus = np.abs(series.values[mask])
        if modulus.min() <= UNDERFLOW:
            raise SignalUnderflowError("|r| underflows inside the window", minimum=float(modulus.min()))
        if envelope:
            peaks, _ = signal.find_peaks(modulus)
            if peaks.size >= 3:
                t, modulus = t[peaks], modulus[peaks]
        fit = stats.linregress(t, np.log(modulus))
        return DecayFit(rate=float(fit.slope), r2=float(fit.rvalue ** 2), samples=int(t.size))

    @staticmethod
    def relative_l2(values: np.ndarray, reference: np.ndarray) -> float:
        reference = np.asarray(reference)
        return float(np.linalg.norm(np.asarray(values) - reference) / np.linalg.norm(reference))

    # spectral reconstruction

    def history_laplace(self, phi: np.ndarray, lam: complex, p: SystemParams) -> complex:
        """(k/2) int_{-tau}^0 exp(-lam (s + tau)) phi(s) ds by composite Simpson."""
        phi = np.asarray(phi, dtype=complex)
        s = np.linspace(-p.tau, 0.0, phi.size)
        integrand = np.exp(-complex(lam) * (s + p.tau)) * phi
        return 0.5 * p.k * complex(integrate.simpson(integrand, x=s))

    def mean_state(self, init: InitialData, p: SystemParams) -> complex:
        """(x, 1)_g = sum_m c_m exp(i a_m omega0 - a_m^2 / (4h))."""
        a = init.shifts
        return complex(np.sum(init.coefficients * np.exp(1j * a * p.omega0 - a * a / (4.0 * p.h))))

    def pole_amplitude(self, pole: Pole, init: InitialData, p: SystemParams) -> complex:
        """D_p [<psi_p|x> + f_lam <psi_p|1>] <psi_p|1> for one pole."""
        lam = pole.lam
        overlap = self.dispersion.continued_pairing_II(lam, p)
        state = sum(
            term.c * self.dispersion.pairing_exp_family(lam, term.a, p) for term in init.exp_terms
        )
        history = self.history_laplace(init.history_profile, lam, p) * self.mean_state(init, p)
        return pole.residue * (state + history * overlap) * overlap

    def expansion_reconstruct(
        self,
        poles: Sequence[Pole],
        init: InitialData,
        p: SystemParams,
        grid: TimeGrid,
        terms: Optional[int] = None,
    ) -> TimeSeries:
        """Sum of pole contributions D_p exp(lam_p t) (...) on ``grid``."""
        chosen = list(poles)[:terms] if terms is not None else list(poles)
        t = grid.times
        values = np.zeros(t.size, dtype=complex)
        for pole in chosen:
            values += self.pole_amplitude(pole, init, p) * np.exp(pole.lam * t)
        return TimeSeries(t0=grid.t0, dt=grid.dt, values=values)


evolution_service = EvolutionService()
