import cmath
import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import directed_hausdorff

from respoles.core.config import settings
from respoles.core.exceptions import (
    DerivativeVanishesError,
    ExponentOverflowError,
    NoConvergenceError,
    NonIntegerWindingError,
    RespolesError,
    SubdivisionLimitError,
    ZeroOnBoundaryError,
    require,
)
from respoles.schemas.params import SystemParams
from respoles.schemas.poles import ContourBox, Pole
from respoles.services.dispersion_service import DispersionService, dispersion_service
from respoles.services.specialfn_service import SpecialFunctionService, specialfn_service

logger = logging.getLogger(__name__)

SPLIT_FRACTIONS = (0.5, 0.47, 0.53)
IDENTICAL_ROOT_TOL = 1e-10
PHASE_STEP = 0.5 * math.pi
ROUNDOFF_STEP = 1e-15
MAX_TILES = 256


class PoleService:
    """Locates zeros of the continued characteristic function F."""

    def __init__(
        self,
        dispersion: DispersionService = dispersion_service,
        special: SpecialFunctionService = specialfn_service,
    ):
        self.dispersion = dispersion
        self.special = special

    # Lambert seeds

    def lambert_roots(self, p: SystemParams, branches: Iterable[int]) -> List[complex]:
        """Roots (1/tau) W_n((k/2) tau exp(-i omega0 tau)) + i omega0 of the identical limit."""
        return [root for _, root in self.lambert_seeds(p, branches)]

    def lambert_seeds(self, p: SystemParams, branches: Iterable[int]) -> List[Tuple[int, complex]]:
        require(p.k != 0, "Lambert roots need k != 0")
        z = 0.5 * p.k * p.tau * cmath.exp(-1j * p.omega0 * p.tau)
        seeds = []
        for branch in branches:
            w = self.special.lambert_w(branch, z)
            root = self._polish_identical(w / p.tau + 1j * p.omega0, p)
            seeds.append((branch, root))
        return seeds

    def _polish_identical(self, lam: complex, p: SystemParams) -> complex:
        for _ in range(20):
            value = self.dispersion.char_identical(lam, p)
            if abs(value) < IDENTICAL_ROOT_TOL:
                return lam
            deriv = 1.0 + 0.5 * p.k * p.tau * cmath.exp(-lam * p.tau)
            lam -= value / deriv
        raise NoConvergenceError("Lambert root misses the identical-frequency equation", lam=lam)

    # regions

    def representable_re_min(self, p: SystemParams) -> float:
        """Left edge beyond which the continuation can overflow near i omega0."""
        return -math.sqrt(settings.REGION_EXPONENT_BUDGET / p.h)

    def default_region(self, p: SystemParams, n_branches: int = 5) -> ContourBox:
        require(n_branches >= 1, "branch count must be positive", n_branches=n_branches)
        half = 2.0 * math.pi / p.tau * n_branches
        return ContourBox(
            re_min=max(-3.0, self.representable_re_min(p)),
            re_max=1.0,
            im_min=p.omega0 - half,
            im_max=p.omega0 + half,
        )

    def leading_region(self, p: SystemParams) -> ContourBox:
        """The slowest-decaying poles: Re >= LEADING_RE_MIN within one branch spacing of omega0."""
        half = 2.0 * math.pi / p.tau
        return ContourBox(
            re_min=max(settings.LEADING_RE_MIN, self.representable_re_min(p)),
            re_max=1.0,
            im_min=p.omega0 - half,
            im_max=p.omega0 + half,
        )

    # argument principle

    def count_zeros(self, box: ContourBox, p: SystemParams) -> int:
        """Winding number of F around the box boundary."""
        if p.k == 0:
            return 0
        total = sum(self._edge_phase(start, end, p) for start, end in box.edges())
        winding = total / (2.0 * math.pi)
        count = round(winding)
        if abs(winding - count) > 0.25:
            raise NonIntegerWindingError("winding number is not close to an integer", winding=winding)
        return int(count)

    def _edge_phase(self, start: complex, end: complex, p: SystemParams) -> float:
        """Unwrapped change of arg F along one edge.

        Segments are bisected until both the wrapped phase step and the bound
        length * |F'/F| stay below pi/2. The jump term turns arg F at about
        2 h |lam - i omega0| per unit length, so the first grid already
        resolves the Gaussian width 1/sqrt(h). The result is confirmed on the
        grid with every segment halved once more.
        """
        length = abs(end - start)
        n = max(
            settings.EDGE_INITIAL_POINTS,
            int(math.ceil(settings.EDGE_SAMPLES_PER_WIDTH * length * math.sqrt(p.h))),
        )
        t = np.linspace(0.0, 1.0, n + 1)
        values, rates = self._edge_samples(start, end, t, p)

        while True:
            steps = np.angle(values[1:] / values[:-1])
            bound = np.diff(t) * length * np.maximum(rates[1:], rates[:-1])
            coarse = np.flatnonzero((np.abs(steps) >= PHASE_STEP) | (bound >= PHASE_STEP))
            if coarse.size == 0:
                total = float(steps.sum())
                mids = 0.5 * (t[1:] + t[:-1])
                mid_values, _ = self._edge_samples(start, end, mids, p)
                halved = np.angle(mid_values / values[:-1]) + np.angle(values[1:] / mid_values)
                if abs(float(halved.sum()) - total) < 0.5 * math.pi:
                    return float(halved.sum())
                coarse = np.arange(t.size - 1)
            if t.size + coarse.size > settings.EDGE_MAX_POINTS:
                raise NonIntegerWindingError("edge phase could not be resolved", start=start, end=end, points=t.size)
            mids = 0.5 * (t[coarse] + t[coarse + 1])
            mid_values, mid_rates = self._edge_samples(start, end, mids, p)
            t = np.insert(t, coarse + 1, mids)
            values = np.insert(values, coarse + 1, mid_values)
            rates = np.insert(rates, coarse + 1, mid_rates)

    def _edge_samples(self, start: complex, end: complex, t: np.ndarray, p: SystemParams):
        lams = start + (end - start) * t
        values, derivs = self.dispersion.gen_char_and_deriv_values(lams, p)
        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(derivs))):
            raise ExponentOverflowError("F is not representable on the contour", exponent=math.inf)
        modulus = np.abs(values)
        if modulus.min() <= settings.BOUNDARY_FLOOR:
            raise ZeroOnBoundaryError("F nearly vanishes on the contour", at=complex(lams[modulus.argmin()]))
        return values, np.abs(derivs) / modulus

    def _count_with_inflation(self, box: ContourBox, p: SystemParams) -> Tuple[ContourBox, int]:
        for _ in range(settings.BOUNDARY_RETRIES):
            try:
                return box, self.count_zeros(box, p)
            except ZeroOnBoundaryError:
                logger.warning("zero on the region boundary, inflating by %.0f%%", 100 * settings.BOUNDARY_INFLATION)
                box = box.inflate(settings.BOUNDARY_INFLATION)
        return box, self.count_zeros(box, p)

    # Newton refinement

    def refine_newton(
        self,
        seed: complex,
        p: SystemParams,
        tol: float = settings.NEWTON_TOL,
        seed_branch: Optional[int] = None,
    ) -> Pole:
        require(p.k != 0, "no poles exist for k = 0")
        seed = complex(seed)
        lam, value, iterations = seed, self.dispersion.gen_char(seed, p), 0
        # lam <- lam - F/F' until |F| < tol; a step at roundoff level ends it early
        while abs(value) >= tol and iterations < settings.NEWTON_MAX_ITER:
            slope = self.dispersion.gen_char_deriv(lam, p)
            if slope == 0:
                raise DerivativeVanishesError("dF/dlambda vanishes", lam=lam, seed=seed)
            step = value / slope
            lam -= step
            iterations += 1
            value = self.dispersion.gen_char(lam, p)
            if not cmath.isfinite(value) or abs(step) <= ROUNDOFF_STEP * max(1.0, abs(lam)):
                break

        residual = abs(value) if cmath.isfinite(value) else math.inf
        if not residual <= settings.POLE_RESIDUAL_MAX:
            raise NoConvergenceError("Newton iteration did not reach a zero", seed=seed, residual=residual)

        slope = self.dispersion.resonance_denominator_deriv(lam, p)
        if slope == 0 or not cmath.isfinite(slope) or self.dispersion.gen_char_deriv(lam, p) == 0:
            raise DerivativeVanishesError("possible multiple root", lam=lam)
        logger.debug("newton: seed %s -> %s in %d steps", seed, lam, iterations)
        return Pole(
            lam=lam,
            residue=1.0 / slope,
            seed_branch=seed_branch,
            newton_iters=iterations,
            final_residual=residual,
        )

    def contour_residue(self, lam: complex, p: SystemParams, radius: float = 1e-2, n: int = 256) -> complex:
        """(1 / 2 pi i) times the integral of 1/G on a circle around ``lam``."""
        ring = radius * np.exp(2j * math.pi * np.arange(n) / n)
        values = np.array([self.dispersion.resonance_denominator(lam + dz, p) for dz in ring])
        return complex(np.mean(ring / values))

    # full search

    def find_poles(self, p: SystemParams, region: ContourBox, branches: Optional[Tuple[int, int]] = None) -> List[Pole]:
        """All poles in ``region``, sorted by real part descending."""
        if p.k == 0:
            return []
        re_floor = self.representable_re_min(p)
        if region.re_min < re_floor:
            logger.warning("clamping region left edge %.4g to %.4g for h = %g", region.re_min, re_floor, p.h)
            region = region.clamp_left(re_floor)
        region, total = self._count_with_inflation(region, p)
        logger.info("region %s holds %d zeros", region, total)
        if total == 0:
            return []

        known: List[Pole] = []
        for branch, seed in self._seeds(p, region, branches):
            try:
                pole = self.refine_newton(seed, p, seed_branch=branch)
            except RespolesError as exc:
                logger.debug("seed of branch %d dropped: %s", branch, exc)
                continue
            if region.contains(pole.lam):
                self._merge(known, pole)

        accepted: List[Pole] = []
        for tile, count in self._tiles(region, total, p):
            self._subdivide(tile, count, p, known, accepted, depth=0)
        poles = sort_poles(accepted)
        logger.info("found %d poles (%d Lambert-seeded)", len(poles), sum(q.seed_branch is not None for q in poles))
        return poles

    def _seeds(self, p: SystemParams, region: ContourBox, branches: Optional[Tuple[int, int]]):
        if branches is None:
            reach = max(abs(region.im_min - p.omega0), abs(region.im_max - p.omega0))
            nb = int(math.ceil(reach * p.tau / (2.0 * math.pi))) + 2
            branches = (-nb, nb)
        search = region.inflate(settings.SEED_INFLATION)
        for branch in range(branches[0], branches[1] + 1):
            try:
                root = self.lambert_seeds(p, [branch])[0][1]
            except RespolesError as exc:
                logger.debug("branch %d has no usable Lambert root: %s", branch, exc)
                continue
            if search.contains(root):
                yield branch, root

    def _subdivide(
        self,
        box: ContourBox,
        count: int,
        p: SystemParams,
        known: List[Pole],
        accepted: List[Pole],
        depth: int,
    ) -> None:
        if count == 0:
            return
        inside = [q for q in known if box.contains(q.lam)]
        if count == 1 and len(inside) == 1:
            accepted.append(inside[0])
            return
        if count == 1 and not inside:
            try:
                pole = self.refine_newton(box.center, p)
            except RespolesError:
                pole = None
            if pole is not None:
                self._merge(known, pole)
                if box.contains(pole.lam):
                    accepted.append(pole)
                    return
        if depth >= settings.MAX_SUBDIVISION_DEPTH:
            raise SubdivisionLimitError("zeros did not separate within the depth limit", box=box, count=count)
        for child, child_count in self._split_counts(box, count, p):
            # depth counts consecutive splits that separated no zeros
            self._subdivide(child, child_count, p, known, accepted, 0 if child_count < count else depth + 1)

    def _tiles(self, region: ContourBox, total: int, p: SystemParams):
        """Near-square strips of a long region, so quartering never works on slivers."""
        pieces = min(MAX_TILES, int(math.ceil(max(region.height, region.width) / min(region.height, region.width))))
        if pieces <= 1:
            return [(region, total)]
        last: Optional[RespolesError] = None
        for shift in (0.0, 0.03, -0.03):
            strips = region.strips(pieces, shift)
            try:
                counts = [self.count_zeros(strip, p) for strip in strips]
            except ZeroOnBoundaryError as exc:
                last = exc
                continue
            if sum(counts) == total:
                return list(zip(strips, counts))
            last = NonIntegerWindingError("strip counts do not add up", parent=total, children=counts)
        raise last

    def _split_counts(self, box: ContourBox, count: int, p: SystemParams):
        last: Optional[RespolesError] = None
        for fraction in SPLIT_FRACTIONS:
            children = box.split(fraction)
            try:
                counts = [self.count_zeros(child, p) for child in children]
            except ZeroOnBoundaryError as exc:
                last = exc
                continue
            if sum(counts) != count:
                last = NonIntegerWindingError("child counts do not add up", parent=count, children=counts)
                continue
            return list(zip(children, counts))
        raise last

    @staticmethod
    def _merge(poles: List[Pole], pole: Pole) -> None:
        for existing in poles:
            if abs(existing.lam - pole.lam) <= settings.DEDUP_RADIUS:
                return
        poles.append(pole)

    # diagnostics

    def seed_distances(self, poles: Sequence[Pole], p: SystemParams) -> List[float]:
        """Distance from each Lambert-seeded pole to its seed."""
        seeded = [q for q in poles if q.seed_branch is not None]
        roots = self.lambert_roots(p, [q.seed_branch for q in seeded])
        return [abs(q.lam - root) for q, root in zip(seeded, roots)]


def sort_poles(poles: Iterable[Pole]) -> List[Pole]:
    """Deduplicate and order by Re descending, then Im ascending."""
    unique: List[Pole] = []
    for pole in poles:
        PoleService._merge(unique, pole)
    return sorted(unique, key=lambda q: (-q.lam.real, q.lam.imag))


def hausdorff_distance(a: Sequence[complex], b: Sequence[complex]) -> float:
    require(len(a) > 0 and len(b) > 0, "Hausdorff distance needs two non-empty sets")
    u = np.column_stack([np.real(a), np.imag(a)])
    v = np.column_stack([np.real(b), np.imag(b)])
    return float(max(directed_hausdorff(u, v)[0], directed_hausdorff(v, u)[0]))


pole_service = PoleService()
