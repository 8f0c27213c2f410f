import math

import numpy as np
import pytest
from pydantic import ValidationError

from respoles.core.exceptions import InvalidParameterError
from respoles.schemas.params import SystemParams
from respoles.schemas.poles import ContourBox, Pole
from respoles.services.dispersion_service import dispersion_service
from respoles.services.pole_service import hausdorff_distance, pole_service, sort_poles
from respoles.services.stability_service import stability_service


def dense_winding(box: ContourBox, p: SystemParams, n: int = 2**18) -> float:
    """Winding number of F from uniformly dense boundary samples."""
    t = np.linspace(0.0, 1.0, n + 1)
    total = 0.0
    for start, end in box.edges():
        values = dispersion_service.gen_char_values(start + (end - start) * t, p)
        total += float(np.angle(values[1:] / values[:-1]).sum())
    return total / (2.0 * math.pi)


def test_lambert_roots_known_values():
    p = SystemParams(k=2.0, tau=1.0, omega0=0.0, h=10.0)
    assert abs(pole_service.lambert_roots(p, [0])[0] - 0.5671432904097838) <= 1e-12

    short = SystemParams(k=2.0, tau=1e-8, omega0=3.0, h=10.0)
    assert abs(pole_service.lambert_roots(short, [0])[0] - (1.0 + 3.0j)) <= 1e-6


def test_lambert_roots_reference_pair(params):
    root = pole_service.lambert_roots(params, [0])[0]
    assert abs(root.real + 0.1590658) <= 1e-6
    assert abs(abs(root.imag - params.omega0) - 0.6686179) <= 1e-6


def test_lambert_roots_need_coupling(params):
    with pytest.raises(InvalidParameterError):
        pole_service.lambert_roots(params.with_coupling(0.0), [0])


def test_count_zeros_uncoupled_and_stable_half_plane(params):
    box = ContourBox(re_min=0.5, re_max=2.0, im_min=params.omega0 - 3, im_max=params.omega0 + 3)
    assert pole_service.count_zeros(box, params.with_coupling(0.0)) == 0
    assert pole_service.count_zeros(box, params) == 0


def test_count_zeros_isolates_lambert_pole():
    p = SystemParams(k=1.0, tau=2.0, omega0=math.pi / 2, h=1e4)
    seed = pole_service.lambert_roots(p, [0])[0]
    assert pole_service.count_zeros(ContourBox.around(seed, 0.2), p) == 1


def test_count_zeros_agrees_with_dense_phase_on_wide_boxes(params):
    box = ContourBox(re_min=-1.0, re_max=0.3, im_min=params.omega0 - 3, im_max=params.omega0 + 3)
    winding = dense_winding(box, params)
    assert abs(winding - round(winding)) < 0.05
    assert pole_service.count_zeros(box, params) == round(winding) > 2


def test_count_zeros_grows_with_the_left_edge():
    k_c = stability_service.critical_coupling(2.0, math.pi / 2)
    p = SystemParams(k=0.8 * k_c, tau=2.0, omega0=math.pi / 2, h=50.0)
    top = pole_service.default_region(p)
    counts = []
    for re_min in (-0.5, -1.0, -2.0, -3.0):
        box = ContourBox(re_min=re_min, re_max=top.re_max, im_min=top.im_min, im_max=top.im_max)
        count = pole_service.count_zeros(box, p)
        assert count == round(dense_winding(box, p))
        counts.append(count)
    assert counts == sorted(counts)
    assert counts[0] >= 2


def test_refine_newton_stops_on_the_residual(params):
    seed = pole_service.lambert_roots(params, [0])[0]
    pole = pole_service.refine_newton(seed, params, tol=1e-11)
    assert pole.final_residual < 1e-11
    assert 0 < pole.newton_iters <= 50


def test_refine_newton_and_residue(params):
    seed = pole_service.lambert_roots(params, [0])[0]
    pole = pole_service.refine_newton(seed, params, seed_branch=0)
    assert pole.final_residual <= 1e-9
    assert abs(dispersion_service.gen_char(pole.lam, params)) <= 1e-9
    assert abs(pole.lam - seed) <= 0.05
    assert pole_service.count_zeros(ContourBox.around(pole.lam, 1e-3), params) == 1

    contour = pole_service.contour_residue(pole.lam, params)
    assert abs(pole.residue - contour) <= 1e-6 * abs(contour)


def test_refine_newton_fixed_point(params):
    seed = pole_service.lambert_roots(params, [0])[0]
    pole = pole_service.refine_newton(seed, params)
    again = pole_service.refine_newton(pole.lam, params, tol=1e-8)
    assert again.newton_iters == 0
    assert again.lam == pole.lam


def test_refine_newton_rejects_uncoupled(params):
    with pytest.raises(InvalidParameterError):
        pole_service.refine_newton(1j, params.with_coupling(0.0))


def test_poles_approach_lambert_seeds_like_inverse_h():
    base = SystemParams(k=1.0, tau=2.0, omega0=math.pi / 2, h=1e2)
    hs = [1e2, 1e3, 1e4]
    for branch in (-2, -1, 0, 1, 2):
        distances = []
        for h in hs:
            p = base.with_concentration(h)
            seed = pole_service.lambert_roots(p, [branch])[0]
            pole = pole_service.refine_newton(seed, p, seed_branch=branch)
            distances.append(pole_service.seed_distances([pole], p)[0])
        assert distances[0] > distances[1] > distances[2]
        slope = np.polyfit(np.log(hs), np.log(distances), 1)[0]
        assert abs(slope + 1.0) <= 0.25


def test_find_poles_uncoupled(params):
    assert pole_service.find_poles(params.with_coupling(0.0), pole_service.default_region(params)) == []


def test_find_poles_matches_argument_principle(params):
    region = ContourBox(re_min=-0.25, re_max=0.3, im_min=0.5, im_max=2.7)
    found = pole_service.find_poles(params, region)
    assert len(found) == pole_service.count_zeros(region, params)
    assert len(found) >= 2
    for pole in found:
        assert region.contains(pole.lam)
        assert abs(dispersion_service.gen_char(pole.lam, params)) <= 1e-9
    reals = [q.lam.real for q in found]
    assert reals == sorted(reals, reverse=True)

    lambert = [r for r in pole_service.lambert_roots(params, range(-3, 4)) if region.contains(r)]
    assert len(lambert) == 2
    assert hausdorff_distance(lambert, [q.lam for q in found if q.seed_branch is not None]) <= 0.05


def test_find_poles_conjugate_symmetry_for_centered_frequencies():
    p = SystemParams(k=-1.0, tau=2.0, omega0=0.0, h=20.0)
    region = ContourBox(re_min=-0.2, re_max=0.5, im_min=-4.0, im_max=4.0)
    found = pole_service.find_poles(p, region)
    assert len(found) == 2
    lams = [q.lam for q in found]
    for lam in lams:
        assert min(abs(lam.conjugate() - other) for other in lams) <= 1e-8


def test_default_region_clamps_for_large_h(params):
    near = pole_service.default_region(params, n_branches=2)
    assert near.re_min == -3.0
    assert near.im_max - params.omega0 == pytest.approx(2.0 * math.pi)

    narrow = pole_service.default_region(params.with_concentration(1e4))
    assert narrow.re_min == pytest.approx(-math.sqrt(600.0 / 1e4))


def test_find_poles_resolves_the_cluster_left_of_the_axis(params):
    box = ContourBox(re_min=-1.0, re_max=0.3, im_min=params.omega0 - 3, im_max=params.omega0 + 3)
    found = pole_service.find_poles(params, box)
    assert len(found) == round(dense_winding(box, params))
    assert sum(q.seed_branch is None for q in found) > 0
    for pole in found:
        assert box.contains(pole.lam)
        assert pole.final_residual <= 1e-9


def test_leading_region(params):
    box = pole_service.leading_region(params)
    assert (box.re_min, box.re_max) == (-0.5, 1.0)
    assert box.im_min == pytest.approx(params.omega0 - math.pi)
    assert pole_service.leading_region(params.with_concentration(1e4)).re_min == pytest.approx(-math.sqrt(0.06))


def test_sort_and_hausdorff():
    def make(lam):
        return Pole(lam=lam, residue=1.0, newton_iters=0, final_residual=0.0)

    poles = sort_poles([make(-1 + 1j), make(0.5 - 1j), make(0.5 + 2j), make(0.5 + 2j + 1e-12)])
    assert [q.lam for q in poles] == [0.5 - 1j, 0.5 + 2j, -1 + 1j]
    assert hausdorff_distance([0, 1], [0, 1 + 1j]) == pytest.approx(1.0)


def test_pole_schema_rejects_unconverged():
    with pytest.raises(ValidationError):
        Pole(lam=1j, residue=1.0, newton_iters=3, final_residual=1e-3)
    with pytest.raises(ValidationError):
        Pole(lam=1j, residue=0.0, newton_iters=3, final_residual=0.0)
    pole = Pole.model_validate({"lambda": {"re": -0.1, "im": 2.0}, "residue": [1.0, -1.0], "newton_iters": 2, "final_residual": 1e-12})
    assert pole.lam == -0.1 + 2.0j
    assert pole.residue == 1.0 - 1.0j


@pytest.mark.slow
def test_find_poles_is_complete_on_random_parameters(rng):
    for _ in range(20):
        k = rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 2.0)
        p = SystemParams(k=k, tau=rng.uniform(1.0, 3.0), omega0=rng.uniform(0.5, 2.0), h=rng.uniform(20.0, 60.0))
        region = ContourBox(re_min=-0.5, re_max=0.6, im_min=p.omega0 - 2.5, im_max=p.omega0 + 2.5)
        expected = pole_service.count_zeros(region, p)
        assert expected == round(dense_winding(region, p))
        found = pole_service.find_poles(p, region)
        assert len(found) == expected
        for pole in found:
            assert pole.final_residual <= 1e-9
            assert pole_service.count_zeros(ContourBox.around(pole.lam, 1e-4), p) == 1


@pytest.mark.slow
def test_find_poles_on_the_wide_concentrated_region():
    p = SystemParams(k=1.0, tau=2.0, omega0=math.pi / 2, h=1e4)
    region = ContourBox(re_min=-3.0, re_max=1.0, im_min=p.omega0 - 40, im_max=p.omega0 + 40)
    found = pole_service.find_poles(p, region)
    clamped = region.clamp_left(pole_service.representable_re_min(p))
    assert len(found) == pole_service.count_zeros(clamped, p) > 2
    lambert = [r for r in pole_service.lambert_roots(p, range(-14, 14)) if clamped.contains(r)]
    assert len(lambert) == 2
    for root in lambert:
        assert min(abs(q.lam - root) for q in found) <= 1e-2


@pytest.mark.slow
@pytest.mark.parametrize("factor, unstable", [(0.95, False), (1.05, True)])
def test_critical_coupling_separates_pole_signs(factor, unstable):
    tau, omega0 = 2.0, math.pi / 2
    k_c = stability_service.critical_coupling(tau, omega0)
    p = SystemParams(k=factor * k_c, tau=tau, omega0=omega0, h=1e4)
    region = ContourBox(re_min=-0.025, re_max=0.5, im_min=omega0 - 3, im_max=omega0 + 3)
    found = pole_service.find_poles(p, region)
    assert found
    assert (max(q.lam.real for q in found) > 0) is unstable
