import cmath
import math

import numpy as np
import pytest
from pydantic import ValidationError

from respoles.core.exceptions import BetaZeroError, InvalidParameterError
from respoles.schemas.stability import StabilityMode, StabilityRule, StabilityVerdict
from respoles.services.stability_service import stability_service as ss

MODES = list(StabilityMode)


def test_delayed_root_sign_examples():
    verdict = ss.delayed_root_sign(2.0, 1.0, 1.0)
    assert verdict.stable
    assert verdict.rule is StabilityRule.CONDITION_A
    assert verdict.margin == pytest.approx(1.0)

    verdict = ss.delayed_root_sign(-2.0, 1.0, 1.0)
    assert not verdict.stable
    assert verdict.rule is StabilityRule.UNSTABLE


def test_delayed_root_sign_errors():
    with pytest.raises(BetaZeroError):
        ss.delayed_root_sign(1.0, 0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        ss.delayed_root_sign(1.0, 1.0, 0.0)


def test_critical_coupling_values():
    assert abs(ss.critical_coupling(2.0, math.pi / 2) - math.pi / 2) <= 1e-12
    assert abs(ss.critical_coupling(1.0, math.pi / 2)) <= 1e-12
    tau = 1.7
    assert abs(ss.critical_coupling(tau, math.pi / tau) - math.pi / tau) <= 1e-12


def test_critical_coupling_rejects_bad_input():
    with pytest.raises(InvalidParameterError):
        ss.critical_coupling(1.0, 0.0)
    with pytest.raises(InvalidParameterError):
        ss.critical_coupling(-1.0, 1.0)


def test_critical_coupling_is_periodic(rng):
    for _ in range(50):
        tau, omega0 = rng.uniform(0.1, 5.0), rng.uniform(-4.0, 4.0)
        assert abs(ss.critical_coupling(tau, omega0) - ss.critical_coupling(tau, omega0 + 2 * math.pi / tau)) <= 1e-9


def test_critical_coupling_flips_sign_under_half_period_shift(rng):
    for _ in range(50):
        tau, omega0 = rng.uniform(0.2, 5.0), rng.uniform(0.1, 4.0)
        shifted = ss.critical_coupling(tau, omega0 + math.pi / tau)
        assert abs(shifted + ss.critical_coupling(tau, omega0)) <= 1e-9


def test_critical_coupling_pair_and_classification():
    assert ss.critical_coupling_pair(2.0, math.pi / 2) == pytest.approx((0.0, math.pi / 2))
    assert ss.classify_coupling(1.0, 2.0, math.pi / 2).stable
    assert not ss.classify_coupling(-1.0, 2.0, math.pi / 2).stable
    uncoupled = ss.classify_coupling(0.0, 2.0, math.pi / 2)
    assert not uncoupled.stable and uncoupled.margin == 0.0


@pytest.mark.parametrize("mode", MODES)
def test_reference_cell_is_stable(mode):
    assert ss.verdict(2.0, 1.0, math.pi / 2, mode).stable


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("k", [-2.0, -0.5, 0.5, 2.0])
def test_zero_threshold_is_unstable(mode, k):
    assert not ss.verdict(1.0, k, math.pi / 2, mode).stable


def test_modes_agree_on_the_full_chart():
    omega0 = math.pi / 2
    checked = 0
    for tau in np.linspace(0.1, 6.0, 200):
        for k in np.linspace(-3.0, 3.0, 200):
            closed = ss.verdict(tau, k, omega0, StabilityMode.CLOSED_FORM)
            if abs(closed.margin) <= 1e-6:
                continue
            nishi = ss.verdict(tau, k, omega0, StabilityMode.NISHI)
            lambert = ss.verdict(tau, k, omega0, StabilityMode.LAMBERT)
            assert closed.stable == nishi.stable == lambert.stable, (tau, k)
            checked += 1
    assert checked > 39000


def test_shift_symmetry(rng):
    omega0 = 0.9
    for _ in range(100):
        tau, k = rng.uniform(0.2, 4.0), rng.uniform(-3.0, 3.0)
        left = ss.verdict(tau, k, omega0, StabilityMode.CLOSED_FORM)
        right = ss.verdict(tau, -k, omega0 + math.pi / tau, StabilityMode.CLOSED_FORM)
        if abs(left.margin) < 1e-9:
            continue
        assert left.stable == right.stable
        assert left.margin == pytest.approx(right.margin, abs=1e-9)


def test_nishi_against_lambert_rightmost_root(rng):
    checked = 0
    for _ in range(200):
        alpha = complex(rng.uniform(-2.0, 2.0), rng.uniform(-3.0, 3.0))
        beta = rng.uniform(0.1, 2.0) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        tau = rng.uniform(0.1, 3.0)
        top = ss.rightmost_root_re(alpha, beta, tau)
        if abs(top) < 1e-6:
            continue
        assert ss.delayed_root_sign(alpha, beta, tau).stable == (top < 0)
        checked += 1
    assert checked > 180


def test_rightmost_root_is_a_root():
    alpha, beta, tau = 0.3 - 1.0j, 0.8 + 0.2j, 1.5
    top = ss.rightmost_root_re(alpha, beta, tau)
    z = beta * tau * cmath.exp(alpha * tau)
    roots = ss.special.lambert_w_many(z, np.arange(-30, 31)) / tau - alpha
    assert top == pytest.approx(float(np.max(roots.real)))


def test_stability_map_shape_and_parallel_agreement():
    taus = np.linspace(0.5, 4.0, 5)
    ks = np.linspace(-2.0, 2.0, 7)
    serial = ss.stability_map(taus, ks, math.pi / 2, StabilityMode.NISHI, jobs=1)
    assert len(serial.rows) == 5 and all(len(row) == 7 for row in serial.rows)
    assert [cell.tau for cell in serial.rows[2]] == [taus[2]] * 7
    parallel = ss.stability_map(taus, ks, math.pi / 2, StabilityMode.NISHI, jobs=2)
    assert parallel == serial


def test_verdict_schema_consistency():
    with pytest.raises(ValidationError):
        StabilityVerdict(stable=True, rule=StabilityRule.UNSTABLE, margin=1.0)
    with pytest.raises(ValidationError):
        StabilityVerdict(stable=False, rule=StabilityRule.UNSTABLE, margin=0.5)
    with pytest.raises(ValidationError):
        StabilityVerdict(stable=True, rule=StabilityRule.CONDITION_B, margin=0.0)
