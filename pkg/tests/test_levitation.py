import math

import pytest
from hypothesis import given, strategies as st
from scipy import optimize

from mgopto import DomainError, OpticalCavity
from mgopto.constants import C, G_GRAV
from mgopto.levitation import (Beam, check_finesse, finesse_bound, levitation_power,
                               levitation_sql_frequency, sandwich_stability_check)


def test_levitation_power_examples():
    assert levitation_power(1e-6) == pytest.approx(1.47e3, rel=2e-3)
    assert levitation_power(2e-7) == pytest.approx(294, rel=2e-3)
    with pytest.raises(DomainError):
        levitation_power(0.0)


@given(st.floats(1e-9, 1e-2))
def test_levitation_power_linear(m):
    assert levitation_power(3 * m) == pytest.approx(3 * levitation_power(m))


def test_levitation_touching_frequency():
    w = levitation_sql_frequency(100, 1064e-9)
    assert w / (2 * math.pi) == pytest.approx(19327, rel=1e-3)
    assert levitation_sql_frequency(400, 1064e-9) == pytest.approx(2 * w)
    assert levitation_sql_frequency(100, 4 * 1064e-9) == pytest.approx(w / 2)


def test_finesse_bound_value_and_exponents():
    b = finesse_bound(0.1, 1064e-9)
    assert b == pytest.approx(5.3e3, rel=1e-2)
    assert finesse_bound(0.8, 1064e-9) == pytest.approx(b * 8 ** (-2 / 3))
    assert finesse_bound(0.1, 8 * 1064e-9) == pytest.approx(2 * b)


@pytest.mark.parametrize("length", [0.01, 0.1, 1.0])
def test_finesse_bound_is_where_sql_reaches_cavity_pole(length):
    lam = 1064e-9

    def gap(f):
        return math.log(levitation_sql_frequency(f, lam) / (math.pi * C / (2 * f * length)))

    root = optimize.brentq(gap, 1.0, 1e8, xtol=1e-12, rtol=1e-14)
    assert finesse_bound(length, lam) == pytest.approx(root, rel=1e-9)


def test_finesse_check():
    ok = check_finesse(100, 0.1, 1064e-9)
    assert ok.ok and ok.ratio == pytest.approx(100 / 5317.7, rel=1e-3)
    assert not check_finesse(3000, 0.1, 1064e-9).ok


# the lower cavity alone is anti-restoring sideways; the upper one must outweigh it
LOWER = Beam(OpticalCavity(0.1, 0.01, r1=0.12, r2=-1.0), p_circ=2.05 * levitation_power(1e-6), detuning=1e5)
UPPER = Beam(OpticalCavity(0.1, 0.01, r1=0.06, r2=0.05), p_circ=1.0 * levitation_power(1e-6))


def test_sandwich_configuration_is_trapped():
    rep = sandwich_stability_check(LOWER, UPPER, mass=1e-6)
    assert rep.ok, rep.notes
    assert rep.net_angular_stiffness > 0
    assert rep.support is True


def test_single_lower_cavity_lacks_horizontal_restoring():
    rep = sandwich_stability_check(LOWER, None, mass=1e-6)
    assert rep.vertical and not rep.horizontal and not rep.ok
    assert any("upper cavity absent" in n for n in rep.notes)


def test_unpowered_or_red_drive_fails():
    dark = Beam(LOWER.cavity, 0.0, detuning=1e5)
    rep = sandwich_stability_check(dark, UPPER, mass=1e-6)
    assert not rep.vertical and rep.support is False and not rep.ok
    red = Beam(LOWER.cavity, LOWER.p_circ, detuning=-1e5)
    assert not sandwich_stability_check(red, Beam(UPPER.cavity, UPPER.p_circ, -1e5)).vertical


def test_concave_mirror_flagged():
    rep = sandwich_stability_check(LOWER, UPPER, convex_downward=False)
    assert not rep.rotational and not rep.ok
    assert rep.support is None


def test_weight_check_uses_net_upward_force():
    heavy = sandwich_stability_check(LOWER, UPPER, mass=2e-6)
    assert heavy.support is False
    assert 2 * (LOWER.p_circ - UPPER.p_circ) / C >= 1e-6 * G_GRAV
