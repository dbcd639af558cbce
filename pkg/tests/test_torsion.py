import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mgopto import (CoupledSystem, DampingModel, DomainError, LaserDrive, MechanicalOscillator,
                    OpticalCavity)
from mgopto import mechanics, quantum
from mgopto.constants import K_B
from mgopto.suspension import FUSED_SILICA, TUNGSTEN, Suspension
from mgopto.torsion import (OpticalLever, TorsionBar, as_oscillator, common_mode_rejection_requirement,
                            damping_ratio, optical_lever_kappa, torsion_cooperativity,
                            torsion_frequency, torsion_noise_input, torsion_quantum_noise,
                            torsion_spring, torsion_sql_frequency, torsion_susceptibility)


def readout(m=1e-5, p=1.0, f=1.0, q=1e6, T=300.0):
    osc = MechanicalOscillator(m, 2 * math.pi * f, q, DampingModel.VISCOUS, T)
    return CoupledSystem(osc, OpticalCavity.from_finesse(0.1, 100), LaserDrive(), p_circ=p)


def test_susceptibility_substitution():
    bar = TorsionBar(1e-5, 0.01)
    w = np.array([0.1, 1.0, 10.0])
    chi = torsion_susceptibility(bar, 2 * math.pi * 0.1, 1e5, DampingModel.VISCOUS, w)
    lin = mechanics.susceptibility(MechanicalOscillator(bar.inertia, 2 * math.pi * 0.1, 1e5), w)
    np.testing.assert_allclose(chi, lin)
    dc = torsion_susceptibility(bar, 2.0, 1e5, DampingModel.STRUCTURE, 1e-6)
    assert abs(dc) == pytest.approx(1 / (bar.inertia * 4.0), rel=1e-6)


def test_inertia_presets():
    assert TorsionBar(1e-5, 0.015).inertia == pytest.approx(1e-5 * 0.015**2 / 12)
    assert TorsionBar(1e-5, 0.015, a=0.25).inertia == pytest.approx(1e-5 * 0.015**2 / 4)
    with pytest.raises(DomainError):
        TorsionBar(1e-5, 0.01, a=0.3)


def test_small_torsion_pendulum_thermal_torque():
    # 10 mg bar, 15 mm long, 0.09 Hz torsional mode
    bar = TorsionBar(1e-5, 0.015)
    tor = as_oscillator(bar, 2 * math.pi * 0.09, 1e4, DampingModel.VISCOUS)
    s_tau = mechanics.thermal_force_psd(tor, tor.omega_m)
    gamma = tor.omega_m / tor.q
    assert s_tau == pytest.approx(4 * K_B * 300 * bar.inertia * gamma)


@given(st.floats(0.01, 1e4), st.sampled_from([1 / 12, 0.1, 0.25]))
def test_angle_noise_respects_angular_sql(f, a):
    bar = TorsionBar(1e-5, 0.01, a)
    tor = as_oscillator(bar, 2 * math.pi * 0.1, 1e6, DampingModel.VISCOUS)
    w = 2 * math.pi * f
    s = torsion_quantum_noise(bar, tor, readout(), w)
    sql = quantum.sql_displacement_psd(torsion_noise_input(bar, tor, readout()), w)
    assert s >= sql * (1 - 1e-12)


@pytest.mark.parametrize("a", [1 / 12, 0.25, 0.1])
def test_angular_touching_frequency(a):
    bar = TorsionBar(1e-5, 0.01, a)
    tor = as_oscillator(bar, 2 * math.pi * 0.1, 1e6, DampingModel.VISCOUS)
    s = readout()
    w_lin = quantum.sql_touching_frequency(quantum.QuantumNoiseInput.from_system(s), warn=False)
    assert torsion_sql_frequency(bar, tor, s) == pytest.approx(w_lin / math.sqrt(4 * a), rel=1e-9)


def test_torsion_cooperativity_gain():
    s = readout()
    gamma = mechanics.damping_rate(s.osc)
    base = quantum.QuantumNoiseInput.from_system(s).radiation_force_psd_dc / (4 * K_B * 300 * 1e-5 * gamma)
    assert torsion_cooperativity(TorsionBar(1e-5, 0.01), s, gamma) == pytest.approx(3 * base)
    assert torsion_cooperativity(TorsionBar(1e-5, 0.01, 0.25), s, gamma) == pytest.approx(base)
    assert torsion_cooperativity(TorsionBar(1e-5, 0.01), readout(T=0.0), gamma) == math.inf
    with pytest.raises(DomainError):
        torsion_cooperativity(TorsionBar(1e-5, 0.01), s, 0.0)


def test_torsion_spring():
    a = torsion_spring(Suspension(TUNGSTEN, 1e-6, 0.05))
    b = torsion_spring(Suspension(TUNGSTEN, 2e-6, 0.05))
    assert b.real == pytest.approx(16 * a.real)
    assert a.imag / a.real == pytest.approx(1 / TUNGSTEN.q_el)
    assert torsion_spring(Suspension(TUNGSTEN, 1e-6, 0.1)).real == pytest.approx(a.real / 2)
    bar = TorsionBar(1e-5, 0.01)
    f = torsion_frequency(Suspension(TUNGSTEN, 1e-6, 0.05), bar)
    assert (2 * math.pi * f) ** 2 * bar.inertia == pytest.approx(a.real)


def test_damping_ratio_example():
    r = damping_ratio(TorsionBar(1e-5, 0.01), Suspension(FUSED_SILICA, 1.5e-6, 0.01))
    assert r.value == pytest.approx(0.11, rel=0.02)
    assert common_mode_rejection_requirement(r.value) == pytest.approx(0.33, rel=0.02)
    with pytest.raises(DomainError):
        common_mode_rejection_requirement(0.0)


@given(st.floats(1e-3, 0.1))
def test_damping_ratio_inverse_square_in_bar_length(d):
    susp = Suspension(FUSED_SILICA, 1.5e-6, 0.01)
    a = damping_ratio(TorsionBar(1e-5, d), susp).value
    b = damping_ratio(TorsionBar(1e-5, 2 * d), susp).value
    assert b == pytest.approx(a / 4)


def test_damping_ratio_forms_agree_on_tensile_boundary():
    m = 1e-5
    r_min = math.sqrt(3 * m * 9.8 / (math.pi * FUSED_SILICA.H))
    on = damping_ratio(TorsionBar(m, 0.01), Suspension(FUSED_SILICA, r_min, 0.01))
    assert on.tensile_margin == pytest.approx(1.0, rel=1e-3)
    assert on.geometric == pytest.approx(on.tensile, rel=1e-3)
    off = damping_ratio(TorsionBar(m, 0.01), Suspension(FUSED_SILICA, 1.5e-6, 0.01))
    assert off.geometric / off.tensile == pytest.approx(off.tensile_margin, rel=1e-9)


def test_optical_lever_matches_cavity_readout():
    bar = TorsionBar(1e-5, 0.01)
    tor = as_oscillator(bar, 2 * math.pi * 0.1, 1e6)
    s = readout()
    qin = torsion_noise_input(bar, tor, s)
    lever = OpticalLever(2 * 100 / math.pi * s.p_circ, beam_radius=bar.length)
    for f in (0.01, 1.0, 30.0):
        w = 2 * math.pi * f
        assert optical_lever_kappa(lever, tor, w) == pytest.approx(quantum.kappa_factor(qin, w), rel=1e-9)


def test_optical_lever_scalings():
    tor = as_oscillator(TorsionBar(1e-5, 0.01), 1.0, 1e6)
    k = optical_lever_kappa(OpticalLever(1.0, 1e-3), tor, 5.0)
    assert optical_lever_kappa(OpticalLever(0.0, 1e-3), tor, 5.0) == 0
    assert optical_lever_kappa(OpticalLever(2.0, 1e-3), tor, 5.0) == pytest.approx(2 * k)
    assert optical_lever_kappa(OpticalLever(1.0, 2e-3), tor, 5.0) == pytest.approx(4 * k)
    with pytest.raises(DomainError):
        OpticalLever(1.0, 0.0)
