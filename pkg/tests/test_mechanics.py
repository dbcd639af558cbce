import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mgopto import DampingModel, DomainError, MechanicalOscillator
from mgopto import mechanics
from mgopto.constants import HBAR, K_B

OSC = MechanicalOscillator(1e-6, 2 * math.pi, 1e5, DampingModel.VISCOUS, 300.0)
STRUCT = OSC.replace(damping=DampingModel.STRUCTURE)

oscillators = st.builds(
    MechanicalOscillator,
    mass=st.floats(1e-9, 1e-2), omega_m=st.floats(1e-1, 1e5), q=st.floats(1.5, 1e10),
    damping=st.sampled_from(list(DampingModel)), temperature=st.floats(0.0, 400.0),
)


def test_susceptibility_dc_limit():
    chi = mechanics.susceptibility(OSC, 1e-6 * OSC.omega_m)
    assert abs(chi) == pytest.approx(2.533e4, rel=1e-3)
    assert abs(chi) == pytest.approx(1 / (OSC.mass * OSC.omega_m**2), rel=1e-9)


def test_susceptibility_resonant_enhancement_is_q():
    chi_res = abs(mechanics.susceptibility(OSC, OSC.omega_m))
    assert chi_res == pytest.approx(OSC.q / (OSC.mass * OSC.omega_m**2), rel=1e-12)


def test_susceptibility_above_resonance_approaches_free_mass():
    w = 10 * OSC.omega_m
    chi = abs(mechanics.susceptibility(OSC, w))
    assert chi == pytest.approx(2.56e2, rel=5e-3)
    assert chi == pytest.approx(1 / (OSC.mass * w**2), rel=2e-2)


def test_imaginary_part_sign_convention():
    w = np.logspace(-1, 2, 50)
    assert np.all(np.imag(mechanics.susceptibility(OSC, w)) < 0)


def test_thermal_force_fN_benchmark():
    assert math.sqrt(mechanics.thermal_force_psd(OSC, OSC.omega_m)) == pytest.approx(1.02e-15, rel=1e-2)


def test_thermal_psds_vanish_at_zero_temperature():
    cold = OSC.replace(temperature=0.0)
    assert mechanics.thermal_force_psd(cold, 3.0) == 0
    assert mechanics.thermal_displacement_psd(cold, 3.0) == 0


def test_structure_force_psd_ten_times_lower_a_decade_above():
    w = 10 * OSC.omega_m
    ratio = mechanics.thermal_force_psd(OSC, w) / mechanics.thermal_force_psd(STRUCT, w)
    assert ratio == pytest.approx(10.0, rel=1e-12)


def test_thermal_displacement_on_resonance():
    w = OSC.omega_m
    expected = (OSC.q / (OSC.mass * w**2)) ** 2 * 4 * K_B * OSC.temperature * OSC.mass * w / OSC.q
    assert mechanics.thermal_displacement_psd(OSC, w) == pytest.approx(expected, rel=1e-12)


def test_pendulum_1hz_structure_thermal_at_100hz_regression():
    osc = MechanicalOscillator(1e-6, 2 * math.pi, 1e9, DampingModel.STRUCTURE, 300.0)
    w = 2 * math.pi * 100
    gamma = osc.omega_m**2 / (osc.q * w)
    brute = 4 * K_B * 300 * 1e-6 * gamma / (1e-6**2 * ((osc.omega_m**2 - w**2) ** 2 + (gamma * w) ** 2))
    assert mechanics.thermal_displacement_psd(osc, w) == pytest.approx(brute, rel=1e-12)
    assert mechanics.thermal_displacement_psd(osc, w) == pytest.approx(1.0485e-44, rel=1e-3)


def test_decoherence_rate_values():
    assert mechanics.thermal_decoherence_rate(OSC.replace(q=1e9)) == pytest.approx(3.93e4, rel=1e-2)
    assert mechanics.thermal_decoherence_rate(OSC) == pytest.approx(3.93e8, rel=1e-2)
    assert mechanics.thermal_decoherence_rate(OSC.replace(temperature=0.0)) == 0


def test_reheating_limits_and_initial_slope():
    assert mechanics.phonon_reheating(OSC, 0.0) == 0
    assert mechanics.phonon_reheating(OSC, 1e9) == pytest.approx(mechanics.thermal_occupancy(OSC))
    h = 1e-9
    slope = mechanics.phonon_reheating(OSC, h) / h
    assert slope == pytest.approx(mechanics.thermal_decoherence_rate(OSC), rel=1e-6)
    with pytest.raises(DomainError):
        mechanics.phonon_reheating(OSC, -1.0)


def test_zero_point_fluctuation_values():
    assert mechanics.zero_point_fluctuation(OSC) == pytest.approx(2.897e-15, rel=1e-3)
    small = MechanicalOscillator(2e-7, 2 * math.pi * 340, 1e5)
    assert mechanics.zero_point_fluctuation(small) == pytest.approx(3.51e-16, rel=1e-2)
    heavy = OSC.replace(mass=2 * OSC.mass)
    assert mechanics.zero_point_fluctuation(heavy) == pytest.approx(
        mechanics.zero_point_fluctuation(OSC) / math.sqrt(2), rel=1e-12)


def test_nonpositive_frequency_rejected():
    with pytest.raises(DomainError):
        mechanics.susceptibility(OSC, 0.0)
    with pytest.raises(DomainError):
        mechanics.thermal_force_psd(STRUCT, np.array([1.0, -2.0]))


@given(oscillators, st.floats(1e-3, 1e3))
def test_fluctuation_dissipation(osc, x):
    """S_x = (4 k_B T / omega) |Im chi| for both damping models."""
    w = x * osc.omega_m
    chi = mechanics.susceptibility(osc, w)
    fdt = 4 * K_B * osc.temperature / w * abs(chi.imag)
    assert mechanics.thermal_displacement_psd(osc, w) == pytest.approx(fdt, rel=1e-9, abs=1e-300)


@given(oscillators, st.floats(1e-3, 1e3))
def test_loss_angle_forms(osc, x):
    w = x * osc.omega_m
    phi = mechanics.loss_angle(osc, w)
    if osc.damping is DampingModel.STRUCTURE:
        assert phi == pytest.approx(1 / osc.q, rel=1e-12)
    else:
        assert phi == pytest.approx(w / (osc.omega_m * osc.q), rel=1e-12)


@given(oscillators)
def test_occupancy_times_quantum_is_thermal_energy(osc):
    assert mechanics.thermal_occupancy(osc) * HBAR * osc.omega_m == pytest.approx(
        K_B * osc.temperature, rel=1e-12, abs=1e-300)


def test_array_shapes_preserved():
    w = np.linspace(1, 10, 7)
    assert mechanics.susceptibility(OSC, w).shape == (7,)
    assert isinstance(mechanics.thermal_force_psd(OSC, 2.0), float)
