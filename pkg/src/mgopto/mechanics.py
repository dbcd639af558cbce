"""Single-mode mechanics: damping, susceptibility, thermal noise and decoherence.

Functions accept scalar or array frequencies and return the same shape.
The Fourier convention makes the susceptibility denominator
``m (omega_m**2 - omega**2 + i gamma omega)``, so ``Im(chi) <= 0``.
"""

import numpy as np

from .constants import HBAR, K_B
from .errors import DomainError
from .model import DampingModel, MechanicalOscillator


def _positive_frequency(omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(~(omega > 0)):
        raise DomainError("Fourier frequency must be > 0")
    return omega


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def damping_rate(osc: MechanicalOscillator, omega=None):
    """Energy damping rate gamma_m(omega) in rad/s.

    Viscous damping is frequency independent; structure damping falls as
    1/omega and diverges at DC. ``omega=None`` evaluates at resonance.
    """
    if omega is None:
        omega = osc.omega_m
    omega = _positive_frequency(omega)
    if osc.damping is DampingModel.VISCOUS:
        gamma = np.full_like(omega, osc.omega_m / osc.q)
    else:
        gamma = osc.omega_m**2 / (omega * osc.q)
    return _scalar_or_array(gamma)


def loss_angle(osc: MechanicalOscillator, omega):
    """phi = gamma(omega) * omega / omega_m**2."""
    omega = _positive_frequency(omega)
    return _scalar_or_array(damping_rate(osc, omega) * omega / osc.omega_m**2)


def susceptibility(osc: MechanicalOscillator, omega):
    """Complex mechanical susceptibility chi_m(omega), m/N."""
    omega = _positive_frequency(omega)
    gamma = damping_rate(osc, omega)
    chi = 1.0 / (osc.mass * (osc.omega_m**2 - omega**2 + 1j * gamma * omega))
    return chi.item() if np.ndim(chi) == 0 else chi


def thermal_force_psd(osc: MechanicalOscillator, omega):
    """Fluctuation-dissipation force noise 4 k_B T m gamma(omega), N^2/Hz."""
    return _scalar_or_array(4 * K_B * osc.temperature * osc.mass * np.asarray(damping_rate(osc, omega)))


def thermal_displacement_psd(osc: MechanicalOscillator, omega):
    chi = np.abs(susceptibility(osc, omega))
    return _scalar_or_array(chi**2 * thermal_force_psd(osc, omega))


def thermal_occupancy(osc: MechanicalOscillator) -> float:
    """High-temperature phonon number k_B T / (hbar omega_m).

    This is not the Bose-Einstein occupancy; it is the classical limit used
    by all the quantum-regime criteria.
    """
    return K_B * osc.temperature / (HBAR * osc.omega_m)


def thermal_decoherence_rate(osc: MechanicalOscillator) -> float:
    """Initial phonon reheating rate n_th * gamma_m(omega_m), 1/s."""
    return thermal_occupancy(osc) * damping_rate(osc)


def phonon_reheating(osc: MechanicalOscillator, t):
    """Mean phonon number at time ``t`` after release from the ground state."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be >= 0")
    n = thermal_occupancy(osc) * -np.expm1(-damping_rate(osc) * t)
    return _scalar_or_array(n)


def zero_point_fluctuation(osc: MechanicalOscillator) -> float:
    return float(np.sqrt(HBAR / (2 * osc.mass * osc.omega_m)))
