"""Torsion pendulum sensing compared with a simple pendulum of the same mass and wire.

Angular quantities follow from the linear ones under (F, x, m) -> (tau, theta, I);
:func:`as_oscillator` performs that substitution so the mechanics and
quantum-noise functions can be reused unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from . import mechanics, quantum
from .constants import C, G_GRAV, K_B
from .coupling import CoupledSystem, coupling_params
from .errors import DomainError
from .model import DampingModel, MechanicalOscillator
from .suspension import Suspension


@dataclass(frozen=True)
class TorsionBar:
    mass: float
    length: float  # bar length d, m
    a: float = 1 / 12  # I = a m d^2; 1/12 uniform bar, 1/4 mass at the ends

    def __post_init__(self):
        if not (self.mass > 0 and self.length > 0):
            raise DomainError("bar mass and length must be > 0")
        if not 0 < self.a <= 0.25:
            raise DomainError("mass-distribution factor a must lie in (0, 1/4]")

    @property
    def inertia(self) -> float:
        return self.a * self.mass * self.length**2


def as_oscillator(bar: TorsionBar, omega_m: float, q: float,
                  damping: DampingModel = DampingModel.STRUCTURE,
                  temperature: float = 300.0) -> MechanicalOscillator:
    """Torsional mode as an oscillator whose 'mass' is the moment of inertia."""
    return MechanicalOscillator(bar.inertia, omega_m, q, damping, temperature)


def torsion_susceptibility(bar: TorsionBar, omega_m: float, q: float, damping: DampingModel, omega):
    """chi_I(omega) in rad/(N m)."""
    return mechanics.susceptibility(as_oscillator(bar, omega_m, q, damping), omega)


def torsion_noise_input(bar: TorsionBar, tor_osc: MechanicalOscillator,
                        system: CoupledSystem) -> quantum.QuantumNoiseInput:
    """Quantum-noise input for angle readout by a cavity at the bar's edge.

    The frequency pull per radian is (d/2) G.
    """
    cp = coupling_params(system)
    return quantum.QuantumNoiseInput(tor_osc, tor_osc.mass, bar.length / 2 * cp.G, cp.n_circ,
                                     system.kappa, system.drive.efficiency)


def torsion_quantum_noise(bar: TorsionBar, tor_osc: MechanicalOscillator,
                          system: CoupledSystem, omega):
    """Angle quantum noise S_qn^theta, rad^2/Hz."""
    return quantum.quantum_noise_displacement_psd(torsion_noise_input(bar, tor_osc, system), omega)


def torsion_sql_frequency(bar: TorsionBar, tor_osc: MechanicalOscillator,
                          system: CoupledSystem) -> float:
    return quantum.sql_touching_frequency(torsion_noise_input(bar, tor_osc, system), warn=False)


def torsion_cooperativity(bar: TorsionBar, system: CoupledSystem, gamma_tor: float) -> float:
    """Back-action over thermal torque noise, below the cavity pole.

    Computed from torque spectra: back-action torque (d/2)^2 S_rad^F against
    4 k_B T I gamma_tor.
    """
    if not gamma_tor > 0:
        raise DomainError("torsional damping rate must be > 0")
    s_rad_force = quantum.QuantumNoiseInput.from_system(system).radiation_force_psd_dc
    s_rad_torque = (bar.length / 2) ** 2 * s_rad_force
    s_th_torque = 4 * K_B * system.osc.temperature * bar.inertia * gamma_tor
    return math.inf if s_th_torque == 0 else s_rad_torque / s_th_torque


def torsion_spring(susp: Suspension) -> complex:
    """Complex torsional stiffness of a single isotropic wire, N m/rad.

    The loss angle is the wire's intrinsic one plus bond loss, with no
    gravitational dilution.
    """
    mat = susp.material
    k = math.pi * mat.E * susp.r_w**4 / (4 * (1 + mat.nu) * susp.l_w)
    phi = 1 / mat.intrinsic_q(susp.r_w) + susp.bond_loss
    return k * (1 + 1j * phi)


def torsion_frequency(susp: Suspension, bar: TorsionBar) -> float:
    """Natural torsional resonance in Hz."""
    return math.sqrt(torsion_spring(susp).real / bar.inertia) / (2 * math.pi)


@dataclass(frozen=True)
class DampingRatio:
    geometric: float  # from wire geometry
    tensile: float  # with the wire radius eliminated through the tensile limit
    tensile_margin: float  # pi r^2 H / (s T); forms agree when this is 1

    @property
    def value(self) -> float:
        return self.geometric


def damping_ratio(bar: TorsionBar, susp: Suspension) -> DampingRatio:
    """gamma_tor / gamma_pend for structure damping with a common wire loss angle."""
    mat = susp.material
    m, d, a = bar.mass, bar.length, bar.a
    geometric = (susp.l_w * susp.r_w**2 / (a * (1 + mat.nu) * d**2)
                 * math.sqrt(math.pi * mat.E / (m * G_GRAV)))
    tensile = (susp.l_w * susp.s_w / (a * (1 + mat.nu) * mat.H * d**2)
               * math.sqrt(m * G_GRAV * mat.E / math.pi))
    margin = math.pi * susp.r_w**2 * mat.H / (susp.s_w * m * G_GRAV)
    return DampingRatio(geometric, tensile, margin)


def common_mode_rejection_requirement(ratio: float) -> float:
    """Amplitude common-mode rejection needed to hide pendulum thermal noise."""
    if not ratio > 0:
        raise DomainError("damping ratio must be > 0")
    return math.sqrt(ratio)


@dataclass(frozen=True)
class OpticalLever:
    power: float
    beam_radius: float
    wavelength: float = 1064e-9

    def __post_init__(self):
        if not self.power >= 0 or not self.beam_radius > 0 or not self.wavelength > 0:
            raise DomainError("need power >= 0, beam_radius > 0, wavelength > 0")


def optical_lever_kappa(lever: OpticalLever, tor_osc: MechanicalOscillator, omega):
    """K factor of an optical lever with a pi/2 Gouy phase to the detector."""
    omega_l = 2 * math.pi * C / lever.wavelength
    chi = np.abs(mechanics.susceptibility(tor_osc, omega))
    return 2 * omega_l * lever.power * lever.beam_radius**2 * chi / C**2
