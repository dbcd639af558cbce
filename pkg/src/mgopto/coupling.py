"""Optomechanical coupling, optical springs and angular (Sidles-Sigg) stiffness."""

from __future__ import annotations

from dataclasses import dataclass
import enum
import math
from typing import Iterable

import numpy as np

from . import mechanics
from .cavity import CavityResponse, cavity_response, circulating_power, intracavity_photon_number
from .constants import C
from .errors import ConsistencyError, DomainError, InstabilityError
from .model import LaserDrive, MechanicalOscillator, OpticalCavity


class ReducedMass(enum.Enum):
    SINGLE = "single"  # movable mirror against a heavy input mirror, M = m
    MICHELSON = "michelson"  # two identical arm cavities read differentially, M = m/2


@dataclass(frozen=True)
class CoupledSystem:
    """A mechanical mode coupled to one cavity mode.

    ``p_circ`` overrides the circulating power otherwise derived from the
    drive (useful when only the intracavity power is known).
    """

    osc: MechanicalOscillator
    cavity: OpticalCavity
    drive: LaserDrive
    p_circ: float | None = None
    reduced_mass_preset: ReducedMass | float = ReducedMass.SINGLE

    def __post_init__(self):
        if self.p_circ is not None and not self.p_circ >= 0:
            raise DomainError("p_circ must be >= 0")

    @property
    def circ_power(self) -> float:
        if self.p_circ is not None:
            return self.p_circ
        return circulating_power(self.cavity, self.drive)

    @property
    def response(self) -> CavityResponse:
        return cavity_response(self.cavity)

    @property
    def kappa(self) -> float:
        return self.response.kappa

    @property
    def reduced_mass(self) -> float:
        preset = self.reduced_mass_preset
        if preset is ReducedMass.SINGLE:
            return self.osc.mass
        if preset is ReducedMass.MICHELSON:
            return self.osc.mass / 2
        return float(preset)

    @property
    def n_circ(self) -> float:
        return intracavity_photon_number(self.cavity, self.drive, self.circ_power)

    def with_power(self, p_circ: float) -> CoupledSystem:
        from dataclasses import replace
        return replace(self, p_circ=p_circ)


@dataclass(frozen=True)
class CouplingParams:
    G: float  # cavity frequency pull, rad/s per m
    g: float  # coupling strength, rad/s
    n_circ: float

    @property
    def g_sq(self) -> float:
        return self.g**2


def frequency_pull(cav: OpticalCavity, drive: LaserDrive) -> float:
    """G = omega_cav / L with omega_cav approximated by the laser frequency."""
    return drive.omega_laser / cav.length


def coupling_params(system: CoupledSystem, rtol: float = 1e-9) -> CouplingParams:
    """Coupling strength from both the power form and the G x_zpf sqrt(n) form.

    Raises ConsistencyError if the two routes disagree beyond ``rtol``.
    """
    osc, cav, drive = system.osc, system.cavity, system.drive
    p_circ = system.circ_power
    g_sq_power = p_circ * drive.omega_laser / (osc.mass * cav.length * C * osc.omega_m)
    G = frequency_pull(cav, drive)
    n_circ = system.n_circ
    g = G * mechanics.zero_point_fluctuation(osc) * math.sqrt(n_circ)
    if not math.isclose(g**2, g_sq_power, rel_tol=rtol, abs_tol=0.0):
        raise ConsistencyError(f"g^2 routes disagree: {g**2!r} vs {g_sq_power!r}")
    return CouplingParams(G, g, n_circ)


def spring_terms(g_sq, kappa, omega_m, detuning):
    """Two-sideband optical spring shift and damping (no regime approximation)."""
    plus = detuning + omega_m
    minus = detuning - omega_m
    d_omega = g_sq * (plus / (kappa**2 + plus**2) + minus / (kappa**2 + minus**2))
    gamma = g_sq * (2 * kappa / (kappa**2 + plus**2) - 2 * kappa / (kappa**2 + minus**2))
    return d_omega, gamma


def spring_terms_doppler(g_sq, kappa, omega_m, detuning):
    """Bad-cavity (kappa >> omega_m) limit of :func:`spring_terms`."""
    denom = kappa**2 + detuning**2
    d_omega = g_sq * 2 * detuning / denom
    gamma = -g_sq * 8 * kappa * detuning * omega_m / denom**2
    return d_omega, gamma


def optical_spring_full(system: CoupledSystem, detuning: float | None = None):
    """(delta_omega_opt, gamma_opt) at the mechanical resonance.

    ``detuning`` defaults to the drive's detuning. Note that the coupling
    strength is evaluated at the system's circulating power, which already
    includes the detuning Lorentzian when derived from the input power.
    """
    delta = system.drive.detuning if detuning is None else detuning
    cp = coupling_params(system)
    return spring_terms(cp.g_sq, system.kappa, system.osc.omega_m, delta)


def optical_spring_doppler(system: CoupledSystem, detuning: float | None = None):
    delta = system.drive.detuning if detuning is None else detuning
    cp = coupling_params(system)
    return spring_terms_doppler(cp.g_sq, system.kappa, system.osc.omega_m, delta)


@dataclass(frozen=True)
class EffectiveDynamics:
    omega_eff: float
    gamma_eff: float

    @property
    def stable(self) -> bool:
        return self.omega_eff > 0 and self.gamma_eff > 0


def effective_dynamics(osc: MechanicalOscillator,
                       springs: Iterable[tuple[float, float]] = ()) -> EffectiveDynamics:
    """Add optical spring contributions of any number of beams to the bare mode."""
    springs = list(springs)
    d_omega = sum(s[0] for s in springs)
    d_gamma = sum(s[1] for s in springs)
    return EffectiveDynamics(osc.omega_m + d_omega, mechanics.damping_rate(osc) + d_gamma)


def effective_susceptibility(osc: MechanicalOscillator, eff: EffectiveDynamics, omega):
    omega = np.asarray(omega, dtype=float)
    chi = 1.0 / (osc.mass * (eff.omega_eff**2 - omega**2 + 1j * eff.gamma_eff * omega))
    return chi.item() if chi.ndim == 0 else chi


def minimum_phonon_doppler(kappa: float, omega_m: float) -> float:
    """Lowest occupancy reachable by optomechanical cooling alone when kappa >> omega_m."""
    if kappa <= 0 or omega_m <= 0:
        raise DomainError("kappa and omega_m must be > 0")
    return kappa / (2 * omega_m)


def sidles_sigg_stiffness(cav: OpticalCavity, p_circ: float, which_mirror: int = 2) -> float:
    """Radiation-pressure torsional stiffness on one mirror, N m/rad.

    Negative values are anti-restoring. Mirror 2 is the movable mirror; for
    mirror 1 the roles of the g-factors are swapped.
    """
    if which_mirror not in (1, 2):
        raise DomainError("which_mirror must be 1 or 2")
    g1, g2 = cav.g1, cav.g2
    g_self = g2 if which_mirror == 2 else g1
    product = g1 * g2
    if product >= 1 or product < 0:
        raise InstabilityError(f"cavity geometry unstable or marginal: g1*g2 = {product:.6g}")
    return -(2 * p_circ * cav.length / C) * g_self / (1 - product)
