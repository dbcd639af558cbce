"""Optical levitation of a mirror by vertical cavities."""

from __future__ import annotations

from dataclasses import dataclass
import math

from .constants import C, G_GRAV
from .coupling import sidles_sigg_stiffness
from .errors import DomainError
from .model import OpticalCavity


def levitation_power(m: float) -> float:
    """Total vertical-projected circulating power that supports mass ``m``, W."""
    if not m > 0:
        raise DomainError("mass must be > 0")
    return m * G_GRAV * C / 2


def levitation_sql_frequency(finesse: float, wavelength: float) -> float:
    """SQL touching frequency when the levitating beam also reads out, rad/s.

    Independent of the mirror mass.
    """
    if not (finesse > 0 and wavelength > 0):
        raise DomainError("finesse and wavelength must be > 0")
    return math.sqrt(16 * finesse * G_GRAV / wavelength)


def finesse_bound(length: float, wavelength: float) -> float:
    """Finesse at which the levitation SQL frequency reaches the cavity pole.

    Usable finesse must sit well below this value.
    """
    if not (length > 0 and wavelength > 0):
        raise DomainError("length and wavelength must be > 0")
    return (math.pi**2 * C**2 * wavelength / (64 * length**2 * G_GRAV)) ** (1 / 3)


@dataclass(frozen=True)
class FinesseCheck:
    finesse: float
    bound: float
    threshold: float

    @property
    def ratio(self) -> float:
        return self.finesse / self.bound

    @property
    def ok(self) -> bool:
        return self.ratio <= self.threshold


def check_finesse(finesse: float, length: float, wavelength: float,
                  threshold: float = 0.1) -> FinesseCheck:
    return FinesseCheck(finesse, finesse_bound(length, wavelength), threshold)


@dataclass(frozen=True)
class Beam:
    """One levitation cavity acting on the mirror (the mirror is cavity mirror 2)."""

    cavity: OpticalCavity
    p_circ: float
    detuning: float = 0.0


@dataclass(frozen=True)
class SandwichReport:
    vertical: bool
    rotational: bool
    horizontal: bool
    net_angular_stiffness: float
    support: bool | None
    notes: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.vertical and self.rotational and self.horizontal and self.support is not False


def sandwich_stability_check(lower: Beam | None, upper: Beam | None,
                             convex_downward: bool = True,
                             mass: float | None = None) -> SandwichReport:
    """Sign-level trapping checks for a mirror between a lower and an upper cavity.

    Vertical: some beam with power is blue detuned, giving a restoring
    optical spring. Rotational: gravity restores rotations about the centre
    of curvature of a convex-downward mirror. Horizontal: the summed
    Sidles-Sigg stiffness on the mirror is positive. With ``mass`` given,
    the net upward radiation force must carry the weight.
    """
    notes = []
    beams = [b for b in (lower, upper) if b is not None]
    vertical = any(b.p_circ > 0 and b.detuning > 0 for b in beams)
    if not vertical:
        notes.append("no blue-detuned beam with power: no restoring vertical optical spring")
    if not convex_downward:
        notes.append("mirror is not convex downward: gravity gives no restoring torque")
    stiffness = 0.0
    for label, b in (("lower", lower), ("upper", upper)):
        if b is None:
            notes.append(f"{label} cavity absent")
            continue
        k = sidles_sigg_stiffness(b.cavity, b.p_circ, which_mirror=2)
        stiffness += k
        if k < 0:
            notes.append(f"{label} cavity (g2 = {b.cavity.g2:.3g}) is anti-restoring")
    horizontal = stiffness > 0
    support = None
    if mass is not None:
        up = (lower.p_circ if lower else 0.0) - (upper.p_circ if upper else 0.0)
        support = 2 * up / C >= mass * G_GRAV * (1 - 1e-12)
        if not support:
            notes.append("net radiation force does not carry the weight")
    return SandwichReport(vertical, convex_downward, horizontal, stiffness, support, tuple(notes))
