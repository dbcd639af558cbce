"""Domain types shared by every module.

All frequencies are angular (rad/s) unless a name ends in ``_hz``.
All spectral densities are single-sided.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import enum
import math

import numpy as np

from .constants import C
from .errors import DomainError


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


def _finite(x: float) -> bool:
    return isinstance(x, (int, float, np.floating, np.integer)) and math.isfinite(x)


class DampingModel(enum.Enum):
    VISCOUS = "viscous"
    STRUCTURE = "structure"


class Flat:
    """Radius of curvature of a flat mirror (infinite)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "FLAT"


FLAT = Flat()

Radius = float | Flat


@dataclass(frozen=True)
class MechanicalOscillator:
    """Single eigenmode of a mechanical oscillator.

    ``mass`` may be a moment of inertia when the oscillator stands for an
    angular mode; every formula is unchanged under that substitution.
    """

    mass: float
    omega_m: float
    q: float
    damping: DampingModel = DampingModel.VISCOUS
    temperature: float = 300.0

    def __post_init__(self):
        _require(_finite(self.mass) and self.mass > 0, f"mass must be > 0, got {self.mass}")
        _require(_finite(self.omega_m) and self.omega_m > 0, f"omega_m must be > 0, got {self.omega_m}")
        _require(_finite(self.q) and self.q > 0, f"q must be > 0, got {self.q}")
        _require(_finite(self.temperature) and self.temperature >= 0,
                 f"temperature must be >= 0, got {self.temperature}")
        if not isinstance(self.damping, DampingModel):
            object.__setattr__(self, "damping", DampingModel(self.damping))

    @property
    def f_m(self) -> float:
        return self.omega_m / (2 * math.pi)

    def replace(self, **changes) -> MechanicalOscillator:
        from dataclasses import replace
        return replace(self, **changes)


@dataclass(frozen=True)
class OpticalCavity:
    """Two-mirror Fabry-Perot cavity. Mirror 1 is fixed (input), mirror 2 movable."""

    length: float
    t_in: float
    extra_loss: float = 0.0
    r1: Radius = FLAT
    r2: Radius = FLAT

    def __post_init__(self):
        _require(_finite(self.length) and self.length > 0, f"length must be > 0, got {self.length}")
        _require(_finite(self.t_in) and 0 < self.t_in <= 1, f"t_in must lie in (0, 1], got {self.t_in}")
        _require(_finite(self.extra_loss) and self.extra_loss >= 0,
                 f"extra_loss must be >= 0, got {self.extra_loss}")
        for name in ("r1", "r2"):
            r = getattr(self, name)
            if r is FLAT:
                continue
            _require(_finite(r) and r != 0, f"{name} must be a nonzero finite radius or FLAT, got {r}")

    @classmethod
    def from_finesse(cls, length: float, finesse: float, input_fraction: float = 0.5,
                     r1: Radius = FLAT, r2: Radius = FLAT) -> OpticalCavity:
        """Cavity with a given finesse; ``input_fraction`` is kappa_in/kappa."""
        _require(finesse > 0, "finesse must be > 0")
        _require(0 < input_fraction <= 1, "input_fraction must lie in (0, 1]")
        total = 2 * math.pi / finesse  # T_in + extra_loss
        return cls(length, input_fraction * total, (1 - input_fraction) * total, r1, r2)

    def g_factor(self, mirror: int) -> float:
        r = {1: self.r1, 2: self.r2}[mirror]
        return 1.0 if r is FLAT else 1.0 - self.length / r

    @property
    def g1(self) -> float:
        return self.g_factor(1)

    @property
    def g2(self) -> float:
        return self.g_factor(2)


@dataclass(frozen=True)
class LaserDrive:
    wavelength: float = 1064e-9
    input_power: float = 0.0
    detuning: float = 0.0
    efficiency: float = 1.0

    def __post_init__(self):
        _require(_finite(self.wavelength) and self.wavelength > 0, "wavelength must be > 0")
        _require(_finite(self.input_power) and self.input_power >= 0, "input_power must be >= 0")
        _require(_finite(self.detuning), "detuning must be finite")
        _require(_finite(self.efficiency) and 0 < self.efficiency <= 1,
                 f"efficiency must lie in (0, 1], got {self.efficiency}")

    @property
    def omega_laser(self) -> float:
        return 2 * math.pi * C / self.wavelength


@dataclass(frozen=True)
class Environment:
    """Residual gas around the oscillator.

    ``area`` is the exposed surface area; ``shape_c`` the order-unity shape
    constant of the gas damping formula.
    """

    pressure: float = 0.0
    gas_mass: float = 0.0
    shape_c: float = 1.0
    area: float = 0.0

    def __post_init__(self):
        _require(self.pressure >= 0 and self.gas_mass >= 0 and self.area >= 0,
                 "pressure, gas_mass and area must be >= 0")
        _require(self.shape_c > 0, "shape_c must be > 0")


def disk_area(diameter: float, thickness: float) -> float:
    """Total surface area of a cylindrical disk (both faces plus rim)."""
    r = diameter / 2
    return 2 * math.pi * r**2 + 2 * math.pi * r * thickness


@dataclass(frozen=True)
class FrequencyGrid:
    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = np.atleast_1d(np.asarray(self.points, dtype=float))
        if pts.ndim != 1 or pts.size == 0:
            raise DomainError("frequency grid must be a non-empty 1-D sequence")
        if np.any(~np.isfinite(pts)) or np.any(pts <= 0):
            raise DomainError("frequency grid points must be finite and > 0")
        if np.any(np.diff(pts) <= 0):
            raise DomainError("frequency grid must be strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def log_hz(cls, f_min: float, f_max: float, n: int) -> FrequencyGrid:
        """Log-spaced grid given in Hz, stored in rad/s."""
        if n < 1:
            raise DomainError("grid needs at least one point")
        if n == 1:
            return cls(np.array([2 * math.pi * f_min]))
        if not 0 < f_min < f_max:
            raise DomainError("need 0 < f_min < f_max")
        return cls(2 * math.pi * np.logspace(math.log10(f_min), math.log10(f_max), n))

    @property
    def hz(self) -> np.ndarray:
        return self.points / (2 * math.pi)

    def __len__(self) -> int:
        return self.points.size


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_system(osc: MechanicalOscillator, cav: OpticalCavity,
                    drive: LaserDrive) -> ValidationReport:
    """Collect physical-validity problems without raising."""
    violations, warnings = [], []
    if not osc.mass > 0:
        violations.append("non-positive mass")
    if not 0 < drive.efficiency <= 1:
        violations.append("collection efficiency out of (0, 1]")
    g1g2 = cav.g1 * cav.g2
    if g1g2 < 0 or g1g2 > 1:
        violations.append(f"cavity unstable: g1*g2 = {g1g2:.6g} outside [0, 1]")
    elif math.isclose(g1g2, 1.0, rel_tol=1e-12):
        warnings.append(f"cavity marginally stable: g1*g2 = {g1g2:.6g}")
    return ValidationReport(tuple(violations), tuple(warnings))
