"""Static Fabry-Perot quantities: free spectral range, finesse, decay rates, power."""

from dataclasses import dataclass
import enum
import math

from .constants import C, HBAR
from .errors import DomainError
from .model import LaserDrive, OpticalCavity


class CouplingRegime(enum.Enum):
    OVER = "over"
    CRITICAL = "critical"
    UNDER = "under"


@dataclass(frozen=True)
class CavityResponse:
    omega_fsr: float
    finesse: float
    kappa: float  # amplitude decay rate, rad/s
    kappa_in: float

    @property
    def coupling_regime(self) -> CouplingRegime:
        ratio = self.kappa_in / self.kappa
        if math.isclose(ratio, 0.5, rel_tol=1e-9):
            return CouplingRegime.CRITICAL
        return CouplingRegime.OVER if ratio > 0.5 else CouplingRegime.UNDER

    @property
    def round_trips(self) -> float:
        """Average number of round trips of a photon, 2F/pi."""
        return 2 * self.finesse / math.pi


def cavity_response(cav: OpticalCavity) -> CavityResponse:
    omega_fsr = math.pi * C / cav.length
    kappa_in = cav.t_in * C / (4 * cav.length)
    kappa = kappa_in + cav.extra_loss * C / (4 * cav.length)
    return CavityResponse(omega_fsr, omega_fsr / (2 * kappa), kappa, kappa_in)


def circulating_power(cav: OpticalCavity, drive: LaserDrive) -> float:
    """Detuned circulating power (2F/pi)(kappa_in/kappa) P_in / (1 + (Delta/kappa)^2)."""
    resp = cavity_response(cav)
    lorentz = 1.0 / (1.0 + (drive.detuning / resp.kappa) ** 2)
    return resp.round_trips * (resp.kappa_in / resp.kappa) * drive.input_power * lorentz


def intracavity_photon_number(cav: OpticalCavity, drive: LaserDrive, p_circ: float) -> float:
    if p_circ < 0:
        raise DomainError("circulating power must be >= 0")
    return (2 * cav.length / C) * p_circ / (HBAR * drive.omega_laser)
