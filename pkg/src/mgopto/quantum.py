"""Quantum noise of a resonant (zero-detuning) cavity readout and noise budgets.

Shot noise is divided by the collection efficiency; back-action is not.
Displacement spectra use the reduced-mass susceptibility, force spectra
are referred through the oscillator's own susceptibility.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings

import numpy as np
from scipy.optimize import brentq

from . import mechanics
from .constants import HBAR
from .coupling import CoupledSystem, coupling_params
from .errors import DomainError, NoLightError
from .model import FrequencyGrid, MechanicalOscillator


@dataclass(frozen=True)
class QuantumNoiseInput:
    osc: MechanicalOscillator
    reduced_mass: float
    G: float
    n_circ: float
    kappa: float
    eta: float = 1.0

    def __post_init__(self):
        if not self.reduced_mass > 0:
            raise DomainError("reduced mass must be > 0")
        if not 0 < self.eta <= 1:
            raise DomainError("eta must lie in (0, 1]")

    @classmethod
    def from_system(cls, system: CoupledSystem) -> QuantumNoiseInput:
        cp = coupling_params(system)
        return cls(system.osc, system.reduced_mass, cp.G, cp.n_circ, system.kappa,
                   system.drive.efficiency)

    @property
    def reduced_oscillator(self) -> MechanicalOscillator:
        return self.osc.replace(mass=self.reduced_mass)

    @property
    def radiation_force_psd_dc(self) -> float:
        """Back-action force noise below the cavity pole, 4 hbar^2 G^2 n / kappa."""
        return 4 * HBAR**2 * self.G**2 * self.n_circ / self.kappa


def _cavity_rolloff(qin: QuantumNoiseInput, omega):
    return 1.0 / (1.0 + (np.asarray(omega) / qin.kappa) ** 2)


def _chi_reduced(qin: QuantumNoiseInput, omega):
    return np.abs(mechanics.susceptibility(qin.reduced_oscillator, omega))


def kappa_factor(qin: QuantumNoiseInput, omega):
    """Optomechanical coupling factor K(omega); K = 1 where the SQL is touched."""
    chi = _chi_reduced(qin, omega)
    k = 4 * HBAR * qin.G**2 * qin.n_circ * chi / qin.kappa * _cavity_rolloff(qin, omega)
    return mechanics._scalar_or_array(k)


def sql_displacement_psd(qin: QuantumNoiseInput, omega):
    """x_SQL^2 = 2 hbar |chi_M|."""
    return mechanics._scalar_or_array(2 * HBAR * _chi_reduced(qin, omega))


def shot_noise_psd(qin: QuantumNoiseInput, omega):
    omega = mechanics._positive_frequency(omega)
    if qin.n_circ == 0:
        raise NoLightError("shot noise is unbounded with no circulating light")
    s = qin.kappa / (4 * qin.G**2 * qin.n_circ) / _cavity_rolloff(qin, omega) / qin.eta
    return mechanics._scalar_or_array(s)


def radiation_pressure_psd(qin: QuantumNoiseInput, omega):
    chi = _chi_reduced(qin, omega)
    return mechanics._scalar_or_array(chi**2 * qin.radiation_force_psd_dc * _cavity_rolloff(qin, omega))


def quantum_noise_displacement_psd(qin: QuantumNoiseInput, omega):
    """(x_SQL^2 / 2)(1/(eta K) + K): shot noise plus back-action."""
    omega = mechanics._positive_frequency(omega)
    if qin.n_circ == 0:
        raise NoLightError("shot noise is unbounded with no circulating light")
    k = np.asarray(kappa_factor(qin, omega))
    x_sql_sq = np.asarray(sql_displacement_psd(qin, omega))
    return mechanics._scalar_or_array(x_sql_sq / 2 * (1 / (qin.eta * k) + k))


def sql_touching_frequency(qin: QuantumNoiseInput, warn: bool = True) -> float:
    """Free-mass SQL touching frequency sqrt(4 hbar G^2 n / (M kappa)), rad/s.

    Valid for omega_m << omega_SQL << kappa; a warning is emitted when
    either inequality is not satisfied by at least a factor of ten.
    """
    w = math.sqrt(4 * HBAR * qin.G**2 * qin.n_circ / (qin.reduced_mass * qin.kappa))
    if warn and not (10 * qin.osc.omega_m <= w <= qin.kappa / 10):
        warnings.warn(
            f"omega_SQL = {w:.4g} rad/s is outside the free-mass Doppler regime "
            f"(omega_m = {qin.osc.omega_m:.4g}, kappa = {qin.kappa:.4g})",
            stacklevel=2,
        )
    return w


def sql_crossing_numerical(qin: QuantumNoiseInput, lo: float, hi: float) -> float:
    """Frequency in (lo, hi) where shot noise equals radiation pressure noise (eta=1 K=1)."""
    return brentq(lambda w: math.log(kappa_factor(qin, w)), lo, hi, xtol=1e-12 * lo, rtol=1e-14)


MECHANISMS = ("shot", "radiation", "thermal")


@dataclass(frozen=True)
class NoiseBudget:
    """Per-mechanism single-sided PSDs on a frequency grid.

    ``displacement`` is in m^2/Hz and ``force`` in N^2/Hz; both carry a
    ``total`` column that is the sum of the selected mechanisms.
    """

    grid: FrequencyGrid
    displacement: dict[str, np.ndarray]
    force: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    def asd(self, view: str = "displacement") -> dict[str, np.ndarray]:
        cols = self.displacement if view == "displacement" else self.force
        return {k: np.sqrt(v) for k, v in cols.items()}


def build_budget(system: CoupledSystem, grid: FrequencyGrid,
                 mechanisms=MECHANISMS) -> NoiseBudget:
    unknown = set(mechanisms) - set(MECHANISMS)
    mechanisms = tuple(m for m in MECHANISMS if m in set(mechanisms))
    if unknown:
        raise DomainError(f"unknown mechanisms {sorted(unknown)}")
    if not mechanisms:
        raise DomainError("noise budget needs at least one mechanism")
    w = grid.points
    osc = system.osc
    chi_sq = np.abs(mechanics.susceptibility(osc, w)) ** 2
    disp = {}
    needs_light = {"shot", "radiation"} & set(mechanisms)
    qin = QuantumNoiseInput.from_system(system) if needs_light else None
    if "shot" in mechanisms:
        disp["shot"] = np.asarray(shot_noise_psd(qin, w), dtype=float)
    if "radiation" in mechanisms:
        disp["radiation"] = np.asarray(radiation_pressure_psd(qin, w), dtype=float)
    if "thermal" in mechanisms:
        disp["thermal"] = np.asarray(mechanics.thermal_displacement_psd(osc, w), dtype=float)
    disp["total"] = np.sum([disp[m] for m in mechanisms], axis=0)
    force = {k: v / chi_sq for k, v in disp.items()}
    if "thermal" in mechanisms:
        # exact, avoids the round trip through |chi|^2
        force["thermal"] = np.asarray(mechanics.thermal_force_psd(osc, w), dtype=float)
        force["total"] = np.sum([force[m] for m in mechanisms], axis=0)
    meta = {
        "mechanisms": mechanisms,
        "damping": osc.damping.value,
        "reduced_mass": system.reduced_mass,
        "detuned_approximation": system.drive.detuning != 0 and bool(needs_light),
    }
    return NoiseBudget(grid, disp, force, meta)
