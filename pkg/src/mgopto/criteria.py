"""Quantum-regime criteria: cooperativity, measurement rate, f.Q and occupancy."""

from __future__ import annotations

from dataclasses import dataclass
import math

from . import mechanics
from .constants import H, HBAR, K_B
from .coupling import CoupledSystem, EffectiveDynamics, coupling_params
from .errors import DomainError, InstabilityError
from .model import DampingModel, MechanicalOscillator
from .quantum import QuantumNoiseInput, radiation_pressure_psd, shot_noise_psd


def cooperativity(system: CoupledSystem) -> tuple[float, float]:
    """Return (C, C_qu) with C = 2 g^2 / (gamma_m kappa) and C_qu = C / n_th.

    C_qu is ``inf`` at zero bath temperature.
    """
    cp = coupling_params(system)
    gamma = mechanics.damping_rate(system.osc)
    c = 2 * cp.g_sq / (gamma * system.kappa)
    n_th = mechanics.thermal_occupancy(system.osc)
    c_qu = math.inf if n_th == 0 else c / n_th
    return c, c_qu


def quantum_cooperativity_from_psd(system: CoupledSystem, omega: float | None = None) -> float:
    """Back-action over thermal force noise, S_rad^F / S_th^F.

    Evaluated at ``omega`` (default omega_m) using the noise-spectrum
    functions rather than the cooperativity definition; the two agree for
    omega << kappa when M = m.
    """
    if omega is None:
        omega = system.osc.omega_m
    qin = QuantumNoiseInput.from_system(system)
    chi = abs(mechanics.susceptibility(system.osc, omega))
    s_rad_force = radiation_pressure_psd(qin, omega) / chi**2
    s_th_force = mechanics.thermal_force_psd(system.osc, system.osc.omega_m)
    return math.inf if s_th_force == 0 else s_rad_force / s_th_force


def measurement_rate(system: CoupledSystem, s_imp: float | None = None) -> float:
    """Gamma_meas = x_zpf^2 / (2 S_imp(omega_m)).

    With ``s_imp=None`` the shot-noise imprecision at omega_m is used.
    """
    if s_imp is None:
        s_imp = shot_noise_psd(QuantumNoiseInput.from_system(system), system.osc.omega_m)
    if not s_imp > 0:
        raise DomainError("imprecision noise must be > 0")
    return mechanics.zero_point_fluctuation(system.osc) ** 2 / (2 * s_imp)


def damping_exponent(model: DampingModel) -> int:
    return 2 if model is DampingModel.VISCOUS else 3


@dataclass(frozen=True)
class FQResult:
    product: float  # f_m Q_m, Hz
    threshold: float  # (k_B T / h)(omega_m / omega_eff)^alpha, Hz
    alpha: int
    f_eff_q_eff: float  # same test in terms of the trapped mode
    bare_threshold: float  # k_B T / h

    @property
    def margin(self) -> float:
        return math.inf if self.threshold == 0 else self.product / self.threshold

    @property
    def passed(self) -> bool:
        return self.product > self.threshold


def fq_criterion(osc: MechanicalOscillator, effective: EffectiveDynamics | None = None,
                 alpha: int | None = None) -> FQResult:
    """f.Q test for ground-state cooling, including optical dilution.

    ``effective`` defaults to the untrapped mode (omega_eff = omega_m).
    """
    omega_eff = osc.omega_m if effective is None else effective.omega_eff
    if omega_eff < osc.omega_m:
        raise DomainError("f.Q criterion assumes omega_eff >= omega_m")
    if alpha is None:
        alpha = damping_exponent(osc.damping)
    bare = K_B * osc.temperature / H
    threshold = bare * (osc.omega_m / omega_eff) ** alpha
    q_eff = omega_eff / mechanics.damping_rate(osc, omega_eff)
    return FQResult(osc.f_m * osc.q, threshold, alpha, omega_eff / (2 * math.pi) * q_eff, bare)


@dataclass(frozen=True)
class Occupancy:
    n_eff: float
    overdamped: bool


def effective_occupancy(osc: MechanicalOscillator, effective: EffectiveDynamics) -> Occupancy:
    if effective.gamma_eff <= 0:
        raise InstabilityError("effective damping must be > 0")
    n = (K_B * osc.temperature / (HBAR * effective.omega_eff)
         * mechanics.damping_rate(osc, effective.omega_eff) / effective.gamma_eff)
    return Occupancy(n, effective.gamma_eff >= effective.omega_eff)


@dataclass(frozen=True)
class CriteriaReport:
    C: float | None
    C_qu: float | None
    gamma_meas: float | None
    gamma_th: float
    fq: FQResult
    n_eff: float | None
    overdamped: bool | None

    @property
    def verdicts(self) -> dict[str, bool | None]:
        return {
            "quantum_cooperativity": None if self.C_qu is None else self.C_qu > 1,
            "measurement_rate": None if self.gamma_meas is None else self.gamma_meas >= self.gamma_th / 8,
            "fq": self.fq.passed,
        }


def evaluate_criteria(osc: MechanicalOscillator, system: CoupledSystem | None = None,
                      effective: EffectiveDynamics | None = None,
                      s_imp: float | None = None) -> CriteriaReport:
    """Run every criterion that the available inputs allow."""
    c = c_qu = g_meas = None
    if system is not None:
        c, c_qu = cooperativity(system)
        g_meas = measurement_rate(system, s_imp)
    fq = fq_criterion(osc, effective)
    n_eff = over = None
    if effective is not None:
        occ = effective_occupancy(osc, effective)
        n_eff, over = occ.n_eff, occ.overdamped
    return CriteriaReport(c, c_qu, g_meas, mechanics.thermal_decoherence_rate(osc), fq, n_eff, over)
