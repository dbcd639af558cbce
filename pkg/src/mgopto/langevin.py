"""Time-domain Langevin simulation of a thermally driven, optionally cold-damped mode.

The linear SDE

    m (x'' + (gamma_m + g_fb) x' + omega_m^2 x) = F_th(t) + F_extra(t)

is advanced with its exact discrete-time propagator: over one step the
state (x, v) maps through Phi = expm(A dt) plus a Gaussian kick whose
covariance comes from Van Loan's block-exponential. The recursion
X_n = Phi X_{n-1} + w_n is run as an AR(2) filter on each component,
which is exact for any dt and fast for long records.

Only viscous damping can be simulated; structure damping is a
frequency-domain loss angle with no causal white-noise counterpart.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass
import math

import numpy as np
from scipy import linalg, optimize, signal

from . import mechanics
from .constants import HBAR, K_B
from .errors import ConfigError
from .model import DampingModel, MechanicalOscillator


@dataclass(frozen=True)
class SimConfig:
    osc: MechanicalOscillator
    dt: float
    duration: float
    seed: int = 0
    feedback_gain: float = 0.0  # rad/s; feedback force -gain * m * v
    x0: float = 0.0
    v0: float = 0.0
    extra_force_psd: float = 0.0  # single-sided white force noise, N^2/Hz

    def __post_init__(self):
        if self.osc.damping is not DampingModel.VISCOUS:
            raise ConfigError("time-domain simulation supports viscous damping only")
        if not self.dt > 0:
            raise ConfigError("dt must be > 0")
        if not self.feedback_gain >= 0:
            raise ConfigError("feedback_gain must be >= 0")
        if not self.extra_force_psd >= 0:
            raise ConfigError("extra_force_psd must be >= 0")
        dt_max = 2 * math.pi / (50 * self.osc.omega_m)
        if not self.dt < dt_max:
            raise ConfigError(f"dt = {self.dt:g} s does not resolve the resonance; need dt < {dt_max:.6g} s")
        if not self.duration > self.dt:
            raise ConfigError("duration must exceed dt")

    def check_spectral_duration(self) -> None:
        """Records used for variances and spectra must span 100 relaxation times and periods."""
        need = 100 * max(1 / self.gamma_eff, 2 * math.pi / self.osc.omega_m)
        if not self.duration >= need:
            raise ConfigError(f"duration = {self.duration:g} s is shorter than 100 relaxation "
                              f"times or periods ({need:.6g} s)")

    @property
    def gamma_m(self) -> float:
        return self.osc.omega_m / self.osc.q

    @property
    def gamma_eff(self) -> float:
        return self.gamma_m + self.feedback_gain

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))

    @property
    def force_psd(self) -> float:
        """Total single-sided white force PSD driving the mode, N^2/Hz."""
        return mechanics.thermal_force_psd(self.osc, self.osc.omega_m) + self.extra_force_psd


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0])

    def energy(self, osc: MechanicalOscillator) -> np.ndarray:
        return 0.5 * osc.mass * (self.v**2 + osc.omega_m**2 * self.x**2)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "x", "v"])
            for row in zip(self.t, self.x, self.v):
                w.writerow([f"{val:.9e}" for val in row])


def propagator(omega_m: float, gamma: float, mass: float, force_psd: float, dt: float):
    """Exact one-step transition matrix and noise covariance.

    ``force_psd`` is single-sided, so the force autocorrelation is
    (force_psd / 2) delta(t - t').
    """
    A = np.array([[0.0, 1.0], [-omega_m**2, -gamma]])
    Q = np.array([[0.0, 0.0], [0.0, force_psd / 2 / mass**2]])
    block = np.zeros((4, 4))
    block[:2, :2] = -A
    block[:2, 2:] = Q
    block[2:, 2:] = A.T
    F = linalg.expm(block * dt)
    phi = F[2:, 2:].T
    cov = phi @ F[:2, 2:]
    return phi, 0.5 * (cov + cov.T)


def _noise_factor(cov: np.ndarray) -> np.ndarray:
    if not np.any(cov):
        return np.zeros((2, 2))
    # scale out the very different x and v magnitudes before factorising
    s = np.sqrt(np.diag(cov))
    corr = cov / np.outer(s, s)
    corr[0, 1] = corr[1, 0] = np.clip(corr[0, 1], -1.0, 1.0)
    w, vec = np.linalg.eigh(corr)
    return (vec * np.sqrt(np.clip(w, 0, None))) * s[:, None]


def _run(phi: np.ndarray, kick: np.ndarray, x0: float, v0: float, n: int,
         rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Samples X_0..X_{n-1} of X_k = phi X_{k-1} + w_k with X_0 = (x0, v0)."""
    e = np.empty((n, 2))
    e[0] = (x0, v0)
    if n > 1:
        e[1:] = rng.standard_normal((n - 1, 2)) @ kick.T
    tr = np.trace(phi)
    det = np.linalg.det(phi)
    u = e.copy()
    u[1:] += e[:-1] @ (phi - tr * np.eye(2)).T
    a = [1.0, -tr, det]
    return signal.lfilter([1.0], a, u[:, 0]), signal.lfilter([1.0], a, u[:, 1])


def _trajectory(config: SimConfig, rng: np.random.Generator, x0=None, v0=None) -> Trajectory:
    osc = config.osc
    phi, cov = propagator(osc.omega_m, config.gamma_eff, osc.mass, config.force_psd, config.dt)
    n = config.n_steps + 1
    x, v = _run(phi, _noise_factor(cov), config.x0 if x0 is None else x0,
                config.v0 if v0 is None else v0, n, rng)
    return Trajectory(np.arange(n) * config.dt, x, v)


def simulate(config: SimConfig) -> Trajectory:
    """Integrate one trajectory; identical config and seed give identical output."""
    config.check_spectral_duration()
    return _trajectory(config, np.random.default_rng(config.seed))


def white_noise_record(psd: float, dt: float, n: int, seed: int = 0) -> Trajectory:
    """Gaussian white record with single-sided PSD ``psd`` in the x channel.

    Useful for calibrating :func:`psd_estimate`: its estimate should be
    flat at ``psd``. The v channel is zero.
    """
    if not (psd >= 0 and dt > 0 and n >= 2):
        raise ConfigError("need psd >= 0, dt > 0 and n >= 2")
    x = np.random.default_rng(seed).standard_normal(n) * math.sqrt(psd / (2 * dt))
    return Trajectory(np.arange(n) * dt, x, np.zeros(n))


def psd_estimate(traj: Trajectory, segments: int = 16, signal_name: str = "x"):
    """Single-sided PSD of a sampled record by averaged, Hann-windowed periodograms.

    The record is cut into ``segments`` equal lengths; Welch averaging with
    50 % overlap then uses about 2*segments - 1 periodograms, so the
    per-bin relative standard deviation is roughly 1/sqrt(2*segments - 1).
    Frequency resolution is segments/duration; features narrower than a
    few bins are smeared (Hann main lobe is 4 bins wide).
    Returns (f_hz, psd).
    """
    if segments < 8:
        raise ConfigError("psd_estimate needs at least 8 segments")
    data = getattr(traj, signal_name)
    nperseg = data.size // segments
    if nperseg < 16:
        raise ConfigError(f"trajectory too short for {segments} segments ({data.size} samples)")
    f, p = signal.welch(data, fs=1 / traj.dt, window="hann", nperseg=nperseg,
                        noverlap=nperseg // 2, detrend="constant", scaling="density")
    return f, p


def psd_to_csv(f_hz, psd, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["f_hz", "psd"])
        for a, b in zip(f_hz, psd):
            w.writerow([f"{a:.9e}", f"{b:.9e}"])


def analytic_displacement_psd(config: SimConfig, f_hz):
    """Displacement PSD the simulation should reproduce, m^2/Hz."""
    w = 2 * math.pi * np.asarray(f_hz, dtype=float)
    osc = config.osc
    chi = 1 / (osc.mass * (osc.omega_m**2 - w**2 + 1j * config.gamma_eff * w))
    return np.abs(chi) ** 2 * config.force_psd


def fit_decay_rate(t: np.ndarray, energy: np.ndarray, period: float) -> float:
    """Energy decay rate from a least-squares fit of log E over whole ripple periods."""
    n_per = int((t[-1] - t[0]) / period)
    if n_per < 1:
        raise ConfigError("record shorter than one ripple period")
    keep = t - t[0] <= n_per * period
    slope = np.polyfit(t[keep], np.log(energy[keep]), 1)[0]
    return -slope


def ringdown_rate(config: SimConfig, n_periods: int = 20) -> float:
    """Fitted energy decay rate of a noise-free ring-down from (x0, v0)."""
    osc = config.osc
    if config.x0 == 0 and config.v0 == 0:
        raise ConfigError("ring-down needs a nonzero initial state")
    phi, _ = propagator(osc.omega_m, config.gamma_eff, osc.mass, 0.0, config.dt)
    omega_d = math.sqrt(osc.omega_m**2 - config.gamma_eff**2 / 4)
    period = math.pi / omega_d
    n = int(n_periods * period / config.dt) + 2
    x, v = _run(phi, np.zeros((2, 2)), config.x0, config.v0, n, np.random.default_rng(0))
    t = np.arange(n) * config.dt
    return fit_decay_rate(t, 0.5 * osc.mass * (v**2 + osc.omega_m**2 * x**2), period)


def effective_temperature(traj: Trajectory, osc: MechanicalOscillator, discard: float = 0.0) -> float:
    """Mode temperature from the position variance, m omega_m^2 <x^2> / k_B."""
    keep = traj.t >= traj.t[0] + discard
    return osc.mass * osc.omega_m**2 * np.var(traj.x[keep]) / K_B


@dataclass(frozen=True)
class ReheatingCurve:
    t: np.ndarray
    n_mean: np.ndarray
    n_th_fit: float
    gamma_fit: float

    @property
    def initial_slope(self) -> float:
        return self.n_th_fit * self.gamma_fit


def reheating_experiment(config: SimConfig, n_trials: int = 200, stride: int = 1,
                         workers: int = 1) -> ReheatingCurve:
    """Ensemble-averaged occupancy E/(hbar omega_m) after release from rest.

    Trial ``i`` draws from a generator seeded by (config.seed, i), so the
    result does not depend on ``workers``. The record must cover at least
    five relaxation times so the plateau is visible to the fit.
    """
    osc = config.osc
    if not config.duration >= 5 / config.gamma_eff:
        raise ConfigError("reheating run shorter than five relaxation times")
    hw = HBAR * osc.omega_m

    def one(i):
        traj = _trajectory(config, np.random.default_rng([config.seed, i]), 0.0, 0.0)
        return traj.energy(osc)[::stride] / hw

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            curves = list(pool.map(one, range(n_trials)))
    else:
        curves = [one(i) for i in range(n_trials)]
    n_mean = np.mean(curves, axis=0)
    t = (np.arange(config.n_steps + 1) * config.dt)[::stride]
    if osc.temperature == 0 and config.extra_force_psd == 0:
        return ReheatingCurve(t, n_mean, 0.0, config.gamma_eff)
    n_guess = float(np.mean(n_mean[n_mean.size // 2:]))
    (n_fit, g_fit), _ = optimize.curve_fit(
        lambda tt, n, g: n * -np.expm1(-g * tt), t, n_mean, p0=(n_guess, config.gamma_eff))
    return ReheatingCurve(t, n_mean, float(n_fit), float(g_fit))
