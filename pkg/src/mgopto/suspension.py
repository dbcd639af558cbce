"""Pendulum suspensions: dilution, violin modes, tensile limits, loss mechanisms, design.

The elastic bending stiffness uses k_el = n sqrt(T E I) / (2 l^2), which
makes the dilution factor exactly k_grav / k_el.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
import importlib.resources
import math

import numpy as np

from .constants import G_GRAV, K_B
from .errors import DesignError, DomainError
from .model import Environment


@dataclass(frozen=True)
class WireMaterial:
    """Elastic, thermal and loss properties of a suspension fiber.

    Give either a constant intrinsic ``q_el`` or ``q_el_per_radius`` for a
    surface-loss-limited fiber, where Q_el / r_w is constant.
    """

    name: str
    E: float  # Young's modulus, Pa
    rho: float  # density, kg/m^3
    H: float  # tensile strength, Pa
    nu: float  # Poisson ratio
    alpha: float  # linear thermal expansion, 1/K
    heat_capacity: float  # J/(kg K)
    conductivity: float  # W/(m K)
    q_el: float | None = None
    q_el_per_radius: float | None = None

    def __post_init__(self):
        for k in ("E", "rho", "H", "alpha", "heat_capacity", "conductivity"):
            if not getattr(self, k) > 0:
                raise DomainError(f"{k} must be > 0")
        if not -1 < self.nu < 0.5:
            raise DomainError("Poisson ratio must lie in (-1, 0.5)")
        if (self.q_el is None) == (self.q_el_per_radius is None):
            raise DomainError("give exactly one of q_el and q_el_per_radius")

    def intrinsic_q(self, r_w: float) -> float:
        if self.q_el is not None:
            return self.q_el
        return self.q_el_per_radius * r_w


# Typical room-temperature bulk values. The silica loss is the surface-loss
# limit phi ~ 8 (h phi_s) / d with h phi_s ~ 6e-12 m.
FUSED_SILICA = WireMaterial("silica", E=72e9, rho=2200.0, H=4.0e9, nu=0.17, alpha=5.1e-7,
                            heat_capacity=772.0, conductivity=1.38, q_el_per_radius=4.0e10)
TUNGSTEN = WireMaterial("tungsten", E=411e9, rho=19300.0, H=3.0e9, nu=0.28, alpha=4.5e-6,
                        heat_capacity=134.0, conductivity=173.0, q_el=2.0e3)
MATERIALS = {m.name: m for m in (FUSED_SILICA, TUNGSTEN)}


@dataclass(frozen=True)
class Suspension:
    material: WireMaterial
    r_w: float
    l_w: float
    n_w: int = 1
    s_w: float = 3.0
    bond_loss: float = 0.0  # structure-type loss angle of clamps and bonds

    def __post_init__(self):
        if not (self.r_w > 0 and self.l_w > 0):
            raise DomainError("wire radius and length must be > 0")
        if not (isinstance(self.n_w, (int, np.integer)) and self.n_w >= 1):
            raise DomainError("n_w must be a positive integer")
        if not self.s_w > 1:
            raise DomainError("safety factor must be > 1")
        if not self.bond_loss >= 0:
            raise DomainError("bond loss angle must be >= 0")

    def tension(self, m: float) -> float:
        return m * G_GRAV / self.n_w

    @property
    def section_inertia(self) -> float:
        return math.pi * self.r_w**4 / 4

    def tensile_margin(self, m: float) -> float:
        """pi r^2 H / (s T); the tensile constraint holds when this is >= 1."""
        return math.pi * self.r_w**2 * self.material.H / (self.s_w * self.tension(m))


def check_tensile(m: float, susp: Suspension, rtol: float = 1e-12) -> bool:
    """Raise DesignError on violation; return True when the constraint is active."""
    margin = susp.tensile_margin(m)
    if margin < 1 - rtol:
        r_min = math.sqrt(susp.s_w * susp.tension(m) / (math.pi * susp.material.H))
        raise DesignError(
            f"tensile constraint violated: r_w = {susp.r_w:.4g} m is below the minimum "
            f"{r_min:.4g} m for safety factor {susp.s_w}",
            constraint="tensile",
        )
    return margin <= 1 + rtol


def dilution_factor(m: float, r_w: float, l_w: float, E: float, n_w: int = 1) -> float:
    """Lambda = (4 l / r^2) sqrt(m g / (pi n E)); no tensile check."""
    return 4 * l_w / r_w**2 * math.sqrt(m * G_GRAV / (math.pi * n_w * E))


@dataclass(frozen=True)
class PendulumSprings:
    k_grav: float
    k_el: float
    dilution: float
    q_pend: float
    tensile_active: bool


def pendulum_springs(m: float, susp: Suspension) -> PendulumSprings:
    active = check_tensile(m, susp)
    T = susp.tension(m)
    k_grav = m * G_GRAV / susp.l_w
    k_el = susp.n_w * math.sqrt(T * susp.material.E * susp.section_inertia) / (2 * susp.l_w**2)
    lam = dilution_factor(m, susp.r_w, susp.l_w, susp.material.E, susp.n_w)
    return PendulumSprings(k_grav, k_el, lam, lam * susp.material.intrinsic_q(susp.r_w), active)


def pendulum_frequency(m: float, susp: Suspension) -> float:
    """Angular pendulum frequency including the (small) elastic stiffness."""
    T = susp.tension(m)
    k_el = susp.n_w * math.sqrt(T * susp.material.E * susp.section_inertia) / (2 * susp.l_w**2)
    return math.sqrt((m * G_GRAV / susp.l_w + k_el) / m)


def violin_frequency(m: float, susp: Suspension) -> float:
    """First violin mode in Hz."""
    T = susp.tension(m)
    return math.sqrt(T / (susp.material.rho * math.pi * susp.r_w**2)) / (2 * susp.l_w)


def max_q_formula(f_v: float, s_w: float, material: WireMaterial, r_w: float) -> float:
    """Pendulum Q on the tensile boundary at violin frequency f_v (Hz)."""
    return (2 * material.H / (s_w * f_v) * math.sqrt(1 / (material.rho * material.E))
            * material.intrinsic_q(r_w) / r_w)


@dataclass(frozen=True)
class DesignConstraints:
    f_v_min: float  # Hz
    s_w: float = 3.0
    n_w: int = 1
    r_w_min: float | None = None  # fabrication limit
    l_w_min: float | None = None
    l_w_max: float | None = None


@dataclass(frozen=True)
class Design:
    suspension: Suspension
    q_pend: float
    dilution: float
    f_v: float
    f_pend: float
    active: tuple[str, ...] = field(default=())


def max_q_design(m: float, material: WireMaterial, constraints: DesignConstraints) -> Design:
    """Highest-Q single-stage pendulum meeting the constraints.

    Q grows as the wire gets thinner and longer, so the optimum sits on the
    thinnest allowed radius (tensile or fabrication limit) and the longest
    length the violin-mode floor allows.
    """
    c = constraints
    if not c.f_v_min > 0:
        raise DesignError("f_v_min must be > 0", constraint="violin")
    if not c.s_w > 1:
        raise DesignError("safety factor must be > 1", constraint="tensile")
    T = m * G_GRAV / c.n_w
    r_tensile = math.sqrt(c.s_w * T / (math.pi * material.H))
    active = []
    if c.r_w_min is not None and c.r_w_min > r_tensile:
        r_w = c.r_w_min
        active.append("r_w_min")
    else:
        r_w = r_tensile
        active.append("tensile")
    l_violin = math.sqrt(T / (material.rho * math.pi * r_w**2)) / (2 * c.f_v_min)
    l_w = l_violin
    if c.l_w_max is not None and c.l_w_max < l_w:
        l_w = c.l_w_max
        active.append("l_w_max")
    else:
        active.append("violin")
    if c.l_w_min is not None and c.l_w_min > l_w * (1 + 1e-12):
        raise DesignError(
            f"infeasible: l_w_min = {c.l_w_min:.4g} m exceeds the longest wire "
            f"{l_w:.4g} m compatible with f_v >= {c.f_v_min:.4g} Hz",
            constraint="l_w_min",
        )
    susp = Suspension(material, r_w, l_w, c.n_w, c.s_w)
    springs = pendulum_springs(m, susp)
    return Design(susp, springs.q_pend, springs.dilution, violin_frequency(m, susp),
                  pendulum_frequency(m, susp) / (2 * math.pi), tuple(active))


@dataclass(frozen=True)
class Thermoelastic:
    strength: float  # Delta_r
    tau: float  # relaxation time, s

    @property
    def peak_omega(self) -> float:
        return 1 / self.tau

    @property
    def peak_loss(self) -> float:
        return self.strength / 2


def thermoelastic_parameters(susp: Suspension, temperature: float) -> Thermoelastic:
    mat = susp.material
    strength = mat.E * mat.alpha**2 * temperature / (mat.rho * mat.heat_capacity)
    tau = mat.rho * mat.heat_capacity * susp.r_w**2 / (2 * math.pi * 0.539 * mat.conductivity)
    return Thermoelastic(strength, tau)


def thermoelastic_loss(susp: Suspension, temperature: float, omega, nulled: bool = False):
    """Debye-peak loss angle of a bending wire; ``nulled`` models static-stress cancellation."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise DomainError("omega must be > 0")
    if nulled:
        phi = np.zeros_like(omega)
    else:
        te = thermoelastic_parameters(susp, temperature)
        wt = omega * te.tau
        phi = te.strength * wt / (1 + wt**2)
    return float(phi) if phi.ndim == 0 else phi


def gas_damping(m: float, env: Environment, temperature: float) -> float:
    """Residual-gas (viscous) damping rate, rad/s."""
    if not temperature > 0:
        raise DomainError("temperature must be > 0 for gas damping")
    return env.pressure * env.area / (env.shape_c * m) * math.sqrt(env.gas_mass / (K_B * temperature))


@dataclass(frozen=True)
class DampingBreakdown:
    omega: np.ndarray
    omega_pend: float
    dilution: float
    wire: np.ndarray
    bond: np.ndarray
    thermoelastic: np.ndarray
    gas: np.ndarray
    q_pend: float  # omega_pend / gamma_total(omega_pend)

    @property
    def total(self) -> np.ndarray:
        return self.wire + self.bond + self.thermoelastic + self.gas


def total_pendulum_damping(m: float, susp: Suspension, env: Environment, temperature: float,
                           omega=None, thermoelastic_nulled: bool = False,
                           check: bool = True) -> DampingBreakdown:
    """Per-mechanism damping rates gamma(omega) of the pendulum mode.

    Elastic-origin loss angles (wire, bonds, thermoelastic) add and are
    diluted by Lambda; gas damping is viscous and undiluted. ``omega``
    defaults to the pendulum resonance. ``check=False`` skips the tensile
    check, for evaluating published suspensions as built.
    """
    if check:
        check_tensile(m, susp)
    w_p = pendulum_frequency(m, susp)
    omega = np.atleast_1d(np.asarray(w_p if omega is None else omega, dtype=float))
    if np.any(omega <= 0):
        raise DomainError("omega must be > 0")
    lam = dilution_factor(m, susp.r_w, susp.l_w, susp.material.E, susp.n_w)

    phi_wire = 1 / susp.material.intrinsic_q(susp.r_w)
    gamma_gas = gas_damping(m, env, temperature) if temperature > 0 else 0.0

    def elastic(phi, w):
        return w_p**2 * (phi / lam) / w

    def gamma_total(w):
        phi = phi_wire + susp.bond_loss + thermoelastic_loss(susp, temperature, w, thermoelastic_nulled)
        return elastic(phi, w) + gamma_gas

    phi_te = np.asarray(thermoelastic_loss(susp, temperature, omega, nulled=thermoelastic_nulled))
    return DampingBreakdown(
        omega, w_p, lam,
        wire=elastic(np.full_like(omega, phi_wire), omega),
        bond=elastic(np.full_like(omega, susp.bond_loss), omega),
        thermoelastic=elastic(phi_te, omega),
        gas=np.full_like(omega, gamma_gas),
        q_pend=w_p / float(gamma_total(w_p)),
    )


@dataclass(frozen=True)
class ExperimentRow:
    name: str
    year: int
    mass: float
    size: str
    wire_diameter: float | None
    wire_length: float | None
    wire: str
    bonding: str
    n_wires: int | None
    f_m_hz: float | None
    q_m: float | None
    mode: str
    notes: str

    @property
    def label(self) -> str:
        return f"{self.name} ({self.year})"


def load_experiments(path=None) -> list[ExperimentRow]:
    """Load the shipped table of milligram-to-gram scale experiments.

    Columns: name, year, mass_kg, size, wire_diameter_m, wire_length_m, wire,
    bonding, n_wires, f_m_hz, q_m, mode, notes. Empty cells mean "not
    applicable" or "not reported".
    """
    def opt(v, conv=float):
        return conv(v) if v.strip() else None

    if path is None:
        text = importlib.resources.files("mgopto").joinpath("data/experiments.csv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    rows = []
    for rec in csv.DictReader(text.splitlines()):
        rows.append(ExperimentRow(
            rec["name"], int(rec["year"]), float(rec["mass_kg"]), rec["size"],
            opt(rec["wire_diameter_m"]), opt(rec["wire_length_m"]), rec["wire"], rec["bonding"],
            opt(rec["n_wires"], int), opt(rec["f_m_hz"]), opt(rec["q_m"]), rec["mode"], rec["notes"],
        ))
    return rows


def fit_intrinsic_q(rows: list[ExperimentRow], material: WireMaterial) -> float:
    """Single effective Q_el explaining measured pendulum Q values through dilution.

    Log-space least squares, i.e. the geometric mean of Q_m / Lambda over
    pendulum rows with complete wire data for the given material.
    """
    ratios = []
    for row in rows:
        if row.mode != "pendulum" or row.wire != material.name:
            continue
        if None in (row.wire_diameter, row.wire_length, row.q_m, row.n_wires):
            continue
        lam = dilution_factor(row.mass, row.wire_diameter / 2, row.wire_length, material.E, row.n_wires)
        ratios.append(row.q_m / lam)
    if not ratios:
        raise DesignError(f"no complete pendulum rows for {material.name}")
    return float(np.exp(np.mean(np.log(ratios))))
