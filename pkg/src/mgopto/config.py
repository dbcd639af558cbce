"""INI-style system description: parsing, validation and canonical serialization.

Keys carry their unit in the name. Frequencies are given in Hz and
converted to rad/s here, once. Unknown sections and keys are rejected
with their line number.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
import math
import re

from .constants import gas_molecule_mass, GAS_MASSES_AMU
from .coupling import CoupledSystem, EffectiveDynamics, ReducedMass
from .errors import ConfigError, MgOptoError
from .model import (FLAT, DampingModel, Environment, LaserDrive, MechanicalOscillator,
                    OpticalCavity, disk_area)
from .suspension import MATERIALS, Suspension
from .torsion import TorsionBar
from . import mechanics

DEFAULT_MIRROR_DENSITY = 2200.0  # kg/m^3, fused silica, for area = auto without a thickness


def _float(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise ValueError("must be finite")
    return v


def _positive(text: str) -> float:
    v = _float(text)
    if not v > 0:
        raise ValueError("must be > 0")
    return v


def _nonneg(text: str) -> float:
    v = _float(text)
    if not v >= 0:
        raise ValueError("must be >= 0")
    return v


def _int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise ValueError("must be a positive integer")
    return v


def _choice(*options):
    def conv(text: str) -> str:
        t = text.strip().lower()
        if t not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return t
    return conv


def _radius(text: str):
    return "flat" if text.strip().lower() == "flat" else _float(text)


def _area(text: str):
    return "auto" if text.strip().lower() == "auto" else _nonneg(text)


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "on", "1"):
        return True
    if t in ("false", "no", "off", "0"):
        return False
    raise ValueError("must be true or false")


_REQ = object()

# section -> key -> (converter, default); _REQ marks required keys, None optional ones
SCHEMA: dict[str, dict[str, tuple]] = {
    "oscillator": {
        "mass_kg": (_positive, _REQ),
        "f_m_hz": (_positive, _REQ),
        "q": (_positive, _REQ),
        "damping": (_choice("viscous", "structure"), "viscous"),
        "temperature_k": (_nonneg, 300.0),
        "reduced_mass": (_choice("single", "michelson"), "single"),
    },
    "cavity": {
        "length_m": (_positive, _REQ),
        "finesse": (_positive, None),
        "input_fraction": (_positive, None),
        "t_in": (_positive, None),
        "extra_loss": (_nonneg, None),
        "r1_m": (_radius, "flat"),
        "r2_m": (_radius, "flat"),
    },
    "laser": {
        "wavelength_m": (_positive, 1064e-9),
        "power_in_w": (_nonneg, None),
        "p_circ_w": (_nonneg, None),
        "detuning_hz": (_float, 0.0),
        "efficiency": (_positive, 1.0),
    },
    "environment": {
        "pressure_pa": (_nonneg, _REQ),
        "gas": (_choice(*GAS_MASSES_AMU), "helium"),
        "shape_c": (_positive, 1.0),
        "area_m2": (_area, "auto"),
        "mirror_diameter_m": (_positive, None),
        "mirror_thickness_m": (_positive, None),
    },
    "suspension": {
        "material": (_choice(*MATERIALS), "silica"),
        "r_w_m": (_positive, _REQ),
        "l_w_m": (_positive, _REQ),
        "n_w": (_int, 1),
        "s_w": (_positive, 3.0),
        "bond_loss": (_nonneg, 0.0),
        "f_v_min_hz": (_positive, None),
    },
    "torsion": {
        "d_m": (_positive, _REQ),
        "a": (_positive, 1 / 12),
    },
    "levitation": {
        "enabled": (_bool, False),
    },
    "trap": {
        "f_eff_hz": (_positive, _REQ),
        "gamma_eff_per_s": (_positive, None),
    },
}
REQUIRED_SECTIONS = ("oscillator",)


@dataclass(frozen=True)
class SystemConfig:
    values: dict = field(repr=False)  # section -> key -> typed value, defaults filled
    oscillator: MechanicalOscillator
    cavity: OpticalCavity | None = None
    drive: LaserDrive | None = None
    p_circ: float | None = None
    reduced_mass: ReducedMass = ReducedMass.SINGLE
    environment: Environment | None = None
    suspension: Suspension | None = None
    torsion_bar: TorsionBar | None = None
    levitation: bool = False
    effective: EffectiveDynamics | None = None
    assumptions: tuple[str, ...] = field(default=(), compare=False)

    @property
    def system(self) -> CoupledSystem:
        self.require("cavity", "laser")
        return CoupledSystem(self.oscillator, self.cavity, self.drive, self.p_circ, self.reduced_mass)

    def has(self, section: str) -> bool:
        return section in self.values

    def require(self, *sections: str) -> None:
        for s in sections:
            if s not in self.values:
                raise ConfigError(f"missing required section [{s}]", section=s)


def _locate(text: str) -> dict[tuple[str, str | None], int]:
    """Line numbers of section headers and keys, 1-based."""
    where, section = {}, None
    for i, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s[0] in "#;":
            continue
        m = re.match(r"\[(.+)\]$", s)
        if m:
            section = m.group(1).strip().lower()
            where.setdefault((section, None), i)
            continue
        m = re.match(r"([^=:]+?)\s*[=:]", s)
        if m and section is not None:
            where.setdefault((section, m.group(1).strip().lower()), i)
    return where


def _read(text: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.DuplicateSectionError as e:
        raise ConfigError(f"duplicate section [{e.section}]", section=e.section, line=e.lineno) from e
    except configparser.DuplicateOptionError as e:
        raise ConfigError(f"duplicate key '{e.option}'", section=e.section, line=e.lineno) from e
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError("key outside any [section]", line=e.lineno) from e
    except configparser.ParsingError as e:
        line = e.errors[0][0] if e.errors else None
        raise ConfigError("malformed line", line=line) from e
    return cp


def _typed_values(cp: configparser.ConfigParser, where) -> dict:
    values = {}
    for section in cp.sections():
        sec = section.lower()
        if sec not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]", section=section,
                              line=where.get((sec, None)))
        schema = SCHEMA[sec]
        given = dict(cp.items(section))
        out = {}
        for key, raw in given.items():
            if key not in schema:
                raise ConfigError(f"unknown key '{key}'", section=sec, line=where.get((sec, key)))
            try:
                out[key] = schema[key][0](raw)
            except ValueError as e:
                raise ConfigError(f"bad value for '{key}' = {raw!r}: {e}", section=sec,
                                  line=where.get((sec, key))) from e
        for key, (_, default) in schema.items():
            if key in out:
                continue
            if default is _REQ:
                raise ConfigError(f"missing required key '{key}'", section=sec,
                                  line=where.get((sec, None)))
            if default is not None:
                out[key] = default
        values[sec] = out
    for sec in REQUIRED_SECTIONS:
        if sec not in values:
            raise ConfigError(f"missing required section [{sec}]", section=sec)
    return values


def _exclusive(values: dict, sec: str, a: str, b: str, where) -> None:
    v = values.get(sec, {})
    if a in v and b in v:
        raise ConfigError(f"'{a}' and '{b}' are mutually exclusive", section=sec,
                          line=where.get((sec, b)))
    if a not in v and b not in v:
        raise ConfigError(f"exactly one of '{a}' or '{b}' is required", section=sec,
                          line=where.get((sec, None)))


def _build(values: dict, where) -> SystemConfig:
    assumptions = []
    ov = values["oscillator"]
    osc = MechanicalOscillator(ov["mass_kg"], 2 * math.pi * ov["f_m_hz"], ov["q"],
                               DampingModel(ov["damping"]), ov["temperature_k"])
    kw = {"reduced_mass": ReducedMass(ov["reduced_mass"])}

    if ("cavity" in values) != ("laser" in values):
        missing = "laser" if "cavity" in values else "cavity"
        raise ConfigError(f"missing required section [{missing}]", section=missing)
    if "cavity" in values:
        cv = values["cavity"]
        _exclusive(values, "cavity", "finesse", "t_in", where)
        r1 = FLAT if cv["r1_m"] == "flat" else cv["r1_m"]
        r2 = FLAT if cv["r2_m"] == "flat" else cv["r2_m"]
        if "finesse" in cv:
            if "extra_loss" in cv:
                raise ConfigError("'extra_loss' goes with 't_in', not 'finesse'", section="cavity",
                                  line=where.get(("cavity", "extra_loss")))
            frac = cv.get("input_fraction", 0.5)
            if "input_fraction" not in cv:
                assumptions.append("cavity input_fraction = 0.5 (critical coupling)")
            kw["cavity"] = OpticalCavity.from_finesse(cv["length_m"], cv["finesse"], frac, r1, r2)
        else:
            if "input_fraction" in cv:
                raise ConfigError("'input_fraction' goes with 'finesse', not 't_in'", section="cavity",
                                  line=where.get(("cavity", "input_fraction")))
            kw["cavity"] = OpticalCavity(cv["length_m"], cv["t_in"], cv.get("extra_loss", 0.0), r1, r2)
        lv = values["laser"]
        _exclusive(values, "laser", "power_in_w", "p_circ_w", where)
        kw["drive"] = LaserDrive(lv["wavelength_m"], lv.get("power_in_w", 0.0),
                                 2 * math.pi * lv["detuning_hz"], lv["efficiency"])
        kw["p_circ"] = lv.get("p_circ_w")

    if "environment" in values:
        ev = values["environment"]
        area = ev["area_m2"]
        if area == "auto":
            if "mirror_diameter_m" not in ev:
                raise ConfigError("area_m2 = auto needs mirror_diameter_m", section="environment",
                                  line=where.get(("environment", "area_m2")))
            dia = ev["mirror_diameter_m"]
            thick = ev.get("mirror_thickness_m")
            if thick is None:
                thick = osc.mass / (DEFAULT_MIRROR_DENSITY * math.pi * dia**2 / 4)
                assumptions.append(f"mirror thickness {thick:.4g} m from mass at silica density")
            area = disk_area(dia, thick)
            assumptions.append(f"gas-exposed area A = {area:.4g} m^2 (both faces plus rim)")
        kw["environment"] = Environment(ev["pressure_pa"], gas_molecule_mass(ev["gas"]),
                                        ev["shape_c"], area)
        if "shape_c" not in where_keys(where, "environment"):
            assumptions.append("gas shape constant C = 1")

    if "suspension" in values:
        sv = values["suspension"]
        kw["suspension"] = Suspension(MATERIALS[sv["material"]], sv["r_w_m"], sv["l_w_m"],
                                      sv["n_w"], sv["s_w"], sv["bond_loss"])
        if "s_w" not in where_keys(where, "suspension"):
            assumptions.append("wire safety factor s_w = 3")

    if "torsion" in values:
        tv = values["torsion"]
        kw["torsion_bar"] = TorsionBar(osc.mass, tv["d_m"], tv["a"])
        if "a" not in where_keys(where, "torsion"):
            assumptions.append("torsion bar inertia factor a = 1/12 (uniform bar)")

    kw["levitation"] = values.get("levitation", {}).get("enabled", False)

    if "trap" in values:
        trv = values["trap"]
        w_eff = 2 * math.pi * trv["f_eff_hz"]
        if w_eff < osc.omega_m:
            raise ConfigError("f_eff_hz must be >= f_m_hz", section="trap",
                              line=where.get(("trap", "f_eff_hz")))
        g_eff = trv.get("gamma_eff_per_s")
        if g_eff is None:
            g_eff = float(mechanics.damping_rate(osc, w_eff))
            assumptions.append("trap gamma_eff = mechanical damping at omega_eff (no optical damping)")
        kw["effective"] = EffectiveDynamics(w_eff, g_eff)

    return SystemConfig(values, osc, assumptions=tuple(assumptions), **kw)


def where_keys(where, section: str) -> set[str]:
    return {k for (s, k) in where if s == section and k is not None}


def parse_config(text: str) -> SystemConfig:
    """Parse and validate; raises ConfigError carrying section and line."""
    where = _locate(text)
    values = _typed_values(_read(text), where)
    try:
        return _build(values, where)
    except ConfigError:
        raise
    except (MgOptoError, ValueError) as e:
        raise ConfigError(str(e)) from e


def load_config(path) -> SystemConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from e
    return parse_config(text)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def serialize_config(cfg: SystemConfig) -> str:
    """Canonical text with every default spelled out; parses back to an equal config."""
    lines = []
    for sec in SCHEMA:
        if sec not in cfg.values:
            continue
        lines.append(f"[{sec}]")
        for key in SCHEMA[sec]:
            if key in cfg.values[sec]:
                lines.append(f"{key} = {_fmt(cfg.values[sec][key])}")
        lines.append("")
    return "\n".join(lines)
