"""Command-line front end: ``mgopto <command> --config system.cfg``.

Reports are ``key: value`` lines; a trailing ``# ...`` names the formula
behind each derived number. CSVs are comma-separated with LF endings.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import criteria, langevin, levitation, mechanics, quantum, suspension, torsion
from .config import SystemConfig, load_config
from .coupling import coupling_params
from .errors import ConfigError, MgOptoError
from .model import FrequencyGrid

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


class Report:
    def __init__(self):
        self.lines: list[str] = []

    def add(self, key: str, value, note: str | None = None) -> None:
        if isinstance(value, bool):
            text = "PASS" if value else "FAIL"
        elif isinstance(value, float):
            text = f"{value:.6g}"
        else:
            text = str(value)
        line = f"{key}: {text}"
        self.lines.append(f"{line}  # {note}" if note else line)

    def assumptions(self, cfg: SystemConfig, extra=()) -> None:
        for a in (*cfg.assumptions, *extra):
            self.lines.append(f"assumption: {a}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _hz(omega: float) -> float:
    return omega / (2 * math.pi)


def budget_csv(cfg: SystemConfig, f_min: float, f_max: float, points: int,
               mechanisms=quantum.MECHANISMS) -> tuple[str, quantum.NoiseBudget]:
    system = cfg.system
    grid = FrequencyGrid.log_hz(f_min, f_max, points)
    b = quantum.build_budget(system, grid, mechanisms)
    disp, force = b.asd("displacement"), b.asd("force")
    cols = ["shot", "radiation", "thermal", "total"]
    header = ["f_hz", "shot_asd_m", "rad_asd_m", "thermal_asd_m", "total_asd_m",
              "shot_asd_n", "rad_asd_n", "thermal_asd_n", "total_asd_n"]
    nan = np.full(len(grid), np.nan)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    table = [grid.hz] + [disp.get(c, nan) for c in cols] + [force.get(c, nan) for c in cols]
    for row in zip(*table):
        w.writerow(["%.6e" % v for v in row])
    return buf.getvalue(), b


def cmd_budget(cfg: SystemConfig, f_min: float, f_max: float, points: int,
               mechanisms=quantum.MECHANISMS) -> tuple[str, Report]:
    text, b = budget_csv(cfg, f_min, f_max, points, mechanisms)
    r = Report()
    system = cfg.system
    qin = quantum.QuantumNoiseInput.from_system(system)
    r.add("points", len(b.grid))
    r.add("mechanisms", ",".join(b.metadata["mechanisms"]))
    r.add("p_circ_w", system.circ_power)
    r.add("kappa_rad_s", system.kappa, "kappa = pi c / (2 F L)")
    r.add("reduced_mass_kg", system.reduced_mass)
    if qin.n_circ > 0:
        r.add("f_sql_hz", _hz(quantum.sql_touching_frequency(qin, warn=False)),
              "omega_SQL = sqrt(4 hbar G^2 n / (M kappa))")
    if b.metadata["detuned_approximation"]:
        r.add("warning", "detuned drive: quantum-noise curves use the resonant-readout formulas")
    r.assumptions(cfg)
    return text, r


def cmd_criteria(cfg: SystemConfig) -> Report:
    osc = cfg.oscillator
    system = cfg.system if cfg.has("cavity") else None
    rep = criteria.evaluate_criteria(osc, system, cfg.effective)
    r = Report()
    r.add("damping", osc.damping.value)
    r.add("n_th", mechanics.thermal_occupancy(osc), "n_th = k_B T / (hbar omega_m)")
    r.add("gamma_th_per_s", rep.gamma_th, "Gamma_th = k_B T / (hbar Q)")
    if system is not None:
        r.add("g_rad_s", coupling_params(system).g, "g = G x_zpf sqrt(n_circ)")
        r.add("C", rep.C, "C = 2 g^2 / (gamma_m kappa)")
        r.add("C_qu", rep.C_qu, "C_qu = C / n_th")
        r.add("C_qu_verdict", rep.verdicts["quantum_cooperativity"], "C_qu > 1")
        r.add("gamma_meas_per_s", rep.gamma_meas, "Gamma_meas = x_zpf^2 / (2 S_imp(omega_m))")
        r.add("gamma_meas_verdict", rep.verdicts["measurement_rate"], "Gamma_meas >= Gamma_th / 8")
    fq = rep.fq
    r.add("fq_product_hz", fq.product, "f_m Q_m")
    r.add("fq_threshold_hz", fq.threshold, "(k_B T / h)(omega_m / omega_eff)^alpha")
    r.add("fq_alpha", fq.alpha)
    r.add("fq_eff_hz", fq.f_eff_q_eff, "f_eff Q_eff against k_B T / h")
    r.add("fq_margin", fq.margin, "f_m Q_m / threshold")
    r.add("fq_verdict", fq.passed, "f_m Q_m > threshold")
    if rep.n_eff is not None:
        r.add("f_eff_hz", _hz(cfg.effective.omega_eff))
        r.add("gamma_eff_per_s", cfg.effective.gamma_eff)
        r.add("n_eff", rep.n_eff, "k_B T / (hbar omega_eff) gamma_m(omega_eff) / gamma_eff")
        r.add("overdamped", "yes" if rep.overdamped else "no", "gamma_eff >= omega_eff")
    r.assumptions(cfg)
    return r


def cmd_design_pendulum(cfg: SystemConfig, f_v_min: float | None = None,
                        r_w_min: float | None = None, l_w_min: float | None = None,
                        l_w_max: float | None = None) -> Report:
    cfg.require("suspension")
    sv = cfg.values["suspension"]
    if f_v_min is None:
        f_v_min = sv.get("f_v_min_hz")
    if f_v_min is None:
        raise ConfigError("violin-mode floor needed: pass --f-v-min or set f_v_min_hz",
                          section="suspension")
    m = cfg.oscillator.mass
    mat = cfg.suspension.material
    cons = suspension.DesignConstraints(f_v_min, cfg.suspension.s_w, cfg.suspension.n_w,
                                        r_w_min, l_w_min, l_w_max)
    d = suspension.max_q_design(m, mat, cons)
    r = Report()
    r.add("material", mat.name)
    r.add("s_w", cons.s_w)
    r.add("n_w", cons.n_w)
    r.add("f_v_min_hz", f_v_min)
    r.add("r_w_m", d.suspension.r_w, "r_w = sqrt(s_w m g / (pi n H))")
    r.add("l_w_m", d.suspension.l_w, "l_w = sqrt(T / (rho pi r^2)) / (2 f_v)")
    r.add("dilution", d.dilution, "Lambda = (4 l / r^2) sqrt(m g / (pi n E))")
    r.add("q_pend", d.q_pend, "Q = Lambda Q_el")
    r.add("q_pend_closed_form", suspension.max_q_formula(d.f_v, cons.s_w, mat, d.suspension.r_w),
          "Q = 2 H Q_el / (s_w f_v r sqrt(rho E))")
    r.add("f_v_hz", d.f_v)
    r.add("f_pend_hz", d.f_pend)
    r.add("active_constraints", ",".join(d.active))
    if cfg.environment is not None:
        br = suspension.total_pendulum_damping(m, d.suspension, cfg.environment,
                                               cfg.oscillator.temperature)
        r.add("gamma_gas_per_s", float(br.gas[0]), "gamma = P A / (C m) sqrt(m_gas / (k_B T))")
        r.add("gamma_wire_per_s", float(br.wire[0]))
        r.add("gamma_thermoelastic_per_s", float(br.thermoelastic[0]))
        r.add("q_total", br.q_pend)
    r.assumptions(cfg)
    return r


def cmd_compare_torsion(cfg: SystemConfig) -> Report:
    cfg.require("suspension", "torsion")
    bar, susp = cfg.torsion_bar, cfg.suspension
    m = cfg.oscillator.mass
    ratio = torsion.damping_ratio(bar, susp)
    r = Report()
    r.add("a", bar.a)
    r.add("s_w", susp.s_w)
    r.add("inertia_kg_m2", bar.inertia, "I = a m d^2")
    r.add("dilution", suspension.dilution_factor(m, susp.r_w, susp.l_w, susp.material.E, susp.n_w),
          "Lambda = (4 l / r^2) sqrt(m g / (pi n E))")
    r.add("f_torsion_hz", torsion.torsion_frequency(susp, bar), "k = pi E r^4 / (4 (1 + nu) l)")
    r.add("f_pend_hz", _hz(suspension.pendulum_frequency(m, susp)))
    r.add("gamma_ratio", ratio.geometric,
          "gamma_tor/gamma_pend = l r^2 sqrt(pi E / (m g)) / (a (1 + nu) d^2)")
    r.add("gamma_ratio_tensile_form", ratio.tensile,
          "l s_w sqrt(m g E / pi) / (a (1 + nu) H d^2)")
    r.add("tensile_margin", ratio.tensile_margin, "pi r^2 H / (s_w m g)")
    r.add("cmr", torsion.common_mode_rejection_requirement(ratio.geometric),
          "sqrt(gamma_tor / gamma_pend)")
    if susp.tensile_margin(m) < 1:
        r.add("warning", "wire is thinner than the tensile limit allows")
    r.assumptions(cfg)
    return r


def cmd_levitation_check(cfg: SystemConfig) -> Report:
    m = cfg.oscillator.mass
    r = Report()
    r.add("p_lev_w", levitation.levitation_power(m), "P = m g c / 2")
    if cfg.has("cavity"):
        resp = cfg.system.response
        lam = cfg.drive.wavelength
        chk = levitation.check_finesse(resp.finesse, cfg.cavity.length, lam)
        r.add("finesse", resp.finesse)
        r.add("f_sql_hz", _hz(levitation.levitation_sql_frequency(resp.finesse, lam)),
              "omega_SQL = sqrt(16 F g / lambda)")
        r.add("finesse_bound", chk.bound, "(pi^2 c^2 lambda / (64 L^2 g))^(1/3)")
        r.add("finesse_ratio", chk.ratio)
        r.add("finesse_verdict", chk.ok, f"F / bound <= {chk.threshold:g}")
    if not cfg.levitation:
        r.add("note", "levitation.enabled is false; numbers shown for reference")
    r.assumptions(cfg)
    return r


def cmd_simulate(cfg: SystemConfig, dt: float, duration: float, seed: int,
                 feedback_gain: float = 0.0, x0: float = 0.0, v0: float = 0.0,
                 backaction: bool = False) -> tuple[langevin.SimConfig, langevin.Trajectory, Report]:
    extra = 0.0
    if backaction:
        extra = quantum.QuantumNoiseInput.from_system(cfg.system).radiation_force_psd_dc
    sc = langevin.SimConfig(cfg.oscillator, dt, duration, seed, feedback_gain, x0, v0, extra)
    traj = langevin.simulate(sc)
    osc = cfg.oscillator
    r = Report()
    r.add("steps", sc.n_steps)
    r.add("seed", seed)
    r.add("gamma_eff_per_s", sc.gamma_eff, "gamma_m + gain")
    r.add("force_psd_n2_hz", sc.force_psd, "4 k_B T m gamma_m + S_extra")
    r.add("var_x_m2", float(np.var(traj.x)))
    r.add("var_x_expected_m2", sc.force_psd / (4 * osc.mass**2 * osc.omega_m**2 * sc.gamma_eff),
          "S_F / (4 m^2 omega_m^2 gamma_eff)")
    r.add("t_eff_k", langevin.effective_temperature(traj, osc), "m omega_m^2 <x^2> / k_B")
    r.assumptions(cfg)
    return sc, traj, r


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="system description file")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output path (CSV or report)")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="suppress the text report")

    p = argparse.ArgumentParser(prog="mgopto", description="Milligram-scale optomechanics calculator")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--quiet", action="store_true", default=False)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("budget", parents=[common], help="noise budget CSV")
    b.add_argument("--f-min", type=float, default=1.0, help="Hz")
    b.add_argument("--f-max", type=float, default=1e4, help="Hz")
    b.add_argument("--points", type=int, default=500)
    b.add_argument("--mechanisms", default=",".join(quantum.MECHANISMS),
                   help="comma list of shot,radiation,thermal")

    sub.add_parser("criteria", parents=[common], help="quantum-regime criteria")

    d = sub.add_parser("design-pendulum", parents=[common], help="maximum-Q pendulum design")
    d.add_argument("--f-v-min", type=float, default=None, help="violin-mode floor, Hz")
    d.add_argument("--r-w-min", type=float, default=None, help="fabrication limit on wire radius, m")
    d.add_argument("--l-w-min", type=float, default=None, help="m")
    d.add_argument("--l-w-max", type=float, default=None, help="m")

    sub.add_parser("compare-torsion", parents=[common], help="torsion versus pendulum damping")
    sub.add_parser("levitation-check", parents=[common], help="optical levitation numbers")

    s = sub.add_parser("simulate", parents=[common], help="Langevin trajectory CSV")
    s.add_argument("--dt", type=float, required=True, help="s")
    s.add_argument("--duration", type=float, required=True, help="s")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--feedback-gain", type=float, default=0.0, help="velocity feedback rate, rad/s")
    s.add_argument("--x0", type=float, default=0.0)
    s.add_argument("--v0", type=float, default=0.0)
    s.add_argument("--backaction", action="store_true",
                   help="add white radiation-pressure force noise from the cavity")
    s.add_argument("--psd-out", default=None, help="also write a PSD estimate CSV here")
    return p


def _write(path: str | None, text: str, stdout) -> None:
    if path is None:
        stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise ConfigError(f"cannot write {path}: {e.strerror}") from e


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if args.config is None:
        stderr.write("mgopto: error: --config is required\n")
        return EXIT_USAGE
    try:
        cfg = load_config(args.config)
        if args.command == "budget":
            mechs = tuple(m.strip() for m in args.mechanisms.split(",") if m.strip())
            if not mechs:
                raise ConfigError("all mechanisms switched off")
            text, rep = cmd_budget(cfg, args.f_min, args.f_max, args.points, mechs)
            if args.out is None:
                stdout.write(text)
            else:
                _write(args.out, text, stdout)
                if not args.quiet:
                    stdout.write(rep.text())
            return EXIT_OK
        if args.command == "simulate":
            _, traj, rep = cmd_simulate(cfg, args.dt, args.duration, args.seed, args.feedback_gain,
                                        args.x0, args.v0, args.backaction)
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["t", "x", "v"])
            for row in zip(traj.t, traj.x, traj.v):
                w.writerow(["%.9e" % v for v in row])
            if args.psd_out:
                f, p = langevin.psd_estimate(traj)
                try:
                    langevin.psd_to_csv(f, p, args.psd_out)
                except OSError as e:
                    raise ConfigError(f"cannot write {args.psd_out}: {e.strerror}") from e
            if args.out is None:
                stdout.write(buf.getvalue())
            else:
                _write(args.out, buf.getvalue(), stdout)
                if not args.quiet:
                    stdout.write(rep.text())
            return EXIT_OK
        if args.command == "criteria":
            rep = cmd_criteria(cfg)
        elif args.command == "design-pendulum":
            rep = cmd_design_pendulum(cfg, args.f_v_min, args.r_w_min, args.l_w_min, args.l_w_max)
        elif args.command == "compare-torsion":
            rep = cmd_compare_torsion(cfg)
        else:
            rep = cmd_levitation_check(cfg)
        if args.out is not None:
            _write(args.out, rep.text(), stdout)
        elif not args.quiet:
            stdout.write(rep.text())
        return EXIT_OK
    except MgOptoError as e:
        stderr.write(f"mgopto {args.command}: error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
