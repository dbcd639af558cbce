import csv
import io

import numpy as np
import pytest

from conftest import fixture_path
from mgopto.cli import EXIT_ERROR, EXIT_OK, EXIT_USAGE, main

SIM_CFG = """[oscillator]
mass_kg = 1e-6
f_m_hz = 1.0
q = 10
[cavity]
length_m = 0.1
finesse = 100
[laser]
p_circ_w = 1.0
"""


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def report_value(text, key):
    for line in text.splitlines():
        if line.startswith(key + ":"):
            return line.split(":", 1)[1].split("#")[0].strip()
    raise KeyError(key)


def test_budget_csv_and_crossing():
    code, out, _ = run("--config", fixture_path("pendulum_1hz.cfg"), "budget")
    assert code == EXIT_OK
    rows = list(csv.DictReader(out.splitlines()))
    assert list(rows[0]) == ["f_hz", "shot_asd_m", "rad_asd_m", "thermal_asd_m", "total_asd_m",
                             "shot_asd_n", "rad_asd_n", "thermal_asd_n", "total_asd_n"]
    assert len(rows) == 500
    f = np.array([float(r["f_hz"]) for r in rows])
    shot = np.array([float(r["shot_asd_m"]) for r in rows])
    rad = np.array([float(r["rad_asd_m"]) for r in rows])
    i = np.flatnonzero(np.diff(np.sign(rad - shot)))[0]
    assert f[i] == pytest.approx(500, rel=0.02)


def test_budget_single_point_and_report(tmp_path):
    target = tmp_path / "b.csv"
    code, out, _ = run("--config", fixture_path("pendulum_1hz.cfg"), "budget", "--points", "1",
                       "--f-min", "100", "--out", str(target))
    assert code == EXIT_OK
    assert len(target.read_text().splitlines()) == 2
    assert float(report_value(out, "f_sql_hz")) == pytest.approx(504.1, rel=1e-3)


def test_budget_mechanism_selection():
    code, out, _ = run("budget", "--config", fixture_path("pendulum_1hz.cfg"), "--mechanisms", "thermal")
    assert code == EXIT_OK
    row = next(csv.DictReader(out.splitlines()))
    assert row["shot_asd_m"] == "nan" and row["thermal_asd_m"] != "nan"
    code, _, err = run("budget", "--config", fixture_path("pendulum_1hz.cfg"), "--mechanisms", ",")
    assert code == EXIT_ERROR and "switched off" in err


def test_criteria_on_trapped_mode():
    code, out, _ = run("--config", fixture_path("seth2019.cfg"), "criteria")
    assert code == EXIT_OK
    assert report_value(out, "fq_verdict") == "PASS"
    assert float(report_value(out, "fq_margin")) == pytest.approx(1.34, abs=0.01)


def test_levitation_and_torsion_reports():
    _, out, _ = run("--config", fixture_path("levitation.cfg"), "levitation-check")
    assert float(report_value(out, "p_lev_w")) == pytest.approx(1.47e3, rel=2e-3)
    _, out, _ = run("--config", fixture_path("torsion_example.cfg"), "compare-torsion")
    assert float(report_value(out, "gamma_ratio")) == pytest.approx(0.11, rel=0.02)
    assert float(report_value(out, "cmr")) == pytest.approx(0.33, rel=0.02)


def test_design_pendulum_report():
    code, out, _ = run("--config", fixture_path("pendulum_gas.cfg"), "design-pendulum")
    assert code == EXIT_OK
    assert report_value(out, "active_constraints") == "tensile,violin"
    assert float(report_value(out, "f_v_hz")) == pytest.approx(100)
    code, _, err = run("--config", fixture_path("pendulum_gas.cfg"), "design-pendulum",
                       "--l-w-min", "10")
    assert code == EXIT_ERROR and "infeasible" in err


def test_simulate_is_reproducible(tmp_path):
    cfg = tmp_path / "sim.cfg"
    cfg.write_text(SIM_CFG)
    args = ("--config", str(cfg), "simulate", "--dt", "0.01", "--duration", "200", "--seed", "7")
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run(*args, "--out", str(a), "--quiet") == (EXIT_OK, "", "")
    psd = tmp_path / "p.csv"
    assert run(*args, "--out", str(b), "--psd-out", str(psd))[0] == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("t,x,v\n")
    assert psd.read_text().startswith("f_hz,psd\n")
    code, out, _ = run(*args, "--backaction", "--out", str(b))
    assert code == EXIT_OK and a.read_bytes() != b.read_bytes()


def test_exit_codes(tmp_path):
    assert run("criteria")[0] == EXIT_USAGE
    assert run("--config", fixture_path("pendulum_1hz.cfg"))[0] == EXIT_USAGE
    assert run("--config", fixture_path("pendulum_1hz.cfg"), "frobnicate")[0] == EXIT_USAGE
    bad = tmp_path / "bad.cfg"
    bad.write_text("[oscillator]\nmass_kg = 1\n")
    code, _, err = run("--config", str(bad), "criteria")
    assert code == EXIT_ERROR and "missing required key" in err
    code, _, err = run("--config", fixture_path("pendulum_1hz.cfg"), "simulate", "--dt", "0.01",
                       "--duration", "10")
    assert code == EXIT_ERROR and "relaxation" in err
