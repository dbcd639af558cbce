import importlib.resources
import math

import pytest
from hypothesis import HealthCheck, settings

from mgopto import CoupledSystem, LaserDrive, MechanicalOscillator, OpticalCavity
from mgopto.config import parse_config

settings.register_profile("default", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def fixture_text(name: str) -> str:
    return importlib.resources.files("mgopto").joinpath(f"data/{name}").read_text("utf-8")


def fixture_path(name: str) -> str:
    return str(importlib.resources.files("mgopto").joinpath(f"data/{name}"))


@pytest.fixture
def pendulum_system() -> CoupledSystem:
    osc = MechanicalOscillator(1e-6, 2 * math.pi, 1e9)
    cav = OpticalCavity.from_finesse(0.1, 100)
    return CoupledSystem(osc, cav, LaserDrive(1064e-9), p_circ=1.0)


@pytest.fixture
def pendulum_config():
    return parse_config(fixture_text("pendulum_1hz.cfg"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, (ok, detail) in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"{label}: {'PASS' if ok else 'FAIL'}  {detail}")
