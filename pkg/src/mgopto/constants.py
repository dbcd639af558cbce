"""Physical constants (SI, exact 2019 definitions where available)."""

from dataclasses import dataclass
import math


@dataclass(frozen=True)
class PhysicalConstants:
    h: float = 6.62607015e-34  # J s
    k_B: float = 1.380649e-23  # J/K
    c: float = 299792458.0  # m/s
    g_grav: float = 9.80665  # m/s^2, standard gravity
    amu: float = 1.66053906660e-27  # kg

    @property
    def hbar(self) -> float:
        return self.h / (2 * math.pi)


CONST = PhysicalConstants()

HBAR = CONST.hbar
H = CONST.h
K_B = CONST.k_B
C = CONST.c
G_GRAV = CONST.g_grav
AMU = CONST.amu

# molecular masses in atomic mass units
GAS_MASSES_AMU = {
    "helium": 4.002602,
    "hydrogen": 2.01588,
    "water": 18.01528,
    "nitrogen": 28.0134,
    "air": 28.9647,
    "argon": 39.948,
}


def gas_molecule_mass(gas: str) -> float:
    """Mass of one molecule of a named residual gas, in kg."""
    try:
        return GAS_MASSES_AMU[gas.lower()] * AMU
    except KeyError:
        raise ValueError(
            f"unknown gas {gas!r}; choose one of {sorted(GAS_MASSES_AMU)}"
        ) from None
