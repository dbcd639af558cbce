"""Noise budgets, quantum-regime criteria and suspension design for milligram-scale optomechanics."""

from .config import SystemConfig, load_config, parse_config, serialize_config
from .coupling import CoupledSystem, ReducedMass
from .errors import (ConfigError, ConsistencyError, DesignError, DomainError, InstabilityError,
                     MgOptoError, NoLightError)
from .model import (FLAT, DampingModel, Environment, FrequencyGrid, LaserDrive,
                    MechanicalOscillator, OpticalCavity, validate_system)

__version__ = "0.1.0"

__all__ = [
    "FLAT", "ConfigError", "ConsistencyError", "CoupledSystem", "DampingModel", "DesignError",
    "DomainError", "Environment", "FrequencyGrid", "InstabilityError", "LaserDrive",
    "MechanicalOscillator", "MgOptoError", "NoLightError", "OpticalCavity", "ReducedMass",
    "SystemConfig", "load_config", "parse_config", "serialize_config", "validate_system",
]
