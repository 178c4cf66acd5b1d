"""Casimir free energy between metal half-spaces and its low-temperature behaviour."""

__version__ = "0.1.0"

from .constants import HBAR, K_B, C_LIGHT, classical_limit, ideal_metal_energy_T0
from .dispersion import (
    GOLD_1,
    GOLD_2,
    PRESETS,
    Drude,
    DrudeParameters,
    IdealMetal,
    Plasma,
    Tabulated,
    Vacuum,
    te_zero_mode_condition,
)
from .errors import CasimirError, DomainError, NumericalError, ValidationError
from .lifshitz import delta_free_energy, delta_free_energy_TE, entropy, free_energy, free_energy_T0

__all__ = [
    "__version__",
    "HBAR",
    "K_B",
    "C_LIGHT",
    "classical_limit",
    "ideal_metal_energy_T0",
    "GOLD_1",
    "GOLD_2",
    "PRESETS",
    "Drude",
    "DrudeParameters",
    "IdealMetal",
    "Plasma",
    "Tabulated",
    "Vacuum",
    "te_zero_mode_condition",
    "CasimirError",
    "DomainError",
    "NumericalError",
    "ValidationError",
    "delta_free_energy",
    "delta_free_energy_TE",
    "entropy",
    "free_energy",
    "free_energy_T0",
]
