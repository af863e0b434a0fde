"""Scattering, spectral singularities and bound states of the complex Scarf II potential."""

from .analytic import (
    PoleOfT,
    ReflectionZero,
    ScarfParams,
    ScatteringResult,
    Side,
    det_s_factor,
    f_factor,
    inverse_transmission,
    potential,
    reflection_zero_general,
    scattering_coefficients,
    transmission_amplitude,
)
from .closed_forms import Parameterization, to_scarf_params
from .oracle import OracleConfig, numerical_scatter, verify_bound_state
from .spectral import PoleClass, ScanRegion, energy_spectrum, find_poles

__version__ = "0.1.0"

__all__ = [
    "PoleOfT",
    "ReflectionZero",
    "ScarfParams",
    "ScatteringResult",
    "Side",
    "det_s_factor",
    "f_factor",
    "inverse_transmission",
    "potential",
    "reflection_zero_general",
    "scattering_coefficients",
    "transmission_amplitude",
    "Parameterization",
    "to_scarf_params",
    "OracleConfig",
    "numerical_scatter",
    "verify_bound_state",
    "PoleClass",
    "ScanRegion",
    "energy_spectrum",
    "find_poles",
]
