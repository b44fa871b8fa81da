"""Refined weak coupling (dynamical coarse-graining) treatment of the spin-boson model."""

from .bath import OhmicBath
from .coefficients import (
    CoefficientDerivatives, SBCoefficients, Tolerances, coefficient_derivatives,
    sb_coefficients,
)
from .engine import (
    LiouvillianCoefficients, davies_generator, davies_rates, dynamical_map, evolve,
    liouvillian, liouvillian_coefficients, liouvillian_via_integral, sb_exponent,
)
from .nonmarkov import WitnessSeries, canonical_rates, g_function, witness_series

__all__ = [
    "OhmicBath", "SBCoefficients", "CoefficientDerivatives", "Tolerances",
    "sb_coefficients", "coefficient_derivatives", "LiouvillianCoefficients",
    "sb_exponent", "dynamical_map", "liouvillian", "liouvillian_coefficients",
    "liouvillian_via_integral", "davies_rates", "davies_generator", "evolve",
    "WitnessSeries", "canonical_rates", "g_function", "witness_series",
]

__version__ = "0.1.0"
