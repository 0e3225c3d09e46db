"""Scale-invariant numerics at desk scale.

Homogeneous two-map Cantor sets and their staircases, ultrametric
valuations of scaled-down companions, fattened (deformed) reals, measure
invariance identities, an exact segmented prime sieve, and tables that
confront prime counts with their asymptotic models.  Everything reports
measurements; nothing here proves or refutes an open conjecture.
"""

__version__ = "0.1.0"

from .cantor import BoxCountFit, CantorSpec, LevelSet, box_count_estimate, build_levels, dimension, iter_bridges, removed_length
from .deform import DeformedReal, SmoothStep, fatten, increment, jump_size, log_scale_ode_residual, smooth_step_eval, smoothed_pi
from .errors import ConfigError, NonConvergenceError, ResourceCapError
from .invariance import BalanceReport, ContractionScenario, balance_report, compensating_length, dual_identity, invariance_identity
from .pnt import BandPoint, FitResult, PntSample, correction_model_ratio, error_exponent_fit, ratio_table, rh_band_check, sigma_fixed_point
from .primes import PrimeTable, build_table, harmonic_ladder, li, prime_ladder
from .staircase import Staircase
from .valuation import (
    ScaledInfinitesimal,
    ValuationResult,
    constant_ratio_family,
    make_infinitesimal,
    power_family,
    represent,
    two_norm_family,
    valuation_at_scale,
    valuation_limit,
    valuation_ratio,
)

__all__ = [
    "__version__",
    "BandPoint", "BalanceReport", "BoxCountFit", "CantorSpec", "ConfigError",
    "ContractionScenario", "DeformedReal", "FitResult", "LevelSet",
    "NonConvergenceError", "PntSample", "PrimeTable", "ResourceCapError",
    "ScaledInfinitesimal", "SmoothStep", "Staircase", "ValuationResult",
    "balance_report", "box_count_estimate", "build_levels", "build_table",
    "compensating_length", "correction_model_ratio", "dimension",
    "dual_identity", "error_exponent_fit", "fatten", "harmonic_ladder",
    "increment", "invariance_identity", "iter_bridges", "jump_size", "li",
    "log_scale_ode_residual", "make_infinitesimal", "power_family",
    "prime_ladder", "ratio_table", "removed_length", "represent",
    "rh_band_check", "sigma_fixed_point", "smooth_step_eval", "smoothed_pi",
    "two_norm_family", "valuation_at_scale", "valuation_limit",
    "valuation_ratio", "constant_ratio_family",
]
