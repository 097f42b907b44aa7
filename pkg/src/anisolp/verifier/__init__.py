"""Empirical verification of the norm inequalities on seeded ensembles."""

from .ensemble import EnsembleSpec, dilated_specs, generate, generate_bands
from .ratios import (
    BalanceError,
    ExponentError,
    RatioTrial,
    SupportError,
    check_sobolev_params,
    mixed_npp_ratio,
    npp_ratio,
    seq_npp_ratio,
    sobolev_ratio,
    spectral_radius,
)
from .report import SlopeFit, VerificationReport, fit_loglog_slope
from .suites import (
    embedding_suite,
    interpolation_suite,
    mixed_npp_suite,
    npp_suite,
    run_all,
    scaling_sweep,
    seed_spread,
    seq_npp_suite,
    sobolev_suite,
    subadditivity_suite,
)

__all__ = [
    "EnsembleSpec",
    "dilated_specs",
    "generate",
    "generate_bands",
    "BalanceError",
    "ExponentError",
    "RatioTrial",
    "SupportError",
    "check_sobolev_params",
    "mixed_npp_ratio",
    "npp_ratio",
    "seq_npp_ratio",
    "sobolev_ratio",
    "spectral_radius",
    "SlopeFit",
    "VerificationReport",
    "fit_loglog_slope",
    "embedding_suite",
    "interpolation_suite",
    "mixed_npp_suite",
    "npp_suite",
    "run_all",
    "scaling_sweep",
    "seed_spread",
    "seq_npp_suite",
    "sobolev_suite",
    "subadditivity_suite",
]
