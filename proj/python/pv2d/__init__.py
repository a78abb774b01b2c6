"""Exact counting for two-dimensional Parsell-Vinogradov systems, with the
supporting transversality checks and oscillatory-integral probes.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._core import (
    BudgetError,
    ValidationError,
    bl_dimension_check,
    brute_force_count,
    decoupling_probe,
    exponent_fit,
    isotropic_search,
    mitm_count,
    moment_map,
    nu_estimate,
    predicted_exponent,
    q_polynomial,
    quartic_count,
    relaxed_count,
    restriction_ratio,
    sample_sites,
    system_info,
    tangent_frame,
    torus_mean,
    verify_operator_kernels,
    weyl_sum,
    zero_set_square_count,
)

__all__ = [
    "BudgetError",
    "ValidationError",
    "bl_dimension_check",
    "brute_force_count",
    "decoupling_probe",
    "exponent_fit",
    "isotropic_search",
    "mitm_count",
    "moment_map",
    "nu_estimate",
    "predicted_exponent",
    "q_polynomial",
    "quartic_count",
    "relaxed_count",
    "restriction_ratio",
    "sample_sites",
    "system_info",
    "tangent_frame",
    "torus_mean",
    "verify_operator_kernels",
    "weyl_sum",
    "zero_set_square_count",
]

__version__ = "0.1.0"
