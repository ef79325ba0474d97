"""High-precision Bergman polynomials and diagnostics for their fine asymptotics."""
from .asymptotics import (
    AsymptoticsReport,
    alpha_series,
    build_report,
    decay_exponent_series,
    fejer_check,
    fit_power_law,
    nth_root_series,
    strong_error_A,
    strong_bound_ratio,
    zero_free_check,
)
from .bergman import OrthonormalBasis, build_basis, eval_p, lambda_series, orthonormalize, zeros_of_p
from .conformal import exterior_map, laurent_gamma_coeffs, level_curve
from .domains import (
    PRESETS,
    Disk,
    Ellipse,
    Polygon,
    SemiDisk,
    boundary_arcs,
    convex_hull,
    distance_to_boundary,
    gram_matrix,
    moment,
)
from .precision import PrecisionContext, make_context

__all__ = [
    "AsymptoticsReport", "Disk", "Ellipse", "OrthonormalBasis", "PRESETS", "Polygon",
    "PrecisionContext", "SemiDisk", "alpha_series", "boundary_arcs", "build_basis",
    "build_report", "convex_hull", "decay_exponent_series", "distance_to_boundary", "eval_p",
    "exterior_map", "fejer_check", "fit_power_law", "gram_matrix", "lambda_series",
    "laurent_gamma_coeffs", "level_curve", "make_context", "moment", "nth_root_series",
    "orthonormalize", "strong_error_A", "strong_bound_ratio", "zero_free_check", "zeros_of_p",
]
