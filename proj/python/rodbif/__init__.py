"""Kirchhoff rod with intrinsic curvature: bifurcation analysis toolkit.

Thin Python layer over the C++ core. Paths cross the boundary as numpy arrays
of shape (N+1, 3): one row of Cardan angles per grid node, clamped ends zero.
"""

from ._rodbif import (
    AssumptionError,
    ChartError,
    ElasticConstants,
    NumericalError,
    ValidationError,
    angular_strain,
    cardan_to_rotation,
    centerline,
    coefficients_closed,
    coefficients_numeric,
    constrained_spectrum,
    continue_branch,
    count_stationary,
    critical_force,
    critical_force_numeric,
    energy_cardan,
    energy_gap,
    gradient,
    hessian,
    kernel_mode,
    minimize,
    newton_solve,
    rotation_to_cardan,
    sign_changes_third_angle,
)

__all__ = [
    "AssumptionError",
    "ChartError",
    "ElasticConstants",
    "NumericalError",
    "ValidationError",
    "angular_strain",
    "cardan_to_rotation",
    "centerline",
    "coefficients_closed",
    "coefficients_numeric",
    "constrained_spectrum",
    "continue_branch",
    "count_stationary",
    "critical_force",
    "critical_force_numeric",
    "energy_cardan",
    "energy_gap",
    "gradient",
    "hessian",
    "kernel_mode",
    "minimize",
    "newton_solve",
    "rotation_to_cardan",
    "sign_changes_third_angle",
]
