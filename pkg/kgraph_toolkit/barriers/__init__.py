"""
Barriers and existence-theorem hypothesis checks
"""

from kgraph_toolkit.barriers.height import (
    BarrierParams,
    HeightBarrier,
    barrier_height,
    choose_barrier_constants,
    default_grid,
    height_barrier,
    lower_height_barrier,
    min_flow_curvature,
    sphere_barrier_radius,
    supersolution_residual,
    verify_height,
)
from kgraph_toolkit.barriers.gradient import (
    ExtendedBoundaryData,
    GradientBarrier,
    boundary_gradient_barrier,
    log_barrier,
    strip_width,
)
from kgraph_toolkit.barriers.hypotheses import check_theorem_hypotheses, sup_abs_curvature

__all__ = [
    "BarrierParams",
    "HeightBarrier",
    "barrier_height",
    "choose_barrier_constants",
    "default_grid",
    "height_barrier",
    "lower_height_barrier",
    "min_flow_curvature",
    "sphere_barrier_radius",
    "supersolution_residual",
    "verify_height",
    "ExtendedBoundaryData",
    "GradientBarrier",
    "boundary_gradient_barrier",
    "log_barrier",
    "strip_width",
    "check_theorem_hypotheses",
    "sup_abs_curvature",
]
