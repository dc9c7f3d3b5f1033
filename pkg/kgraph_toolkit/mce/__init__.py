"""
Discretization and solution of the Killing-graph mean curvature equation.

Available pieces:
- grid: radial, polar and cartesian grids, ScalarField
- equation: conservative and expanded residuals, coefficients, manufactured H
- newton: damped Newton with a colored finite-difference Jacobian
- verification: manufactured-solution refinement studies
"""

from kgraph_toolkit.mce.grid import Grid, GridKind, ScalarField, BoundarySegment, build_grid, sphere_measure
from kgraph_toolkit.mce.equation import (
    Coefficients,
    GradientDiagnostic,
    ManufacturedCurvature,
    UnitNormal,
    coefficients,
    divergence_operator,
    expanded_residual,
    gradient_diagnostic,
    manufactured_H,
    mean_curvature_operator,
    residual,
    sample_curvature,
    slope_function,
    support_function,
    unit_normal,
)
from kgraph_toolkit.mce.newton import (
    ColoredJacobian,
    NewtonOptions,
    NewtonResult,
    color_columns,
    newton_solve,
    solve_system,
)
from kgraph_toolkit.mce.verification import (
    manufactured_study,
    max_error,
    observed_order,
    solve_manufactured,
)

__all__ = [
    "Grid",
    "GridKind",
    "ScalarField",
    "BoundarySegment",
    "build_grid",
    "sphere_measure",
    "Coefficients",
    "GradientDiagnostic",
    "ManufacturedCurvature",
    "UnitNormal",
    "coefficients",
    "divergence_operator",
    "expanded_residual",
    "gradient_diagnostic",
    "manufactured_H",
    "mean_curvature_operator",
    "residual",
    "sample_curvature",
    "slope_function",
    "support_function",
    "unit_normal",
    "ColoredJacobian",
    "NewtonOptions",
    "NewtonResult",
    "color_columns",
    "newton_solve",
    "solve_system",
    "manufactured_study",
    "max_error",
    "observed_order",
    "solve_manufactured",
]
