"""
Killing Graph Toolkit

Numerical solver and verification harness for the prescribed mean curvature
Dirichlet problem for Killing graphs in warped products M = ℙ ×_ϱ ℝ.

Packages:
- geometry: ambient models, domains and closed-form fields
- mce: grids, the discrete mean curvature equation and Newton's method
- continuation: the σ-homotopy from u ≡ 0
- barriers: height and boundary-gradient barriers, theorem hypothesis checks
- rotational: rotational CMC profiles, F(r₀) and the flux identity
- specs, reports, cli: configuration, output files and the batch front-end
"""

__version__ = '0.1.0'

from kgraph_toolkit.core.errors import (
    KGraphError,
    ConfigError,
    DomainError,
    NonConvergenceError,
    DivergenceError,
    ContinuationStallError,
    BarrierConstructionError,
    UnboundedProfileError,
)
from kgraph_toolkit.geometry import AmbientModel, Domain, LeafKind, LeafMetric, WarpingFunction
from kgraph_toolkit.mce import Grid, ScalarField, build_grid, newton_solve, residual
from kgraph_toolkit.continuation import continuity_solve

__all__ = [
    "__version__",
    "KGraphError",
    "ConfigError",
    "DomainError",
    "NonConvergenceError",
    "DivergenceError",
    "ContinuationStallError",
    "BarrierConstructionError",
    "UnboundedProfileError",
    "AmbientModel",
    "Domain",
    "LeafKind",
    "LeafMetric",
    "WarpingFunction",
    "Grid",
    "ScalarField",
    "build_grid",
    "newton_solve",
    "residual",
    "continuity_solve",
]
