"""
Flux identity for Killing graphs.

For a solution of the mean curvature equation with ⟨Y, N⟩ = 1/W and
dΣ = ϱW dℙ, integrating div(ϱ∇u/W) = nHϱ over Ω gives

    n ∫_Ω H ϱ dℙ = ∫_Γ ϱ ⟨∇u, η_out⟩ / W dΓ,

the graph form of n∫_D H⟨Y, N_D⟩ + ∫_Γ⟨Y, ν⟩ = 0 with ⟨Y, ν⟩ = −ϱ⟨∇u, η_out⟩/W.
"""

import logging
from typing import Optional

import numpy as np

from kgraph_toolkit.core.errors import DomainError
from kgraph_toolkit.core.models import FluxReport
from kgraph_toolkit.geometry.models import AmbientModel, Domain
from kgraph_toolkit.mce.equation import CurvatureInput, _check_model, sample_curvature
from kgraph_toolkit.mce.grid import ScalarField

logger = logging.getLogger('kgraph_toolkit.rotational.flux')


def graph_flux_check(model: Optional[AmbientModel], domain: Optional[Domain], u: ScalarField,
                     H: CurvatureInput) -> FluxReport:
    """
    Evaluate both sides of the flux identity on a computed solution.

    The area integral uses the grid's ϱ-weighted node volumes (half cells on
    Γ); the boundary integral uses the trapezoid rule with one-sided normal
    derivatives.

    Raises:
        DomainError: If the domain does not match the solution's grid
    """
    grid = u.grid
    _check_model(model, grid)
    if domain is not None and (domain.shape != grid.domain.shape
                               or domain.primary_range != grid.domain.primary_range
                               or domain.bounds != grid.domain.bounds):
        raise DomainError(f"{domain.describe()} is not the domain of {grid.describe()}")

    lhs = grid.n * float(np.sum(sample_curvature(grid, H) * grid.node_weights))
    rhs = grid.boundary_flux(u.values)
    report = FluxReport(lhs=lhs, rhs=rhs)
    logger.debug(f"Flux check: lhs = {lhs:.12g}, rhs = {rhs:.12g}, "
                 f"residual = {report.relative_residual:.3e}")
    return report
