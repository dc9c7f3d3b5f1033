"""
Grid-refinement studies with manufactured solutions.
"""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from kgraph_toolkit.core.models import ConvergenceRow
from kgraph_toolkit.geometry.fields import FieldFunction
from kgraph_toolkit.geometry.models import AmbientModel, Domain
from kgraph_toolkit.mce.equation import manufactured_H
from kgraph_toolkit.mce.grid import ScalarField, build_grid
from kgraph_toolkit.mce.newton import NewtonOptions, newton_solve

logger = logging.getLogger('kgraph_toolkit.mce.verification')


def observed_order(errors: Sequence[float], spacings: Sequence[float]) -> List[Optional[float]]:
    """
    Observed convergence orders log(e_{k−1}/e_k)/log(h_{k−1}/h_k).

    The first level has no order; levels with a zero error get None.
    """
    orders: List[Optional[float]] = [None]
    for k in range(1, len(errors)):
        e0, e1 = errors[k - 1], errors[k]
        if e0 <= 0 or e1 <= 0:
            orders.append(None)
            continue
        orders.append(math.log(e0 / e1) / math.log(spacings[k - 1] / spacings[k]))
    return orders


def max_error(u: ScalarField, exact: FieldFunction) -> float:
    """Largest nodal deviation from a closed-form field"""
    return float(np.max(np.abs(u.values - u.grid.sample(exact))))


def solve_manufactured(model: AmbientModel, domain: Domain, solution: FieldFunction,
                       kind: str, m: int, m_b: Optional[int] = None,
                       opts: Optional[NewtonOptions] = None) -> ScalarField:
    """Solve the Dirichlet problem whose exact solution is `solution`"""
    grid = build_grid(model, domain.with_phi(solution), kind, m, m_b)
    H = manufactured_H(model, solution)
    u0 = np.full(grid.size, float(np.mean(grid.boundary_data())))
    return newton_solve(None, grid, H, u0=u0, opts=opts).u


def manufactured_study(model: AmbientModel, domain: Domain, solution: FieldFunction,
                       kind: str, sizes: Sequence[int],
                       opts: Optional[NewtonOptions] = None) -> List[ConvergenceRow]:
    """
    Refinement study for a manufactured pair (u*, H[u*]).

    Args:
        model: Ambient model
        domain: Domain (its φ is replaced by the trace of the solution)
        solution: Closed-form exact solution
        kind: Grid layout
        sizes: Increasing cell counts (both directions on 2-D grids)

    Returns:
        One ConvergenceRow per grid
    """
    spacings, errors = [], []
    for m in sizes:
        u = solve_manufactured(model, domain, solution, kind, m, opts=opts)
        spacings.append(u.grid.spacing)
        errors.append(max_error(u, solution))
        logger.info(f"{kind} m={m}: h={spacings[-1]:.4g}, max error={errors[-1]:.3e}")
    orders = observed_order(errors, spacings)
    return [ConvergenceRow(h, e, p) for h, e, p in zip(spacings, errors, orders)]

