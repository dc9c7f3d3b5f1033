"""
Exponential height barriers and geodesic-sphere radius bounds.

The upper height barrier is φ⁺ = sup_Γ φ + h(d) with

    h(d) = (e^{CA}/C)(1 − e^{−Cd}),   h′ = e^{C(A−d)},   h″ = −C h′,

and d the leaf distance to Γ; the lower barrier is inf_Γ φ − h(d).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from kgraph_toolkit.core.errors import BarrierConstructionError, DomainError
from kgraph_toolkit.core.models import HeightCheck
from kgraph_toolkit.geometry.fields import zero_field
from kgraph_toolkit.geometry.models import AmbientModel, Domain, DomainShape
from kgraph_toolkit.geometry.operations import (
    boundary_distance,
    cylinder_mean_curvature,
    flow_line_curvature,
)
from kgraph_toolkit.mce.equation import CurvatureInput, divergence_operator, sample_curvature
from kgraph_toolkit.mce.grid import Grid, ScalarField, build_grid

logger = logging.getLogger('kgraph_toolkit.barriers.height')

MAX_EXPONENT = 2.0 ** 20
DIAMETER_FACTOR = 1.1


@dataclass(frozen=True)
class BarrierParams:
    """
    Barrier constants.

    C is the height-barrier exponent and A > diam Ω its offset; μ, K and ε
    are filled in once a boundary-gradient barrier has been accepted.
    """
    C: float
    A: float
    mu: Optional[float] = None
    K: Optional[float] = None
    eps: Optional[float] = None

    def __post_init__(self):
        if self.C <= 0:
            raise DomainError(f"Barrier exponent C must be positive, got {self.C}")
        if self.A <= 0:
            raise DomainError(f"Barrier offset A must be positive, got {self.A}")

    def check_against(self, domain: Domain) -> None:
        """Raises DomainError unless A > diam Ω"""
        if self.A <= domain.diameter:
            raise DomainError(
                f"A = {self.A:g} must exceed diam = {domain.diameter:g} of {domain.describe()}"
            )


def barrier_height(d, C: float, A: float, order: int = 0):
    """h(d) and its first two derivatives"""
    d = np.asarray(d, dtype=float)
    if order == 0:
        out = np.exp(C * A) / C * (1.0 - np.exp(-C * d))
    elif order == 1:
        out = np.exp(C * (A - d))
    elif order == 2:
        out = -C * np.exp(C * (A - d))
    else:
        raise ValueError(f"Only orders 0, 1, 2 are available, got {order}")
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class HeightBarrier:
    """offset + sign·h(d(p)), evaluated like a closed-form field"""
    domain: Domain
    offset: float
    params: BarrierParams
    sign: float = 1.0

    def __call__(self, a, b=0.0, polar: bool = True) -> np.ndarray:
        d = np.maximum(boundary_distance(self.domain, a, b), 0.0)
        return self.offset + self.sign * barrier_height(d, self.params.C, self.params.A)


def height_barrier(model: AmbientModel, domain: Domain, sup_phi: float,
                   params: BarrierParams) -> HeightBarrier:
    """Upper barrier φ⁺ = sup_Γ φ + h(d)"""
    params.check_against(domain)
    return HeightBarrier(domain, sup_phi, params, 1.0)


def lower_height_barrier(model: AmbientModel, domain: Domain, inf_phi: float,
                         params: BarrierParams) -> HeightBarrier:
    """Lower barrier φ⁻ = inf_Γ φ − h(d)"""
    params.check_against(domain)
    return HeightBarrier(domain, inf_phi, params, -1.0)


def min_flow_curvature(model: AmbientModel, domain: Domain, samples: int = 20) -> float:
    """inf over ε ∈ [0, 0.95·inradius] of κ_ε, over every boundary component"""
    eps_values = np.linspace(0.0, 0.95 * domain.inradius, samples)
    if domain.shape == DomainShape.DISC:
        points = [(domain.r0, 0.0)]
    elif domain.shape == DomainShape.ANNULUS:
        points = [(domain.r_out, 0.0), (domain.r_in, 0.0)]
    else:
        x0, x1, y0, y1 = domain.bounds
        xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        points = [(x0, ym), (x1, ym), (xm, y0), (xm, y1)]
    return min(flow_line_curvature(model, domain, p, float(eps))
               for p in points for eps in eps_values)


def _is_radial(H: CurvatureInput) -> bool:
    if isinstance(H, (int, float)):
        return True
    return bool(getattr(H, 'is_radial', False))


def default_grid(model: AmbientModel, domain: Domain, H: CurvatureInput, m: int = 64) -> Grid:
    """Grid used for discrete barrier tests when the caller does not supply one"""
    domain = domain.with_phi(zero_field())
    if domain.shape == DomainShape.RECTANGLE:
        return build_grid(model, domain, "cartesian", m)
    if _is_radial(H) or model.n > 2:
        return build_grid(model, domain, "radial", m)
    return build_grid(model, domain, "polar", m)


def supersolution_residual(grid: Grid, barrier, H: CurvatureInput) -> np.ndarray:
    """Q[barrier] at the interior nodes"""
    nH = grid.n * sample_curvature(grid, H)[grid.interior]
    with np.errstate(over='ignore', invalid='ignore'):
        values = grid.sample(barrier)
        return divergence_operator(grid, values) - nH


def choose_barrier_constants(model: AmbientModel, domain: Domain, H: CurvatureInput,
                             grid: Optional[Grid] = None,
                             logger: Optional[logging.Logger] = None) -> BarrierParams:
    """
    Smallest C in 1, 2, 4, ... for which φ⁺ passes the discrete supersolution test.

    The test also requires C + inf_ε κ_ε > 0; A = 1.1·diam Ω.

    Raises:
        BarrierConstructionError: If sup|H| > inf_Γ H_cyl, or no C up to 2^20 passes
    """
    logger = logger or logging.getLogger('kgraph_toolkit.barriers.height')
    grid = grid or default_grid(model, domain, H)
    H_values = sample_curvature(grid, H)
    sup_H = float(np.max(np.abs(H_values)))
    h_cyl = cylinder_mean_curvature(model, domain)
    if sup_H > h_cyl + 1e-12:
        raise BarrierConstructionError(
            f"sup|H| = {sup_H:.6g} exceeds inf H_cyl = {h_cyl:.6g}; no height barrier of this form"
        )

    A = DIAMETER_FACTOR * domain.diameter
    kappa = min_flow_curvature(model, domain)
    C = 1.0
    while C <= MAX_EXPONENT:
        if C + kappa > 0:
            params = BarrierParams(C=C, A=A)
            residual = supersolution_residual(grid, height_barrier(model, domain, 0.0, params), H_values)
            if not np.all(np.isfinite(residual)):
                break
            if np.all(residual < 0):
                logger.info(f"Height barrier accepted with C = {C:g}, A = {A:.6g}")
                return params
        C *= 2.0

    raise BarrierConstructionError(
        f"No height-barrier exponent C <= 2^20 passes the supersolution test on {grid.describe()}"
    )


def verify_height(u: ScalarField, model: AmbientModel, domain: Domain, sup_phi: float,
                  inf_phi: float, params: BarrierParams, tol: float = 1e-8) -> HeightCheck:
    """
    Check inf_Γ φ − h(d) ≤ u ≤ sup_Γ φ + h(d) at every node.

    Returns:
        HeightCheck with the smallest slack as margin
    """
    grid = u.grid
    d = np.maximum(boundary_distance(domain, grid.A, grid.B), 0.0)
    h = barrier_height(d, params.C, params.A)
    upper_slack = sup_phi + h - u.values
    lower_slack = u.values - inf_phi + h
    slack = np.minimum(upper_slack, lower_slack)
    violations = int(np.count_nonzero(slack < -tol))
    return HeightCheck(passed=violations == 0, margin=float(np.min(slack)), violations=violations)


def sphere_barrier_radius(k: float, sup_H: float) -> float:
    """
    Largest r₀ for which the geodesic sphere of ℍ(−k) is a barrier.

    Returns ∞ when sup_H ≤ √k, otherwise arcoth(sup_H/√k)/√k.

    Raises:
        DomainError: If k <= 0
    """
    if k <= 0:
        raise DomainError(f"sphere_barrier_radius needs k > 0, got {k}")
    root = math.sqrt(k)
    ratio = abs(sup_H) / root
    if ratio <= 1.0:
        return math.inf
    return math.atanh(1.0 / ratio) / root
