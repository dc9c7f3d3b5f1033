"""
Leaf-intrinsic and cylinder-extrinsic quantities of the ambient model.

Sign convention: η is the inward unit normal of Γ in ℙ; h_ε, κ_ε and
H_cyl(ε) are all taken with respect to it.
"""

import logging
from typing import Dict, Sequence, Tuple

import numpy as np

from kgraph_toolkit.core.errors import DomainError
from kgraph_toolkit.geometry.models import AmbientModel, Domain, DomainShape

logger = logging.getLogger('kgraph_toolkit.geometry.operations')

LeafPoint = Sequence[float]

_BOUNDARY_TOL = 1e-9


def drift_field(model: AmbientModel, p: LeafPoint) -> np.ndarray:
    """
    Drift field X = f∇̄_{∂s}∂s = ∇f/(2f) = −∇ln ϱ at a leaf point.

    Args:
        model: Ambient model
        p: Chart coordinates (r, θ) or (x, y)

    Returns:
        Components of X in the orthonormal frame (e_r, e_θ) or (e_x, e_y)
    """
    t = float(p[0])
    x_a = -model.warp.derivative(t) / model.warp.value(t)
    return np.array([x_a, 0.0])


def boundary_distance(domain: Domain, a, b=0.0) -> np.ndarray:
    """Vectorized distance to Γ along the leaf (no range checks)"""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if domain.shape == DomainShape.DISC:
        return domain.r0 - a + 0.0 * b
    if domain.shape == DomainShape.ANNULUS:
        return np.minimum(a - domain.r_in, domain.r_out - a) + 0.0 * b
    x0, x1, y0, y1 = domain.bounds
    return np.minimum(np.minimum(a - x0, x1 - a), np.minimum(b - y0, y1 - b))


def distance_to_boundary(domain: Domain, p: LeafPoint) -> float:
    """
    Distance d = dist(p, Γ) measured in the leaf.

    Raises:
        DomainError: If p lies outside the closure of Ω
    """
    a = float(p[0])
    b = float(p[1]) if len(p) > 1 else 0.0
    if domain.is_polar and a < -_BOUNDARY_TOL:
        raise DomainError(f"Polar radius must be non-negative, got {a}")
    d = float(boundary_distance(domain, a, b))
    if d < -_BOUNDARY_TOL:
        raise DomainError(f"Point {tuple(p)} lies outside {domain.describe()}")
    return max(d, 0.0)


def _inward_normal(domain: Domain, p: LeafPoint) -> Tuple[int, float]:
    """Inward normal at a boundary point as (axis, sign) in the chart frame"""
    a = float(p[0])
    b = float(p[1]) if len(p) > 1 else 0.0
    if domain.shape == DomainShape.DISC:
        return 0, -1.0
    if domain.shape == DomainShape.ANNULUS:
        return (0, 1.0) if abs(a - domain.r_in) <= abs(domain.r_out - a) else (0, -1.0)
    x0, x1, y0, y1 = domain.bounds
    gaps = [(a - x0, (0, 1.0)), (x1 - a, (0, -1.0)), (b - y0, (1, 1.0)), (y1 - b, (1, -1.0))]
    return min(gaps, key=lambda item: item[0])[1]


def _check_eps(domain: Domain, eps: float) -> None:
    if eps < 0:
        raise DomainError(f"Distance eps must be non-negative, got {eps}")
    if eps >= domain.inradius:
        raise DomainError(
            f"eps = {eps:g} reaches the inradius {domain.inradius:g} of {domain.describe()}"
        )


def flow_line_curvature(model: AmbientModel, domain: Domain, p: LeafPoint,
                        eps: float = 0.0) -> float:
    """
    Curvature κ_ε = ⟨X, η_ε⟩ of the Killing flow lines over Γ_ε.

    Args:
        model: Ambient model
        domain: Domain whose boundary contains p
        p: Point of Γ
        eps: Distance of the equidistant Γ_ε from Γ

    Raises:
        DomainError: If p is not on Γ or eps reaches the inradius
    """
    _check_eps(domain, eps)
    if distance_to_boundary(domain, p) > _BOUNDARY_TOL:
        raise DomainError(f"Point {tuple(p)} is not on the boundary of {domain.describe()}")

    axis, sign = _inward_normal(domain, p)
    q = [float(c) for c in p] + [0.0] * (2 - len(p))
    q[axis] += sign * eps
    return float(sign * drift_field(model, q)[axis])


def cylinder_curvature_components(model: AmbientModel, domain: Domain,
                                  eps: float = 0.0) -> Dict[str, float]:
    """
    H_cyl(ε) = ((n−1)h_ε + κ_ε)/n on each boundary component of Γ_ε.

    Returns:
        Mapping component name -> H_cyl(ε)
    """
    _check_eps(domain, eps)
    n = model.n
    xi = model.leaf.xi_at
    rho = model.warp

    def polar_ring(r: float, sign: float) -> float:
        h = sign * xi(r, 1) / xi(r)
        kappa = sign * rho.derivative(r) / rho.value(r)
        return ((n - 1) * h + kappa) / n

    if domain.shape == DomainShape.DISC:
        return {'outer': polar_ring(domain.r0 - eps, 1.0)}
    if domain.shape == DomainShape.ANNULUS:
        return {
            'outer': polar_ring(domain.r_out - eps, 1.0),
            'inner': polar_ring(domain.r_in + eps, -1.0),
        }

    x0, x1, _, _ = domain.bounds
    return {
        'x_min': float(-rho.derivative(x0 + eps) / rho.value(x0 + eps)) / n,
        'x_max': float(rho.derivative(x1 - eps) / rho.value(x1 - eps)) / n,
        'y_min': 0.0,
        'y_max': 0.0,
    }


def cylinder_mean_curvature(model: AmbientModel, domain: Domain, eps: float = 0.0) -> float:
    """
    Inward mean curvature of the equidistant Killing cylinder K_ε, minimized over Γ_ε.

    Raises:
        DomainError: If eps reaches the inradius
    """
    return float(min(cylinder_curvature_components(model, domain, eps).values()))


def ricci_lower_bound(model: AmbientModel, domain: Domain, samples: int = 64) -> float:
    """
    Lower bound of Ric_M over sampled points of the solid cylinder and unit directions.

    Uses the warped-product identities Ric(X, X) = Ric_ℙ(X, X) − Hess ϱ(X, X)/ϱ on
    horizontal vectors and Ric(V, V) = −Δ_ℙϱ/ϱ on the unit vertical vector, with
    no mixed terms. On the supported charts the horizontal tensor is diagonal in
    the coordinate frame, so the minimum over unit directions is the smallest
    diagonal entry. All quantities depend on the primary coordinate only, so the
    angular (or y) samples of the tensor grid collapse onto one column.
    """
    lo, hi = domain.primary_range
    t = lo + (np.arange(samples) + 0.5) * (hi - lo) / samples
    n = model.n
    rho = np.asarray(model.warp.value(t), dtype=float)
    drho = np.asarray(model.warp.derivative(t, 1), dtype=float)
    ddrho = np.asarray(model.warp.derivative(t, 2), dtype=float)

    if model.leaf.is_polar:
        xi = np.asarray(model.leaf.xi_at(t), dtype=float)
        dxi = np.asarray(model.leaf.xi_at(t, 1), dtype=float)
        ddxi = np.asarray(model.leaf.xi_at(t, 2), dtype=float)
        ric_radial = -(n - 1) * ddxi / xi
        ric_tangential = -ddxi / xi + (n - 2) * (1.0 - dxi ** 2) / xi ** 2
        horizontal = [ric_radial - ddrho / rho, ric_tangential - drho * dxi / (xi * rho)]
        vertical = -(ddrho + (n - 1) * dxi / xi * drho) / rho
    else:
        horizontal = [-ddrho / rho, np.zeros_like(t)]
        vertical = -ddrho / rho

    bound = float(min(np.min(h) for h in horizontal + [vertical]))
    logger.debug(f"Ricci lower bound over {samples} samples: {bound:.6g}")
    return bound + 0.0
