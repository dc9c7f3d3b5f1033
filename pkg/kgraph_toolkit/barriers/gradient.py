"""
Boundary-gradient barriers on a strip along Γ.

On Ω_ε = {d < ε} the functions φ_ext ± ψ(d) with ψ(d) = μ ln(1 + Kd) and
μ = C/ln(1 + K) bound a solution from above and below; ψ′(0) = μK then
bounds the normal derivative of u on Γ.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from kgraph_toolkit.core.errors import BarrierConstructionError
from kgraph_toolkit.core.models import GradientBarrierResult
from kgraph_toolkit.geometry.fields import FieldFunction
from kgraph_toolkit.geometry.models import AmbientModel, Domain, DomainShape
from kgraph_toolkit.geometry.operations import boundary_distance, cylinder_mean_curvature
from kgraph_toolkit.mce.equation import CurvatureInput, divergence_operator, sample_curvature
from kgraph_toolkit.mce.grid import Grid, ScalarField

MAX_K = 2.0 ** 30


def strip_width(domain: Domain) -> float:
    """ε = min(inradius/4, 0.1·diam Ω)"""
    return min(0.25 * domain.inradius, 0.1 * domain.diameter)


def log_barrier(d, C: float, K: float):
    """ψ(d) = μ ln(1 + Kd) with μ = C/ln(1 + K)"""
    mu = C / np.log1p(K)
    return mu * np.log1p(K * np.asarray(d, dtype=float))


@dataclass(frozen=True)
class ExtendedBoundaryData:
    """φ extended off Γ as constant along the normal geodesics"""
    domain: Domain
    phi: FieldFunction

    def __call__(self, a, b=0.0, polar: bool = True) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        domain = self.domain
        if domain.shape == DomainShape.DISC:
            return self.phi(np.full(np.broadcast(a, b).shape, domain.r0), b, polar=True)
        if domain.shape == DomainShape.ANNULUS:
            near_inner = (a - domain.r_in) <= (domain.r_out - a)
            return self.phi(np.where(near_inner, domain.r_in, domain.r_out), b, polar=True)

        x0, x1, y0, y1 = domain.bounds
        a, b = np.broadcast_arrays(a, b)
        gaps = np.stack([a - x0, x1 - a, b - y0, y1 - b])
        nearest = np.argmin(gaps, axis=0)
        x = np.select([nearest == 0, nearest == 1], [np.full(a.shape, x0), np.full(a.shape, x1)], a)
        y = np.select([nearest == 2, nearest == 3], [np.full(b.shape, y0), np.full(b.shape, y1)], b)
        return self.phi(x, y, polar=False)


@dataclass(frozen=True)
class GradientBarrier:
    """φ_ext + sign·ψ(min(d, cap)) evaluated like a closed-form field"""
    domain: Domain
    phi_ext: ExtendedBoundaryData
    C: float
    K: float
    sign: float = 1.0
    cap: float = np.inf

    def __call__(self, a, b=0.0, polar: bool = True) -> np.ndarray:
        d = np.clip(boundary_distance(self.domain, a, b), 0.0, self.cap)
        return self.phi_ext(a, b, polar) + self.sign * log_barrier(d, self.C, self.K)


def _search_K(grid: Grid, phi_ext: ExtendedBoundaryData, C: float, eps: float, sign: float,
              nH: np.ndarray, u: Optional[ScalarField]) -> float:
    domain = grid.domain
    d_nodes = boundary_distance(domain, grid.A, grid.B)
    strip = d_nodes[grid.interior] < eps
    # the strip and the first layer of nodes beyond its inner edge
    band = d_nodes <= eps + grid.spacing
    K = 1.0
    while K <= MAX_K:
        barrier = GradientBarrier(domain, phi_ext, C, K, sign)
        Q = divergence_operator(grid, grid.sample(barrier))[strip] - nH[strip]
        contains = True
        if u is not None:
            capped = grid.sample(GradientBarrier(domain, phi_ext, C, K, sign, cap=eps))
            contains = bool(np.all(sign * (capped - u.values)[band] >= -1e-10))
        if np.all(sign * Q < 0) and contains:
            return K
        K *= 2.0
    raise BarrierConstructionError(
        f"No K <= 2^30 gives a {'upper' if sign > 0 else 'lower'} boundary-gradient barrier "
        f"on {grid.describe()}"
    )


def boundary_gradient_barrier(model: AmbientModel, domain: Domain, phi: FieldFunction,
                              H: CurvatureInput, grid: Grid, u: Optional[ScalarField] = None,
                              C: Optional[float] = None,
                              logger: Optional[logging.Logger] = None) -> GradientBarrierResult:
    """
    Build the two-sided boundary-gradient barrier and the gradient bound it gives.

    Args:
        model: Ambient model
        domain: Domain
        phi: Boundary data, extended constant along normals
        H: Prescribed mean curvature
        grid: Grid for the discrete sub/supersolution tests
        u: Converged solution; enables the containment test and the realized bound
        C: Barrier scale, ψ(1) = C; defaults to twice the oscillation of u − φ_ext
            (at least 1e-3)

    Returns:
        GradientBarrierResult for the larger of the two accepted slopes

    Raises:
        BarrierConstructionError: If H_cyl ± H < 0 somewhere on Γ or no K up to 2^30 works
    """
    logger = logger or logging.getLogger('kgraph_toolkit.barriers.gradient')
    h_cyl = cylinder_mean_curvature(model, domain)
    H_values = sample_curvature(grid, H)
    H_boundary = H_values[grid.boundary]
    if h_cyl + float(np.min(H_boundary)) < -1e-12 or h_cyl - float(np.max(H_boundary)) < -1e-12:
        raise BarrierConstructionError(
            f"Boundary condition H_cyl ± H >= 0 fails (H_cyl = {h_cyl:.6g}, "
            f"H on Γ in [{np.min(H_boundary):.6g}, {np.max(H_boundary):.6g}])"
        )

    phi_ext = ExtendedBoundaryData(domain, phi)
    ext_values = grid.sample(phi_ext)
    if C is None:
        oscillation = float(np.max(np.abs(u.values - ext_values))) if u is not None else 0.0
        C = max(2.0 * oscillation, 1e-3)
    eps = strip_width(domain)
    nH = grid.n * H_values[grid.interior]

    K_upper = _search_K(grid, phi_ext, C, eps, 1.0, nH, u)
    K_lower = _search_K(grid, phi_ext, C, eps, -1.0, nH, u)
    K = max(K_upper, K_lower)
    mu = C / float(np.log1p(K))
    logger.info(f"Boundary-gradient barrier accepted: C = {C:.6g}, K = {K:g}, eps = {eps:.6g}")

    grad_phi = grid.gradient_norm(ext_values)
    return GradientBarrierResult(
        C=C,
        K=K,
        mu=mu,
        eps=eps,
        psi_prime_0=mu * K,
        boundary_gradient=grid.boundary_gradient(u.values) if u is not None else float('nan'),
        data_gradient=float(np.max(grad_phi[grid.boundary])),
    )
