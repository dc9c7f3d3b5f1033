"""
Discrete Killing-graph mean curvature operator.

The equation div(∇u/W) − ⟨∇u/W, X⟩ − nH = 0 with W² = f + |∇u|² and drift
X = −∇ln ϱ is discretized in the conservative form

    (1/ϱ) div(ϱ ∇u / W) − nH = 0

with face-centered fluxes on the grid's ϱ-weighted control volumes. The
expanded quasilinear form a^{ij}u_{i;j} + b − nH is provided alongside, both
as a nodal finite-difference residual and as the closed-form oracle used to
manufacture H from a known solution.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np

from kgraph_toolkit.core.errors import DomainError
from kgraph_toolkit.geometry.fields import FieldFunction
from kgraph_toolkit.geometry.models import AmbientModel
from kgraph_toolkit.mce.grid import Grid, ScalarField

logger = logging.getLogger('kgraph_toolkit.mce.equation')

CurvatureInput = Union[float, np.ndarray, ScalarField, FieldFunction, Callable]


def _check_model(model: Optional[AmbientModel], grid: Grid) -> None:
    if model is not None and model != grid.model:
        raise DomainError(f"Grid {grid.describe()} was built for a different ambient model")


def sample_curvature(grid: Grid, H: CurvatureInput) -> np.ndarray:
    """Values of the prescribed mean curvature at every node"""
    if isinstance(H, ScalarField):
        return np.asarray(H.values, dtype=float)
    if isinstance(H, (int, float)):
        return np.full(grid.size, float(H))
    if isinstance(H, np.ndarray):
        if H.size != grid.size:
            raise DomainError(f"H has {H.size} values for {grid.size} nodes")
        return H.astype(float).ravel()
    return grid.sample(H)


# ----------------------------------------------------------------------
# Conservative form
# ----------------------------------------------------------------------

def _face_slopes(grid: Grid, u: np.ndarray):
    """Normal and tangential difference quotients on the faces of the interior cells"""
    nb = grid.neighbours
    uC = u[grid.interior]
    uE, uW = u[nb['E']], u[nb['W']]
    sE = (uE - uC) / grid.da
    sW = (uC - uW) / grid.da
    if not grid.two_dimensional:
        return sE, sW, 0.0, 0.0, None
    uN, uS = u[nb['N']], u[nb['S']]
    uNE, uNW, uSE, uSW = u[nb['NE']], u[nb['NW']], u[nb['SE']], u[nb['SW']]
    tE = (uN - uS + uNE - uSE) / (4.0 * grid.db * grid.xi_east)
    tW = (uN - uS + uNW - uSW) / (4.0 * grid.db * grid.xi_west)
    sN = (uN - uC) / (grid.db * grid.xi_center)
    sS = (uC - uS) / (grid.db * grid.xi_center)
    rN = (uE - uW + uNE - uNW) / (4.0 * grid.da)
    rS = (uE - uW + uSE - uSW) / (4.0 * grid.da)
    return sE, sW, tE, tW, (sN, sS, rN, rS)


def divergence_operator(grid: Grid, values: np.ndarray,
                        frozen: Optional[np.ndarray] = None) -> np.ndarray:
    """
    (1/ϱ) div(ϱ∇u/W) at the interior nodes, from face fluxes.

    With `frozen`, W on every face is taken from that field instead of u, which
    makes the operator linear in u (the lagged-coefficient form).
    """
    u = np.asarray(values, dtype=float)
    sE, sW, tE, tW, ns = _face_slopes(grid, u)
    if frozen is None:
        cE, cW, ctE, ctW, cns = sE, sW, tE, tW, ns
    else:
        cE, cW, ctE, ctW, cns = _face_slopes(grid, np.asarray(frozen, dtype=float))

    if ns is not None:
        sN, sS, _, _ = ns
        cN, cS, crN, crS = cns
        flux_n = grid.w_north * sN / np.sqrt(grid.f_center + cN ** 2 + crN ** 2)
        flux_s = grid.w_north * sS / np.sqrt(grid.f_center + cS ** 2 + crS ** 2)
    else:
        flux_n = flux_s = 0.0

    flux_e = grid.w_east * sE / np.sqrt(grid.f_east + cE ** 2 + ctE ** 2)
    flux_w = grid.w_west * sW / np.sqrt(grid.f_west + cW ** 2 + ctW ** 2)
    return (flux_e - flux_w + flux_n - flux_s) / grid.volumes


def _as_full(grid: Grid, interior: np.ndarray) -> np.ndarray:
    full = np.zeros(grid.size)
    full[grid.interior] = interior
    return full


def residual(model: Optional[AmbientModel], u: ScalarField, H: CurvatureInput) -> ScalarField:
    """
    Conservative residual Q[u] = (1/ϱ)div(ϱ∇u/W) − nH.

    Returns:
        ScalarField tagged 'residual', zero on boundary nodes
    """
    grid = u.grid
    _check_model(model, grid)
    nH = grid.n * sample_curvature(grid, H)[grid.interior]
    return ScalarField(grid, _as_full(grid, divergence_operator(grid, u.values) - nH), "residual")


# ----------------------------------------------------------------------
# Expanded form
# ----------------------------------------------------------------------

def mean_curvature_operator(model: AmbientModel, a, u_a, u_b, u_aa, u_ab, u_bb) -> np.ndarray:
    """
    a^{ij}u_{i;j} + b from chart derivatives of u.

    Derivatives are coordinate derivatives in (r, θ) or (x, y). The Hessian
    is assembled in the orthonormal frame (e_a, e_b/ξ); for n > 2 the radial
    formula is used and u_b, u_ab, u_bb must vanish.
    """
    n = model.n
    a = np.asarray(a, dtype=float)
    xi = model.leaf.xi_at(a)
    k = model.leaf.xi_at(a, 1) / xi
    rho = model.warp.value(a)
    f = 1.0 / rho ** 2

    p1 = u_a
    p2 = u_b / xi
    h11 = u_aa
    h12 = (u_ab - k * u_b) / xi
    h22 = u_bb / xi ** 2 + k * u_a
    laplacian = h11 + h22 + (n - 2) * k * u_a

    W2 = f + p1 ** 2 + p2 ** 2
    W = np.sqrt(W2)
    hess_grad = p1 ** 2 * h11 + 2.0 * p1 * p2 * h12 + p2 ** 2 * h22
    drift = -(model.warp.derivative(a) / rho) * p1
    return (laplacian - hess_grad / W2) / W - (f + W2) * drift / (W2 * W)


def expanded_residual(model: Optional[AmbientModel], u: ScalarField,
                      H: CurvatureInput) -> ScalarField:
    """Direct central-difference discretization of a^{ij}u_{i;j} + b − nH"""
    grid = u.grid
    _check_model(model, grid)
    v = u.values
    nb = grid.neighbours
    uC, uE, uW = v[grid.interior], v[nb['E']], v[nb['W']]
    u_a = (uE - uW) / (2.0 * grid.da)
    u_aa = (uE - 2.0 * uC + uW) / grid.da ** 2
    if grid.two_dimensional:
        uN, uS = v[nb['N']], v[nb['S']]
        u_b = (uN - uS) / (2.0 * grid.db)
        u_bb = (uN - 2.0 * uC + uS) / grid.db ** 2
        u_ab = (v[nb['NE']] - v[nb['NW']] - v[nb['SE']] + v[nb['SW']]) / (4.0 * grid.da * grid.db)
    else:
        u_b = u_bb = u_ab = np.zeros_like(uC)

    a = grid.A[grid.interior]
    op = mean_curvature_operator(grid.model, a, u_a, u_b, u_aa, u_ab, u_bb)
    nH = grid.n * sample_curvature(grid, H)[grid.interior]
    return ScalarField(grid, _as_full(grid, op - nH), "residual")


# 4th-order central stencils
_D1 = {-2: 1.0 / 12.0, -1: -8.0 / 12.0, 1: 8.0 / 12.0, 2: -1.0 / 12.0}
_D2 = {-2: -1.0 / 12.0, -1: 16.0 / 12.0, 0: -30.0 / 12.0, 1: 16.0 / 12.0, 2: -1.0 / 12.0}


@dataclass(frozen=True)
class ManufacturedCurvature:
    """
    The H that makes a closed-form field an exact solution.

    Chart derivatives of the field are taken with fourth-order central
    differences of step `step` (shrunk near the pole of polar charts so the
    stencil never crosses r = 0). Instances evaluate like any closed-form
    field: H(a, b, polar=...).
    """
    model: AmbientModel
    solution: FieldFunction
    step: float = 1e-3

    def __call__(self, a, b=0.0, polar: bool = True) -> np.ndarray:
        polar_chart = self.model.leaf.is_polar
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        a, b = np.broadcast_arrays(a, b)
        if polar_chart:
            ha = np.where(a > 0, np.minimum(self.step, 0.25 * np.abs(a)), self.step)
        else:
            ha = np.full(a.shape, self.step)
        hb = self.step

        def u(da: int, db: int) -> np.ndarray:
            return np.asarray(self.solution(a + da * ha, b + db * hb, polar=polar_chart), dtype=float)

        u_a = sum(c * u(k, 0) for k, c in _D1.items()) / ha
        u_aa = sum(c * u(k, 0) for k, c in _D2.items()) / ha ** 2
        if self.solution.is_radial or self.model.n > 2:
            zeros = np.zeros_like(u_a)
            u_b = u_bb = u_ab = zeros
        else:
            u_b = sum(c * u(0, k) for k, c in _D1.items()) / hb
            u_bb = sum(c * u(0, k) for k, c in _D2.items()) / hb ** 2
            u_ab = sum(
                ck * cl * u(k, l) for k, ck in _D1.items() for l, cl in _D1.items()
            ) / (ha * hb)

        return mean_curvature_operator(self.model, a, u_a, u_b, u_aa, u_ab, u_bb) / self.model.n

    @property
    def is_radial(self) -> bool:
        return self.solution.is_radial

    def describe(self) -> str:
        return f"manufactured({self.solution.describe()})"


def manufactured_H(model: AmbientModel, u: FieldFunction) -> ManufacturedCurvature:  # noqa: N802
    """Closed-form H for which u solves the equation exactly"""
    return ManufacturedCurvature(model, u)


# ----------------------------------------------------------------------
# Pointwise geometry of the graph
# ----------------------------------------------------------------------

def slope_function(model: Optional[AmbientModel], u: ScalarField) -> ScalarField:
    """W = √(f + |∇u|²) at every node"""
    grid = u.grid
    _check_model(model, grid)
    ga, gb = grid.gradient(u.values)
    return ScalarField(grid, np.sqrt(grid.f(grid.A) + ga ** 2 + gb ** 2), "W")


@dataclass(frozen=True, eq=False)
class Coefficients:
    """
    Per-node coefficients of the quasilinear form.

    `a` is the scalar radial coefficient on radial grids and a (N, 2, 2)
    array of orthonormal-frame matrices otherwise.
    """
    W: np.ndarray
    a: np.ndarray
    b: np.ndarray
    lam: np.ndarray
    Lam: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        if self.a.ndim == 1:
            return self.a[:, None]
        return np.linalg.eigvalsh(self.a)

    def is_elliptic(self, tol: float = 1e-12) -> bool:
        """Eigenvalues of a^{ij} within [λ, Λ] at every node"""
        eig = self.eigenvalues()
        return bool(np.all(eig >= self.lam[:, None] - tol) and np.all(eig <= self.Lam[:, None] + tol))


def coefficients(model: Optional[AmbientModel], u: ScalarField) -> Coefficients:
    """a^{ij} = (σ^{ij} − u^i u^j/W²)/W, b = −(f + W²)⟨∇u, X⟩/W³ and the ellipticity bounds"""
    grid = u.grid
    _check_model(model, grid)
    ga, gb = grid.gradient(u.values)
    f = grid.f(grid.A) + 0.0 * grid.A
    W2 = f + ga ** 2 + gb ** 2
    W = np.sqrt(W2)

    if grid.two_dimensional:
        p = np.stack([ga, gb], axis=1)
        a = (np.eye(2)[None, :, :] - p[:, :, None] * p[:, None, :] / W2[:, None, None]) / W[:, None, None]
    else:
        a = (1.0 - ga ** 2 / W2) / W

    drift = -(grid.model.warp.derivative(grid.A) / grid.rho(grid.A)) * ga
    b = -(f + W2) * drift / (W2 * W)
    return Coefficients(W=W, a=a, b=b, lam=f / (W2 * W), Lam=1.0 / W)


@dataclass(frozen=True)
class UnitNormal:
    """
    N = (1/W)(f∂s − ∇u) split into its ∂s coefficient and leaf components.

    `support` is ⟨Y, N⟩ with Y = ∂s.
    """
    vertical: float
    leaf: Tuple[float, float]
    rho: float

    @property
    def support(self) -> float:
        return self.rho ** 2 * self.vertical

    @property
    def norm_squared(self) -> float:
        return self.rho ** 2 * self.vertical ** 2 + self.leaf[0] ** 2 + self.leaf[1] ** 2


def _node(grid: Grid, p) -> int:
    if isinstance(p, (tuple, list)):
        return grid.index(*p)
    return int(p)


def unit_normal(model: Optional[AmbientModel], u: ScalarField, p) -> UnitNormal:
    """
    Unit normal of the Killing graph over a node.

    Args:
        model: Ambient model (or None to use the grid's)
        u: Graph function
        p: Node as a flat index or (i, j)
    """
    grid = u.grid
    _check_model(model, grid)
    k = _node(grid, p)
    ga, gb = grid.gradient(u.values)
    a = grid.A[k]
    rho = float(grid.rho(a))
    f = 1.0 / rho ** 2
    W = float(np.sqrt(f + ga[k] ** 2 + gb[k] ** 2))
    return UnitNormal(vertical=f / W, leaf=(float(-ga[k] / W), float(-gb[k] / W)), rho=rho)


def support_function(u: ScalarField) -> ScalarField:
    """⟨Y, N⟩ at every node"""
    grid = u.grid
    ga, gb = grid.gradient(u.values)
    rho = grid.rho(grid.A) + 0.0 * grid.A
    f = 1.0 / rho ** 2
    W = np.sqrt(f + ga ** 2 + gb ** 2)
    return ScalarField(grid, rho ** 2 * f / W, "support")


@dataclass(frozen=True)
class GradientDiagnostic:
    """τ = e^{2Cu}|∇u|² with its maximum"""
    tau: ScalarField
    argmax: Tuple[float, float]
    max_tau: float
    max_gradient: float


def gradient_diagnostic(u: ScalarField, C: float) -> GradientDiagnostic:
    """
    Evaluate τ = e^{2Cu}|∇u|² per node and locate its maximum.

    Raises:
        DomainError: If C is not positive
    """
    if C <= 0:
        raise DomainError(f"gradient_diagnostic needs C > 0, got {C}")
    grid = u.grid
    grad = grid.gradient_norm(u.values)
    tau = np.exp(2.0 * C * u.values) * grad ** 2
    k = int(np.argmax(tau))
    logger.debug(f"max tau = {tau[k]:.6g} at node {k}")
    return GradientDiagnostic(
        tau=ScalarField(grid, tau, "tau"),
        argmax=(float(grid.A[k]), float(grid.B[k])),
        max_tau=float(tau[k]),
        max_gradient=float(np.max(grad)),
    )
