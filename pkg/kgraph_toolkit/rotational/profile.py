"""
Rotationally invariant CMC hypersurfaces.

In a rotationally symmetric model ϱ²(r)ds² + dr² + ξ²(r)dθ², an invariant
hypersurface is generated by an arc-length profile u ↦ (s(u), r(u)) with
ϱ²ṡ² + ṙ² = 1. The flux through the slice {s = const} gives the first
integral

    nH₀ I(r) + ṡ ϱ²(r) ξ^{n−1}(r) = c̃,    I(r) = ∫₀^r ϱ ξ^{n−1},

and compact (sphere-like) profiles have c̃ = 0. They are integrated with the
angle φ between the profile and the leaf (ϱṡ = sin φ, ṙ = cos φ), for which
the first integral becomes

    φ′ = −nH₀ (1 − I g′/g²),   g = ϱ ξ^{n−1},

regular at the turning point φ = π/2.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from kgraph_toolkit.core.errors import DomainError, UnboundedProfileError
from kgraph_toolkit.geometry.functions import FunctionKind, ProfileFunction, constant, identity
from kgraph_toolkit.geometry.models import AmbientModel, LeafKind
from kgraph_toolkit.mce.grid import sphere_measure

logger = logging.getLogger('kgraph_toolkit.rotational.profile')

SERIES_RADIUS = 1e-3
QUAD_TOL = 1e-12


@dataclass(frozen=True)
class RotationalModel:
    """ξ, ϱ and the leaf dimension n of a rotationally symmetric model"""
    xi: ProfileFunction
    rho: ProfileFunction
    n: int = 2

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"Leaf dimension must be >= 2, got {self.n}")
        if abs(self.xi(0.0)) > 1e-12 or abs(self.xi.derivative(0.0) - 1.0) > 1e-12:
            raise DomainError("Rotational models need xi(0) = 0 and xi'(0) = 1")
        if self.rho(0.0) <= 0:
            raise DomainError("Rotational models need rho(0) > 0")

    @classmethod
    def euclidean(cls, n: int = 2) -> "RotationalModel":
        return cls(identity(), constant(1.0), n)

    @classmethod
    def from_ambient(cls, model: AmbientModel) -> "RotationalModel":
        """
        Raises:
            DomainError: If the leaf is not rotationally symmetric
        """
        if model.leaf.kind == LeafKind.CARTESIAN_FLAT:
            raise DomainError("The cartesian-flat leaf is not rotationally symmetric")
        return cls(model.leaf.xi, model.warp.rho, model.n)

    @property
    def omega(self) -> float:
        """|S^{n−1}|"""
        return sphere_measure(self.n)

    @property
    def r_range(self) -> float:
        """Largest radius where ξ stays positive"""
        if self.xi.kind == FunctionKind.SIN:
            return math.pi / math.sqrt(self.xi.k)
        return math.inf

    def density(self, r):
        """g = ϱ ξ^{n−1}"""
        return self.rho(r) * np.power(self.xi(r), self.n - 1)

    def density_derivative(self, r):
        xi = self.xi(r)
        return (self.rho.derivative(r) * xi ** (self.n - 1)
                + (self.n - 1) * self.rho(r) * xi ** (self.n - 2) * self.xi.derivative(r))


def _as_rotational(model) -> RotationalModel:
    if isinstance(model, RotationalModel):
        return model
    return RotationalModel.from_ambient(model)


def momentum_integral(model, r: float) -> float:
    """
    I(r) = ∫₀^r ϱ ξ^{n−1} by adaptive quadrature.

    Raises:
        DomainError: If r < 0
    """
    if r < 0:
        raise DomainError(f"momentum_integral needs r >= 0, got {r}")
    if r == 0:
        return 0.0
    rot = _as_rotational(model)
    value, _ = quad(lambda t: float(rot.density(t)), 0.0, float(r),
                    epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return value


def serrin_bound_F(model, r0: float) -> float:  # noqa: N802
    """
    F(r₀) = ϱ(r₀)ξ^{n−1}(r₀) / I(r₀).

    Raises:
        DomainError: If r0 <= 0
    """
    if r0 <= 0:
        raise DomainError(f"serrin_bound_F needs r0 > 0, got {r0}")
    rot = _as_rotational(model)
    return float(rot.density(r0)) / momentum_integral(rot, r0)


@dataclass(frozen=True, eq=False)
class ProfileCurve:
    """
    Sampled generating curve of an invariant CMC hypersurface.

    Samples run from the axis (r = 0) to the turning radius for a half
    profile, and back to the axis for a full sphere.
    """
    model: RotationalModel
    H0: float
    u: np.ndarray
    s: np.ndarray
    r: np.ndarray
    sdot: np.ndarray
    rdot: np.ndarray
    flux_constant: float = 0.0
    method: str = "angle"

    @property
    def turning_radius(self) -> float:
        return float(np.max(self.r))

    @property
    def turning_height(self) -> float:
        """s at the turning radius"""
        return float(self.s[int(np.argmax(self.r))])

    @property
    def height(self) -> float:
        return float(np.max(self.s) - np.min(self.s))

    def arc_length_residuals(self) -> np.ndarray:
        """ϱ²ṡ² + ṙ² − 1 per sample"""
        rho = self.model.rho(self.r)
        return rho ** 2 * self.sdot ** 2 + self.rdot ** 2 - 1.0

    def flux_residuals(self) -> np.ndarray:
        """nH₀I(r) + ṡϱ²ξ^{n−1} − c̃ per sample, with I by quadrature"""
        rot = self.model
        I = np.array([momentum_integral(rot, float(r)) for r in self.r])
        rho = rot.rho(self.r)
        xi = np.power(rot.xi(self.r), rot.n - 1)
        return rot.n * self.H0 * I + self.sdot * rho ** 2 * xi - self.flux_constant

    def turning_identity_residual(self) -> float:
        """|nH₀|·I(r_max) − ϱ(r_max)ξ^{n−1}(r_max)"""
        r_max = self.turning_radius
        return abs(self.model.n * self.H0) * momentum_integral(self.model, r_max) \
            - float(self.model.density(r_max))

    def full_sphere(self) -> "ProfileCurve":
        """Closed profile by reflection through the turning slice"""
        k = int(np.argmax(self.r))
        u_t, s_t = self.u[k], self.s[k]
        tail = slice(k - 1, None, -1)
        return replace(
            self,
            u=np.concatenate([self.u[:k + 1], 2.0 * u_t - self.u[tail]]),
            s=np.concatenate([self.s[:k + 1], 2.0 * s_t - self.s[tail]]),
            r=np.concatenate([self.r[:k + 1], self.r[tail]]),
            sdot=np.concatenate([self.sdot[:k + 1], self.sdot[tail]]),
            rdot=np.concatenate([self.rdot[:k + 1], -self.rdot[tail]]),
        )


def _series_start(rot: RotationalModel, H0: float, r_s: float):
    """State (u, s, r, φ, I) at r_s from the small-r expansion of a round sphere"""
    I_s = momentum_integral(rot, r_s)
    q = -rot.n * H0 * I_s / float(rot.density(r_s))
    phi_s = math.asin(min(q, 1.0))
    u_s = r_s + H0 ** 2 * r_s ** 3 / 6.0
    s_s = -H0 * r_s ** 2 / (2.0 * rot.rho(0.0))
    return u_s, s_s, r_s, phi_s, I_s


def _profile_by_angle(rot: RotationalModel, H0: float, samples: int, r_limit: float) -> ProfileCurve:
    n = rot.n

    def rhs(_, y):
        s, r, phi, I = y
        g = float(rot.density(r))
        dg = float(rot.density_derivative(r))
        return [math.sin(phi) / float(rot.rho(r)), math.cos(phi), -n * H0 * (1.0 - I * dg / g ** 2),
                g * math.cos(phi)]

    def turning(_, y):
        return y[2] - 0.5 * math.pi
    turning.terminal = True
    turning.direction = 1

    def escaping(_, y):
        return y[1] - r_limit
    escaping.terminal = True
    escaping.direction = 1

    u_s, s_s, r_s, phi_s, I_s = _series_start(rot, H0, SERIES_RADIUS)
    u_end = u_s + 4.0 * r_limit + 100.0 / max(abs(H0), 1e-12)
    sol = solve_ivp(rhs, (u_s, u_end), [s_s, r_s, phi_s, I_s], method="DOP853",
                    rtol=1e-10, atol=1e-12, events=[turning, escaping], dense_output=True)
    if sol.status == -1:
        raise RuntimeError(f"Profile integration failed: {sol.message}")
    if sol.t_events[0].size == 0:
        raise UnboundedProfileError(
            f"No turning radius below r = {r_limit:g} for H0 = {H0:g}; the profile is not compact"
        )

    u_turn = float(sol.t_events[0][0])
    u = np.linspace(u_s, u_turn, samples)
    s, r, phi, _ = sol.sol(u)
    phi[-1] = 0.5 * math.pi
    rho = rot.rho(r)
    return ProfileCurve(
        model=rot, H0=H0,
        u=np.concatenate([[0.0], u]),
        s=np.concatenate([[0.0], s]),
        r=np.concatenate([[0.0], r]),
        sdot=np.concatenate([[0.0], np.sin(phi) / rho]),
        rdot=np.concatenate([[1.0], np.cos(phi)]),
        method="angle",
    )


def _turning_radius(rot: RotationalModel, H0: float, r_limit: float) -> float:
    """Root of |nH₀|I(r) = g(r), bracketed on a geometric scan"""
    def gap(r: float) -> float:
        return abs(rot.n * H0) * momentum_integral(rot, r) - float(rot.density(r))

    grid = np.geomspace(SERIES_RADIUS, r_limit, 400)
    values = [gap(float(r)) for r in grid]
    for lo, hi, v_lo, v_hi in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if v_lo < 0 <= v_hi:
            return brentq(gap, float(lo), float(hi), xtol=1e-14, rtol=1e-14)
    raise UnboundedProfileError(
        f"No turning radius below r = {r_limit:g} for H0 = {H0:g}; the profile is not compact"
    )


def _profile_by_radius(rot: RotationalModel, H0: float, samples: int, r_limit: float) -> ProfileCurve:
    n = rot.n
    r_max = _turning_radius(rot, H0, r_limit)

    def sin_phi(r: float) -> float:
        return min(-n * H0 * momentum_integral(rot, r) / float(rot.density(r)), 1.0)

    def ds_dr(r: float) -> float:
        sp = sin_phi(r)
        return sp / (float(rot.rho(r)) * math.sqrt(max(1.0 - sp * sp, 1e-300)))

    def du_dr(r: float) -> float:
        sp = sin_phi(r)
        return 1.0 / math.sqrt(max(1.0 - sp * sp, 1e-300))

    # cluster samples towards the square-root singularity at r_max
    t = np.linspace(0.0, 1.0, samples + 1)
    r = r_max * (1.0 - (1.0 - t) ** 2)
    s = np.zeros_like(r)
    u = np.zeros_like(r)
    for k in range(1, r.size):
        a, b = float(r[k - 1]), float(r[k])
        s[k] = s[k - 1] + quad(ds_dr, a, b, epsabs=QUAD_TOL, limit=200)[0]
        u[k] = u[k - 1] + quad(du_dr, a, b, epsabs=QUAD_TOL, limit=200)[0]

    sp = np.array([0.0] + [sin_phi(float(x)) for x in r[1:]])
    sp[-1] = 1.0
    return ProfileCurve(
        model=rot, H0=H0, u=u, s=s, r=r,
        sdot=sp / rot.rho(r),
        rdot=np.sqrt(np.maximum(1.0 - sp ** 2, 0.0)),
        method="radius",
    )


def integrate_cmc_sphere(model, H0: float, samples: int = 400, r_limit: Optional[float] = None,
                         method: str = "angle") -> ProfileCurve:
    """
    Half profile of the compact CMC hypersurface with mean curvature H₀.

    Args:
        model: RotationalModel or AmbientModel with a polar leaf
        H0: Mean curvature; positive values are reflected (s ↦ −s)
        samples: Samples between the series start and the turning point
        r_limit: Radius beyond which the profile counts as unbounded
        method: 'angle' (ODE in arc length) or 'radius' (quadrature in r)

    Returns:
        ProfileCurve from the axis to the turning radius

    Raises:
        UnboundedProfileError: If no turning radius exists below r_limit
    """
    rot = _as_rotational(model)
    if H0 == 0:
        raise UnboundedProfileError("H0 = 0 has no compact rotational profile")
    limit = r_limit or min(0.999999 * rot.r_range, 100.0)
    H = -abs(H0)

    if method == "radius":
        curve = _profile_by_radius(rot, H, samples, limit)
    else:
        try:
            curve = _profile_by_angle(rot, H, samples, limit)
        except RuntimeError as e:
            logger.warning(f"{e}; switching to the radius parametrization")
            curve = _profile_by_radius(rot, H, samples, limit)

    logger.info(f"CMC profile H0 = {H0:g}: turning radius {curve.turning_radius:.12g} ({curve.method})")
    if H0 > 0:
        curve = replace(curve, H0=H0, s=-curve.s, sdot=-curve.sdot)
    return curve
