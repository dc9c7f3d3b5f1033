"""
Ambient warped-product model M = ℙ ×_ϱ ℝ and leaf domains.

All types are immutable after construction. Leaf charts are either polar
(r, θ) around a pole, with metric dr² + ξ(r)²dθ², or the flat cartesian
chart (x, y). The Killing norm ϱ depends on the primary coordinate only:
r on polar charts, x on the cartesian chart.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from kgraph_toolkit.core.errors import DomainError
from kgraph_toolkit.geometry.fields import FieldFunction, zero_field
from kgraph_toolkit.geometry.functions import FunctionKind, ProfileFunction, constant, identity


class LeafKind(str, Enum):
    """Supported leaf charts"""
    EUCLIDEAN_POLAR = "euclidean-polar"
    ROTSYM = "rotsym"
    CARTESIAN_FLAT = "cartesian-flat"

    def __str__(self):
        return self.value


class DomainShape(str, Enum):
    """Supported domain shapes"""
    DISC = "disc"
    ANNULUS = "annulus"
    RECTANGLE = "rectangle"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class LeafMetric:
    """Leaf ℙ of dimension n with metric dr² + ξ²(r)dθ² or the flat metric"""
    kind: LeafKind
    n: int = 2
    xi: ProfileFunction = field(default_factory=identity)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"Leaf dimension must be >= 2, got {self.n}")

        if self.kind == LeafKind.EUCLIDEAN_POLAR:
            object.__setattr__(self, 'xi', identity())
        elif self.kind == LeafKind.CARTESIAN_FLAT:
            object.__setattr__(self, 'xi', constant(1.0))
        else:
            xi0, dxi0 = self.xi(0.0), self.xi.derivative(0.0)
            if abs(xi0) > 1e-12 or abs(dxi0 - 1.0) > 1e-12:
                raise ValueError(
                    f"Rotationally symmetric leaf needs xi(0) = 0 and xi'(0) = 1 "
                    f"(got {xi0:g}, {dxi0:g})"
                )

    @property
    def is_polar(self) -> bool:
        return self.kind != LeafKind.CARTESIAN_FLAT

    def xi_at(self, a, order: int = 0):
        """ξ or its derivatives at the primary coordinate (ξ ≡ 1 on the cartesian chart)"""
        return self.xi.derivative(a, order)


@dataclass(frozen=True)
class WarpingFunction:
    """Killing norm ϱ = |Y| and the derived f = ϱ⁻²"""
    rho: ProfileFunction = field(default_factory=lambda: constant(1.0))

    def value(self, t):
        return self.rho(t)

    def derivative(self, t, order: int = 1):
        return self.rho.derivative(t, order)

    def f(self, t):
        return 1.0 / np.square(self.rho(t))

    @property
    def is_constant(self) -> bool:
        return self.rho.kind == FunctionKind.CONSTANT


@dataclass(frozen=True)
class AmbientModel:
    """Geometry of M = ℙ ×_ϱ ℝ with metric σ + ϱ²ds²"""
    leaf: LeafMetric
    warp: WarpingFunction = field(default_factory=WarpingFunction)

    @property
    def n(self) -> int:
        return self.leaf.n

    def describe(self) -> str:
        return (f"{self.leaf.kind}(n={self.n}, xi={self.leaf.xi.describe()}), "
                f"rho={self.warp.rho.describe()}")

    def check_on(self, domain: "Domain", samples: int = 257) -> None:
        """
        Check chart compatibility and positivity of ξ and ϱ over the domain.

        Raises:
            DomainError: On any violation
        """
        if self.leaf.is_polar != domain.is_polar:
            raise DomainError(
                f"Domain '{domain.shape}' does not live on a {self.leaf.kind} leaf"
            )
        lo, hi = domain.primary_range
        t = np.linspace(lo, hi, samples)
        rho = np.atleast_1d(self.warp.value(t))
        if not np.all(np.isfinite(rho)) or np.any(rho <= 0):
            raise DomainError("Warping function rho must be positive on the domain")
        if self.leaf.is_polar:
            xi = np.atleast_1d(self.leaf.xi_at(t[t > 0]))
            if np.any(xi <= 0):
                raise DomainError("xi must be positive for r > 0 on the domain")


@dataclass(frozen=True)
class Domain:
    """
    Bounded domain Ω ⊂ ℙ with boundary data φ.

    Discs and annuli are centered at the pole of a polar chart; rectangles
    are axis-aligned in the cartesian chart.
    """
    shape: DomainShape
    r0: float = 1.0
    r_in: float = 0.0
    r_out: float = 0.0
    bounds: Tuple[float, float, float, float] = (0.0, 1.0, 0.0, 1.0)
    phi: FieldFunction = field(default_factory=zero_field)

    def __post_init__(self):
        if self.shape == DomainShape.DISC and self.r0 <= 0:
            raise ValueError(f"Disc radius must be positive, got {self.r0}")
        if self.shape == DomainShape.ANNULUS and not (0 < self.r_in < self.r_out):
            raise ValueError(f"Annulus needs 0 < r_in < r_out, got ({self.r_in}, {self.r_out})")
        if self.shape == DomainShape.RECTANGLE:
            x0, x1, y0, y1 = self.bounds
            if not (x0 < x1 and y0 < y1):
                raise ValueError(f"Rectangle bounds must be increasing, got {self.bounds}")

    @classmethod
    def disc(cls, r0: float, phi: Optional[FieldFunction] = None) -> "Domain":
        return cls(DomainShape.DISC, r0=r0, phi=phi or zero_field())

    @classmethod
    def annulus(cls, r_in: float, r_out: float, phi: Optional[FieldFunction] = None) -> "Domain":
        return cls(DomainShape.ANNULUS, r_in=r_in, r_out=r_out, phi=phi or zero_field())

    @classmethod
    def rectangle(cls, x_min: float, x_max: float, y_min: float, y_max: float,
                  phi: Optional[FieldFunction] = None) -> "Domain":
        return cls(DomainShape.RECTANGLE, bounds=(x_min, x_max, y_min, y_max),
                   phi=phi or zero_field())

    def with_phi(self, phi: FieldFunction) -> "Domain":
        return Domain(self.shape, self.r0, self.r_in, self.r_out, self.bounds, phi)

    @property
    def is_polar(self) -> bool:
        return self.shape != DomainShape.RECTANGLE

    @property
    def primary_range(self) -> Tuple[float, float]:
        """Range of r (polar) or x (cartesian) covered by the closure"""
        if self.shape == DomainShape.DISC:
            return 0.0, self.r0
        if self.shape == DomainShape.ANNULUS:
            return self.r_in, self.r_out
        return self.bounds[0], self.bounds[1]

    @property
    def inradius(self) -> float:
        if self.shape == DomainShape.DISC:
            return self.r0
        if self.shape == DomainShape.ANNULUS:
            return 0.5 * (self.r_out - self.r_in)
        x0, x1, y0, y1 = self.bounds
        return 0.5 * min(x1 - x0, y1 - y0)

    @property
    def diameter(self) -> float:
        if self.shape == DomainShape.DISC:
            return 2.0 * self.r0
        if self.shape == DomainShape.ANNULUS:
            return 2.0 * self.r_out
        x0, x1, y0, y1 = self.bounds
        return float(np.hypot(x1 - x0, y1 - y0))

    @property
    def enclosing_radius(self) -> float:
        """Radius of the geodesic disc about the pole (or rectangle center) containing Ω"""
        if self.shape == DomainShape.DISC:
            return self.r0
        if self.shape == DomainShape.ANNULUS:
            return self.r_out
        return 0.5 * self.diameter

    def describe(self) -> str:
        if self.shape == DomainShape.DISC:
            return f"disc(r0={self.r0:g})"
        if self.shape == DomainShape.ANNULUS:
            return f"annulus({self.r_in:g}, {self.r_out:g})"
        return "rectangle({:g}, {:g}, {:g}, {:g})".format(*self.bounds)
