"""
Closed-form scalar fields on a leaf chart.

Used for boundary data φ, prescribed mean curvature H and manufactured
solutions. A field is evaluated on chart coordinates (a, b): (r, θ) on polar
charts and (x, y) on the cartesian chart.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Tuple

import numpy as np
from numpy.polynomial import polynomial as P


class FieldKind(str, Enum):
    """Built-in closed-form fields"""
    ZERO = "zero"
    CONSTANT = "constant"
    SPHERE_CAP = "sphere_cap"
    RADIAL_POLYNOMIAL = "radial_polynomial"
    R2_COS_THETA = "r2_cos_theta"
    PLANE = "plane"
    EXP_BUMP = "exp_bump"

    def __str__(self):
        return self.value


RADIAL_KINDS = frozenset({
    FieldKind.ZERO,
    FieldKind.CONSTANT,
    FieldKind.SPHERE_CAP,
    FieldKind.RADIAL_POLYNOMIAL,
    FieldKind.EXP_BUMP,
})


@dataclass(frozen=True)
class FieldFunction:
    """
    A closed-form field.

    Parameters by family:
        constant          value
        sphere_cap        radius R, shift          √(R² − r²) + shift
        radial_polynomial coefficients             Σ c_k r^k
        r2_cos_theta      amplitude                amplitude · r² cos θ
        plane             slope_x, slope_y, value  slope_x·x + slope_y·y + value
        exp_bump          amplitude, width         amplitude · exp(−r²/width²)
    """
    kind: FieldKind
    value: float = 0.0
    radius: float = 1.0
    shift: float = 0.0
    coefficients: Tuple[float, ...] = ()
    amplitude: float = 1.0
    slope_x: float = 0.0
    slope_y: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if self.kind == FieldKind.SPHERE_CAP and self.radius <= 0:
            raise ValueError("sphere_cap requires radius > 0")
        if self.kind == FieldKind.RADIAL_POLYNOMIAL and not self.coefficients:
            raise ValueError("radial_polynomial requires coefficients")
        if self.kind == FieldKind.EXP_BUMP and self.width <= 0:
            raise ValueError("exp_bump requires width > 0")

    @property
    def is_radial(self) -> bool:
        return self.kind in RADIAL_KINDS

    @property
    def is_zero(self) -> bool:
        if self.kind == FieldKind.ZERO:
            return True
        if self.kind == FieldKind.CONSTANT:
            return self.value == 0.0
        if self.kind == FieldKind.RADIAL_POLYNOMIAL:
            return not any(self.coefficients)
        if self.kind in (FieldKind.R2_COS_THETA, FieldKind.EXP_BUMP):
            return self.amplitude == 0.0
        if self.kind == FieldKind.PLANE:
            return self.slope_x == 0.0 and self.slope_y == 0.0 and self.value == 0.0
        return False

    def __call__(self, a, b=0.0, polar: bool = True) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if polar:
            r = np.abs(a)
            theta = b + np.where(a < 0, np.pi, 0.0)
            x, y = r * np.cos(theta), r * np.sin(theta)
        else:
            x, y = a, b
            r = np.hypot(x, y)
            theta = np.arctan2(y, x)
        shape = np.broadcast(a, b).shape

        if self.kind == FieldKind.ZERO:
            out = np.zeros(shape)
        elif self.kind == FieldKind.CONSTANT:
            out = np.full(shape, self.value)
        elif self.kind == FieldKind.SPHERE_CAP:
            out = np.sqrt(self.radius ** 2 - r ** 2) + self.shift
        elif self.kind == FieldKind.RADIAL_POLYNOMIAL:
            out = P.polyval(r, np.asarray(self.coefficients, dtype=float))
        elif self.kind == FieldKind.R2_COS_THETA:
            out = self.amplitude * r ** 2 * np.cos(theta)
        elif self.kind == FieldKind.PLANE:
            out = self.slope_x * x + self.slope_y * y + self.value
        else:
            out = self.amplitude * np.exp(-(r / self.width) ** 2)

        return np.broadcast_to(out, shape).astype(float)

    def describe(self) -> str:
        if self.kind == FieldKind.CONSTANT:
            return f"constant({self.value:g})"
        if self.kind == FieldKind.SPHERE_CAP:
            return f"sphere_cap(R={self.radius:g}, shift={self.shift:g})"
        return str(self.kind)


FIELD_REGISTRY = tuple(kind.value for kind in FieldKind)

_FIELD_PARAMS = ('value', 'radius', 'shift', 'amplitude', 'slope_x', 'slope_y', 'width')


def make_field(name: str, **params: Any) -> FieldFunction:
    """
    Build a registered field by name.

    Raises:
        ValueError: If the name is unknown or parameters are invalid
    """
    try:
        kind = FieldKind(name)
    except ValueError:
        raise ValueError(
            f"Unknown field '{name}'. Available: {', '.join(FIELD_REGISTRY)}"
        ) from None

    kwargs: Dict[str, Any] = {
        key: float(params[key]) for key in _FIELD_PARAMS if params.get(key) is not None
    }
    if params.get('coefficients') is not None:
        kwargs['coefficients'] = tuple(float(c) for c in params['coefficients'])
    return FieldFunction(kind=kind, **kwargs)


def zero_field() -> FieldFunction:
    return FieldFunction(FieldKind.ZERO)


def constant_field(value: float) -> FieldFunction:
    return FieldFunction(FieldKind.CONSTANT, value=value)
