"""
Named one-variable functions with analytic derivatives.

These supply the leaf warping ξ(r) and the Killing norm ϱ. Every function is
evaluated elementwise on floats or numpy arrays.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

ArrayLike = Union[float, np.ndarray]


class FunctionKind(str, Enum):
    """Built-in function families"""
    IDENTITY = "identity"
    SINH = "sinh"
    COSH = "cosh"
    SIN = "sin"
    CONSTANT = "constant"
    POLYNOMIAL = "polynomial"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ProfileFunction:
    """
    A smooth function of one coordinate with its first two derivatives.

    `k` is the curvature parameter of the sinh/cosh/sin families
    (sinh(√k t)/√k, cosh(√k t), sin(√k t)/√k), `value` the constant and
    `coefficients` the ascending polynomial coefficients.
    """
    kind: FunctionKind
    k: float = 1.0
    value: float = 1.0
    coefficients: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind in (FunctionKind.SINH, FunctionKind.COSH, FunctionKind.SIN) and self.k <= 0:
            raise ValueError(f"{self.kind} requires k > 0, got {self.k}")
        if self.kind == FunctionKind.POLYNOMIAL and not self.coefficients:
            raise ValueError("polynomial requires at least one coefficient")

    def __call__(self, t: ArrayLike) -> ArrayLike:
        return self.derivative(t, 0)

    def derivative(self, t: ArrayLike, order: int = 1) -> ArrayLike:
        """Return the `order`-th derivative (0, 1 or 2) at t"""
        if order not in (0, 1, 2):
            raise ValueError(f"Only derivatives of order 0, 1, 2 are available, got {order}")
        t = np.asarray(t, dtype=float)
        s = np.sqrt(self.k)

        if self.kind == FunctionKind.IDENTITY:
            out = (t, np.ones_like(t), np.zeros_like(t))[order]
        elif self.kind == FunctionKind.SINH:
            out = (np.sinh(s * t) / s, np.cosh(s * t), s * np.sinh(s * t))[order]
        elif self.kind == FunctionKind.COSH:
            out = (np.cosh(s * t), s * np.sinh(s * t), self.k * np.cosh(s * t))[order]
        elif self.kind == FunctionKind.SIN:
            out = (np.sin(s * t) / s, np.cos(s * t), -s * np.sin(s * t))[order]
        elif self.kind == FunctionKind.CONSTANT:
            out = (np.full_like(t, self.value), np.zeros_like(t), np.zeros_like(t))[order]
        else:
            coeffs = np.asarray(self.coefficients, dtype=float)
            for _ in range(order):
                coeffs = P.polyder(coeffs) if coeffs.size > 1 else np.zeros(1)
            out = P.polyval(t, coeffs) + np.zeros_like(t)

        return out if out.ndim else float(out)

    def describe(self) -> str:
        """Short human-readable form used in reports"""
        if self.kind == FunctionKind.CONSTANT:
            return f"constant({self.value:g})"
        if self.kind == FunctionKind.POLYNOMIAL:
            return f"polynomial({', '.join(f'{c:g}' for c in self.coefficients)})"
        if self.kind == FunctionKind.IDENTITY:
            return "identity"
        return f"{self.kind}(k={self.k:g})"


FUNCTION_REGISTRY = tuple(kind.value for kind in FunctionKind)


def make_function(name: str, **params: Any) -> ProfileFunction:
    """
    Build a registered function by name.

    Args:
        name: One of FUNCTION_REGISTRY
        **params: k, value or coefficients, depending on the family

    Returns:
        ProfileFunction

    Raises:
        ValueError: If the name is unknown or parameters are invalid
    """
    try:
        kind = FunctionKind(name)
    except ValueError:
        raise ValueError(
            f"Unknown function '{name}'. Available: {', '.join(FUNCTION_REGISTRY)}"
        ) from None

    kwargs: Dict[str, Any] = {}
    if 'k' in params and params['k'] is not None:
        kwargs['k'] = float(params['k'])
    if 'value' in params and params['value'] is not None:
        kwargs['value'] = float(params['value'])
    if params.get('coefficients') is not None:
        kwargs['coefficients'] = tuple(float(c) for c in params['coefficients'])
    return ProfileFunction(kind=kind, **kwargs)


def identity() -> ProfileFunction:
    return ProfileFunction(FunctionKind.IDENTITY)


def constant(value: float = 1.0) -> ProfileFunction:
    return ProfileFunction(FunctionKind.CONSTANT, value=value)


def sinh(k: float = 1.0) -> ProfileFunction:
    return ProfileFunction(FunctionKind.SINH, k=k)


def cosh(k: float = 1.0) -> ProfileFunction:
    return ProfileFunction(FunctionKind.COSH, k=k)
