"""
Result models shared by the solver, the checkers and the reporters
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional


class CheckStatus(Enum):
    """Outcome of a hypothesis or verification check"""
    PASS = "PASS"
    FAIL = "FAIL"

    @classmethod
    def of(cls, passed: bool) -> "CheckStatus":
        return cls.PASS if passed else cls.FAIL


@dataclass
class ConditionResult:
    """A single inequality `value <relation> bound` of a theorem hypothesis"""
    name: str
    value: float
    bound: float
    relation: str
    passed: bool

    @property
    def status(self) -> CheckStatus:
        return CheckStatus.of(self.passed)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            'name': self.name,
            'value': self.value,
            'bound': self.bound,
            'relation': self.relation,
            'status': self.status.value,
        }


@dataclass
class HypothesisReport:
    """Evaluation of the hypotheses of one existence theorem"""
    theorem_id: int
    quantities: Dict[str, float] = field(default_factory=dict)
    conditions: List[ConditionResult] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def verdict(self) -> CheckStatus:
        return CheckStatus.of(self.passed)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            'theorem': self.theorem_id,
            'quantities': dict(self.quantities),
            'conditions': [c.to_dict() for c in self.conditions],
            'notes': list(self.notes),
            'verdict': self.verdict.value,
        }


@dataclass
class HeightCheck:
    """Containment of a solution between the lower and upper height barriers"""
    passed: bool
    margin: float
    violations: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'margin': self.margin,
            'violations': self.violations,
        }


@dataclass
class GradientBarrierResult:
    """Accepted boundary-gradient barrier and the gradient bound it realizes"""
    C: float
    K: float
    mu: float
    eps: float
    psi_prime_0: float
    boundary_gradient: float
    data_gradient: float

    @property
    def bound(self) -> float:
        return self.psi_prime_0 + self.data_gradient

    @property
    def bound_holds(self) -> bool:
        return self.boundary_gradient <= self.bound + 1e-6

    def to_dict(self) -> Dict[str, Any]:
        return {
            'C': self.C,
            'K': self.K,
            'mu': self.mu,
            'eps': self.eps,
            'psi_prime_0': self.psi_prime_0,
            'sup_boundary_grad_u': self.boundary_gradient,
            'sup_boundary_grad_phi': self.data_gradient,
            'gradient_bound': self.bound,
            'bound_holds': self.bound_holds,
        }


@dataclass
class FluxReport:
    """Both sides of the graph flux identity"""
    lhs: float
    rhs: float

    @property
    def relative_residual(self) -> float:
        return abs(self.lhs - self.rhs) / (abs(self.lhs) + abs(self.rhs) + 1e-30)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'lhs': self.lhs,
            'rhs': self.rhs,
            'relative_residual': self.relative_residual,
        }


@dataclass
class HomotopyStep:
    """One attempted continuation step"""
    sigma: float
    iterations: int
    residual: float
    sup_u: float
    sup_grad_u: float
    accepted: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            'sigma': self.sigma,
            'iterations': self.iterations,
            'residual': self.residual,
            'sup_u': self.sup_u,
            'sup_grad_u': self.sup_grad_u,
        }


@dataclass
class ConvergenceRow:
    """One grid level of a refinement study"""
    h: float
    max_error: float
    observed_order: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        order = self.observed_order
        return {
            'h': self.h,
            'max_error': self.max_error,
            'observed_order': math.nan if order is None else order,
        }
