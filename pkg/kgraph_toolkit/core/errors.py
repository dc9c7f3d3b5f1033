"""
Exception hierarchy for the toolkit.

Library code raises these; the CLI maps them onto process exit codes.
"""

from typing import Any, List, Optional


class KGraphError(Exception):
    """Base class for all toolkit errors"""
    pass


class ConfigError(KGraphError):
    """Raised when a run configuration cannot be loaded or validated"""

    def __init__(self, message: str, errors: Optional[List[str]] = None):
        super().__init__(message)
        self.errors = errors or []


class DomainError(KGraphError, ValueError):
    """Raised when a point, distance or parameter lies outside the admissible range"""
    pass


class NonConvergenceError(KGraphError):
    """Raised when Newton iteration runs out of iterations"""

    def __init__(self, message: str, last_iterate: Any = None,
                 residual_norm: float = float('nan'), iterations: int = 0):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual_norm = residual_norm
        self.iterations = iterations


class DivergenceError(NonConvergenceError):
    """Raised when the residual becomes non-finite"""
    pass


class ContinuationStallError(KGraphError):
    """Raised when the homotopy step falls below its minimum before reaching sigma = 1"""

    def __init__(self, message: str, last_sigma: float, history: Optional[list] = None,
                 last_solution: Any = None):
        super().__init__(message)
        self.last_sigma = last_sigma
        self.history = history or []
        self.last_solution = last_solution


class BarrierConstructionError(KGraphError):
    """Raised when no barrier constant passes the discrete supersolution test"""
    pass


class UnboundedProfileError(KGraphError):
    """Raised when a rotational profile never reaches a turning radius"""
    pass
