"""
Errors and result models shared across the toolkit.
"""

from kgraph_toolkit.core.errors import (
    KGraphError,
    ConfigError,
    DomainError,
    NonConvergenceError,
    DivergenceError,
    ContinuationStallError,
    BarrierConstructionError,
    UnboundedProfileError,
)
from kgraph_toolkit.core.models import (
    CheckStatus,
    ConditionResult,
    HypothesisReport,
    HeightCheck,
    GradientBarrierResult,
    FluxReport,
    HomotopyStep,
    ConvergenceRow,
)

__all__ = [
    "KGraphError",
    "ConfigError",
    "DomainError",
    "NonConvergenceError",
    "DivergenceError",
    "ContinuationStallError",
    "BarrierConstructionError",
    "UnboundedProfileError",
    "CheckStatus",
    "ConditionResult",
    "HypothesisReport",
    "HeightCheck",
    "GradientBarrierResult",
    "FluxReport",
    "HomotopyStep",
    "ConvergenceRow",
]
