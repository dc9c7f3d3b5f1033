"""
Run configuration schema and loader
"""

from kgraph_toolkit.specs.schema import (
    DomainSection,
    FieldSpec,
    FunctionSpec,
    LoggingSection,
    ModelSection,
    OutputFormat,
    OutputSection,
    ProblemSection,
    RunConfig,
    SolverSection,
)
from kgraph_toolkit.specs.validator import ConfigValidator

__all__ = [
    "DomainSection",
    "FieldSpec",
    "FunctionSpec",
    "LoggingSection",
    "ModelSection",
    "OutputFormat",
    "OutputSection",
    "ProblemSection",
    "RunConfig",
    "SolverSection",
    "ConfigValidator",
]
