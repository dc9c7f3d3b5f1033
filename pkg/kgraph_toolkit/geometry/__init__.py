"""
Ambient warped-product geometry.

Available pieces:
- functions: named ξ/ϱ families with analytic derivatives
- fields: closed-form scalar fields for φ, H and manufactured solutions
- models: LeafMetric, WarpingFunction, AmbientModel, Domain
- operations: drift field, cylinder curvatures, distance, Ricci bound
"""

from kgraph_toolkit.geometry.functions import (
    FunctionKind,
    ProfileFunction,
    FUNCTION_REGISTRY,
    make_function,
)
from kgraph_toolkit.geometry.fields import (
    FieldKind,
    FieldFunction,
    FIELD_REGISTRY,
    make_field,
    zero_field,
    constant_field,
)
from kgraph_toolkit.geometry.models import (
    LeafKind,
    LeafMetric,
    WarpingFunction,
    AmbientModel,
    DomainShape,
    Domain,
)
from kgraph_toolkit.geometry.operations import (
    drift_field,
    flow_line_curvature,
    cylinder_curvature_components,
    cylinder_mean_curvature,
    distance_to_boundary,
    boundary_distance,
    ricci_lower_bound,
)

__all__ = [
    "FunctionKind",
    "ProfileFunction",
    "FUNCTION_REGISTRY",
    "make_function",
    "FieldKind",
    "FieldFunction",
    "FIELD_REGISTRY",
    "make_field",
    "zero_field",
    "constant_field",
    "LeafKind",
    "LeafMetric",
    "WarpingFunction",
    "AmbientModel",
    "DomainShape",
    "Domain",
    "drift_field",
    "flow_line_curvature",
    "cylinder_curvature_components",
    "cylinder_mean_curvature",
    "distance_to_boundary",
    "boundary_distance",
    "ricci_lower_bound",
]
