"""
Rotational CMC profiles, the rotational Serrin bound and the graph flux identity
"""

from kgraph_toolkit.rotational.profile import (
    ProfileCurve,
    RotationalModel,
    integrate_cmc_sphere,
    momentum_integral,
    serrin_bound_F,
)
from kgraph_toolkit.rotational.flux import graph_flux_check

__all__ = [
    "ProfileCurve",
    "RotationalModel",
    "integrate_cmc_sphere",
    "momentum_integral",
    "serrin_bound_F",
    "graph_flux_check",
]
