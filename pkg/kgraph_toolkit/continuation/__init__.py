"""
Continuity method and uniqueness check over several initial guesses
"""

from kgraph_toolkit.continuation.homotopy import (
    HomotopyOptions,
    HomotopyState,
    UniquenessProbe,
    continuity_solve,
    random_guess,
    uniqueness_probe,
)

__all__ = [
    "HomotopyOptions",
    "HomotopyState",
    "UniquenessProbe",
    "continuity_solve",
    "random_guess",
    "uniqueness_probe",
]
