"""
Shared fixtures: the battery of ambient models, domains and run configurations.
"""

import math
from pathlib import Path

import pytest
import yaml

from kgraph_toolkit.geometry import (
    AmbientModel,
    Domain,
    LeafKind,
    LeafMetric,
    WarpingFunction,
    make_field,
    make_function,
)

ROOT = Path(__file__).resolve().parent.parent
CONFIG_DIR = ROOT / "config"


def rotsym(xi: str = "sinh", rho: str = "constant", n: int = 2) -> AmbientModel:
    leaf = LeafMetric(LeafKind.ROTSYM, n=n, xi=make_function(xi, k=1.0))
    if rho == "constant":
        return AmbientModel(leaf, WarpingFunction(make_function("constant", value=1.0)))
    return AmbientModel(leaf, WarpingFunction(make_function(rho, k=1.0)))


@pytest.fixture
def euclidean():
    """ℝ² × ℝ with ϱ ≡ 1"""
    return AmbientModel(LeafMetric(LeafKind.EUCLIDEAN_POLAR, n=2))


@pytest.fixture
def hyperbolic():
    """ℍ² × ℝ"""
    return rotsym("sinh")


@pytest.fixture
def warped():
    """ξ = sinh r with Killing norm ϱ = cosh r"""
    return rotsym("sinh", "cosh")


@pytest.fixture
def flat():
    return AmbientModel(LeafMetric(LeafKind.CARTESIAN_FLAT, n=2))


@pytest.fixture
def unit_disc():
    return Domain.disc(1.0)


@pytest.fixture
def cap_disc():
    """Disc of radius 0.8 carrying the unit spherical cap"""
    return Domain.disc(0.8)


@pytest.fixture
def unit_square():
    return Domain.rectangle(0.0, 1.0, 0.0, 1.0)


@pytest.fixture
def hemisphere():
    """Exact solution √(1 − r²) − 0.6 of H ≡ −1 over the disc of radius 0.8"""
    return make_field("sphere_cap", radius=1.0, shift=-0.6)


@pytest.fixture
def hemisphere_config():
    return {
        "model": {"leaf": "euclidean-polar", "n": 2},
        "domain": {"shape": "disc", "r0": 0.8},
        "problem": {"H": -1.0, "exact": {"name": "sphere_cap", "radius": 1.0, "shift": -0.6}},
        "solver": {"grid": "radial", "m": 32, "mms_sizes": [16, 32]},
        "logging": {"level": "WARNING"},
    }


@pytest.fixture
def write_config(tmp_path):
    """Write a config dict as YAML and return its path"""
    def _write(data, name="run.yaml"):
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump(data, f, sort_keys=False)
        return path
    return _write


HEMISPHERE_FLUX = 2.0 * (-1.0) * math.pi * 0.64
