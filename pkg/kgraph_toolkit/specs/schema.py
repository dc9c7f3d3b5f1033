"""
Run configuration schema.

A run configuration names the ambient model, the domain with its boundary
data, the prescribed mean curvature and the solver settings. Every named
function refers to the built-in registries of `kgraph_toolkit.geometry`, so
a validated RunConfig always builds.
"""

from enum import Enum
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from kgraph_toolkit.continuation.homotopy import HomotopyOptions
from kgraph_toolkit.geometry.fields import FIELD_REGISTRY, FieldFunction, make_field
from kgraph_toolkit.geometry.functions import FUNCTION_REGISTRY, ProfileFunction, make_function
from kgraph_toolkit.geometry.models import (
    AmbientModel,
    Domain,
    DomainShape,
    LeafKind,
    LeafMetric,
    WarpingFunction,
)
from kgraph_toolkit.mce.grid import GridKind
from kgraph_toolkit.mce.newton import NewtonOptions

MIN_GRID_SIZE = 8


class OutputFormat(str, Enum):
    """Output file families"""
    CSV = "csv"
    TXT = "txt"

    def __str__(self):
        return self.value


def _as_list(v):
    """Accept a single scalar where a list is expected (flat INI values)"""
    if v is None or isinstance(v, (list, tuple)):
        return v
    return [v]


class FunctionSpec(BaseModel):
    """A registered ξ/ϱ function and its parameters"""
    name: str = Field(..., description="Registered function name")
    k: Optional[float] = Field(None, description="Curvature parameter of sinh/cosh/sin")
    value: Optional[float] = Field(None, description="Value of a constant")
    coefficients: Optional[List[float]] = Field(None, description="Ascending polynomial coefficients")

    @field_validator('name')
    @classmethod
    def validate_name(cls, v):
        if v not in FUNCTION_REGISTRY:
            raise ValueError(f"Unknown function '{v}'. Available: {', '.join(FUNCTION_REGISTRY)}")
        return v

    @field_validator('coefficients', mode='before')
    @classmethod
    def wrap_coefficients(cls, v):
        return _as_list(v)

    @model_validator(mode='after')
    def validate_parameters(self):
        self.build()
        return self

    def build(self) -> ProfileFunction:
        return make_function(self.name, k=self.k, value=self.value, coefficients=self.coefficients)


class FieldSpec(BaseModel):
    """A registered closed-form field (φ, H or an exact solution)"""
    name: str = Field(..., description="Registered field name")
    value: Optional[float] = None
    radius: Optional[float] = None
    shift: Optional[float] = None
    coefficients: Optional[List[float]] = None
    amplitude: Optional[float] = None
    slope_x: Optional[float] = None
    slope_y: Optional[float] = None
    width: Optional[float] = None

    @field_validator('name')
    @classmethod
    def validate_name(cls, v):
        if v not in FIELD_REGISTRY:
            raise ValueError(f"Unknown field '{v}'. Available: {', '.join(FIELD_REGISTRY)}")
        return v

    @field_validator('coefficients', mode='before')
    @classmethod
    def wrap_coefficients(cls, v):
        return _as_list(v)

    @model_validator(mode='after')
    def validate_parameters(self):
        self.build()
        return self

    def build(self) -> FieldFunction:
        return make_field(self.name, **self.model_dump(exclude={'name'}, exclude_none=True))


class ModelSection(BaseModel):
    """Ambient model M = ℙ ×_ϱ ℝ"""
    leaf: LeafKind = Field(..., description="Leaf chart")
    n: int = Field(2, ge=2, description="Leaf dimension")
    xi: Optional[FunctionSpec] = Field(None, description="Leaf warping ξ (rotsym leaves only)")
    rho: FunctionSpec = Field(
        default_factory=lambda: FunctionSpec(name="constant", value=1.0),
        description="Killing norm ϱ",
    )

    @model_validator(mode='after')
    def validate_leaf(self):
        if self.leaf == LeafKind.ROTSYM and self.xi is None:
            raise ValueError("rotsym leaves need a 'xi' function")
        self.build()
        return self

    def build(self) -> AmbientModel:
        if self.xi is not None and self.leaf == LeafKind.ROTSYM:
            leaf = LeafMetric(self.leaf, n=self.n, xi=self.xi.build())
        else:
            leaf = LeafMetric(self.leaf, n=self.n)
        return AmbientModel(leaf=leaf, warp=WarpingFunction(self.rho.build()))


class DomainSection(BaseModel):
    """Domain Ω and boundary data φ"""
    shape: DomainShape = Field(..., description="disc, annulus or rectangle")
    r0: Optional[float] = Field(None, gt=0, description="Disc radius")
    r_in: Optional[float] = Field(None, gt=0, description="Annulus inner radius")
    r_out: Optional[float] = Field(None, gt=0, description="Annulus outer radius")
    bounds: Optional[Tuple[float, float, float, float]] = Field(
        None, description="Rectangle (x_min, x_max, y_min, y_max)"
    )
    phi: FieldSpec = Field(default_factory=lambda: FieldSpec(name="zero"),
                           description="Boundary data")

    @model_validator(mode='after')
    def validate_shape(self):
        if self.shape == DomainShape.DISC and self.r0 is None:
            raise ValueError("disc domains need 'r0'")
        if self.shape == DomainShape.ANNULUS and (self.r_in is None or self.r_out is None):
            raise ValueError("annulus domains need 'r_in' and 'r_out'")
        if self.shape == DomainShape.RECTANGLE and self.bounds is None:
            raise ValueError("rectangle domains need 'bounds'")
        self.build()
        return self

    def build(self) -> Domain:
        phi = self.phi.build()
        if self.shape == DomainShape.DISC:
            return Domain.disc(self.r0, phi)
        if self.shape == DomainShape.ANNULUS:
            return Domain.annulus(self.r_in, self.r_out, phi)
        return Domain.rectangle(*self.bounds, phi=phi)


class ProblemSection(BaseModel):
    """Prescribed mean curvature and what to check"""
    H: Union[float, FieldSpec] = Field(0.0, description="Constant H or a named field")
    theorem: Optional[Literal[1, 2, 3]] = Field(None, description="Existence theorem to check")
    k: Optional[float] = Field(None, gt=0, description="Curvature bound for theorem 2")
    exact: Optional[FieldSpec] = Field(None, description="Manufactured exact solution")
    H0: Optional[float] = Field(None, description="Rotational profile curvature (defaults to H)")
    profile_samples: int = Field(400, ge=8, description="Nodes of the rotational profile")
    profile_method: Literal["angle", "radius"] = "angle"

    def build_H(self) -> Union[float, FieldFunction]:  # noqa: N802
        if isinstance(self.H, FieldSpec):
            return self.H.build()
        return float(self.H)

    @property
    def profile_curvature(self) -> Optional[float]:
        if self.H0 is not None:
            return self.H0
        return None if isinstance(self.H, FieldSpec) else float(self.H)


class SolverSection(BaseModel):
    """Discretization and nonlinear solver settings"""
    grid: GridKind = Field(GridKind.RADIAL, description="Grid layout")
    m: int = Field(64, description="Cells along the primary coordinate")
    m_b: Optional[int] = Field(None, description="Cells along the secondary coordinate")
    tol: float = Field(1e-10, description="Residual tolerance")
    max_iter: int = Field(50, ge=1)
    damping: bool = True
    max_halvings: int = Field(20, ge=0)
    homotopy: bool = True
    dsigma: float = 0.1
    dsigma_max: float = 0.25
    dsigma_min: float = 1e-4
    mms_sizes: List[int] = Field(default_factory=lambda: [32, 64, 128])

    @field_validator('mms_sizes', mode='before')
    @classmethod
    def wrap_sizes(cls, v):
        return _as_list(v)

    @field_validator('m', 'm_b')
    @classmethod
    def validate_size(cls, v):
        if v is not None and v < MIN_GRID_SIZE:
            raise ValueError(f"grid sizes must be >= {MIN_GRID_SIZE}, got {v}")
        return v

    @field_validator('mms_sizes')
    @classmethod
    def validate_sizes(cls, v):
        if len(v) < 2:
            raise ValueError("a refinement study needs at least two grid sizes")
        if any(m < MIN_GRID_SIZE for m in v):
            raise ValueError(f"grid sizes must be >= {MIN_GRID_SIZE}, got {v}")
        if sorted(set(v)) != list(v):
            raise ValueError(f"mms_sizes must be strictly increasing, got {v}")
        return v

    @field_validator('tol')
    @classmethod
    def validate_tol(cls, v):
        if v <= 0:
            raise ValueError(f"tol must be > 0, got {v}")
        return v

    @model_validator(mode='after')
    def validate_steps(self):
        if not 0 < self.dsigma_min <= self.dsigma <= self.dsigma_max:
            raise ValueError("need 0 < dsigma_min <= dsigma <= dsigma_max")
        return self

    def newton_options(self) -> NewtonOptions:
        return NewtonOptions(tol=self.tol, max_iter=self.max_iter, damping=self.damping,
                             max_halvings=self.max_halvings)

    def homotopy_options(self) -> HomotopyOptions:
        return HomotopyOptions(dsigma=self.dsigma, dsigma_max=self.dsigma_max,
                               dsigma_min=self.dsigma_min, newton=self.newton_options())


class OutputSection(BaseModel):
    directory: str = Field("./kgraph_output", description="Output directory")
    formats: List[OutputFormat] = Field(default_factory=lambda: [OutputFormat.CSV, OutputFormat.TXT])

    @field_validator('formats', mode='before')
    @classmethod
    def wrap_formats(cls, v):
        return _as_list(v)


class LoggingSection(BaseModel):
    level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    @field_validator('level', mode='before')
    @classmethod
    def upper_level(cls, v):
        return v.upper() if isinstance(v, str) else v


class RunConfig(BaseModel):
    """Complete run configuration"""
    model: ModelSection
    domain: DomainSection
    problem: ProblemSection = Field(default_factory=ProblemSection)
    solver: SolverSection = Field(default_factory=SolverSection)
    output: OutputSection = Field(default_factory=OutputSection)
    logging: LoggingSection = Field(default_factory=LoggingSection)

    @model_validator(mode='after')
    def validate_combination(self):
        """Leaf, domain and grid must fit together"""
        polar_leaf = self.model.leaf != LeafKind.CARTESIAN_FLAT
        polar_domain = self.domain.shape != DomainShape.RECTANGLE
        if polar_leaf != polar_domain:
            raise ValueError(
                f"Domain '{self.domain.shape}' does not live on a {self.model.leaf} leaf"
            )
        grid = self.solver.grid
        if grid == GridKind.CARTESIAN and polar_domain:
            raise ValueError("cartesian grids need a rectangle domain")
        if grid != GridKind.CARTESIAN and not polar_domain:
            raise ValueError(f"{grid} grids need a disc or annulus")
        if grid == GridKind.POLAR and self.model.n != 2:
            raise ValueError("polar grids are two-dimensional (n = 2)")
        if grid == GridKind.RADIAL:
            radial = [self.domain.phi.build()]
            if isinstance(self.problem.H, FieldSpec):
                radial.append(self.problem.H.build())
            if self.problem.exact is not None:
                radial.append(self.problem.exact.build())
            for fn in radial:
                if not fn.is_radial:
                    raise ValueError(f"radial grids need radial fields, got '{fn.describe()}'")
        return self

    def build_model(self) -> AmbientModel:
        return self.model.build()

    def build_domain(self) -> Domain:
        return self.domain.build()

    def build_H(self) -> Union[float, FieldFunction]:  # noqa: N802
        return self.problem.build_H()
