"""
Structured grids for the Killing-graph mean curvature equation.

Three layouts are supported:
- radial: 1-D in r for radially symmetric problems in any leaf dimension n
- polar: (r, θ) for n = 2 on discs and annuli, θ periodic
- cartesian: (x, y) on rectangles of a flat leaf

Nodes are stored row-major with the primary coordinate (r or x) as the row
index. On discs the first radial node sits at half spacing from the pole
and the outermost row lies on Γ; its west neighbour is the reflection
through the pole.

Each interior node owns a control volume whose measure is ϱ dℙ, so face
fluxes of ϱ∇u/W telescope exactly.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from kgraph_toolkit.core.errors import DomainError
from kgraph_toolkit.geometry.fields import FieldFunction
from kgraph_toolkit.geometry.models import AmbientModel, Domain, DomainShape

_GAUSS_POINTS = 8


class GridKind(str, Enum):
    """Grid layouts"""
    RADIAL = "radial"
    POLAR = "polar"
    CARTESIAN = "cartesian"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class BoundarySegment:
    """A piece of Γ: its nodes, the chart axis of the outward normal and its line weights"""
    nodes: np.ndarray
    axis: int
    sign: float
    weights: np.ndarray


def sphere_measure(n: int) -> float:
    """Volume of the unit sphere S^{n−1}"""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


class Grid:
    """
    Discretization of a Domain under an AmbientModel.

    Use the constructors `Grid.radial`, `Grid.polar` and `Grid.cartesian`
    (or `build_grid`). Instances are treated as immutable.
    """

    def __init__(self, kind: GridKind, model: AmbientModel, domain: Domain,
                 a_nodes: np.ndarray, b_nodes: np.ndarray, da: float, db: float,
                 pole: bool, periodic: bool, interior_rows: slice, interior_cols: slice):
        model.check_on(domain)
        self.kind = kind
        self.model = model
        self.domain = domain
        self.n = model.n
        self.a_nodes = a_nodes
        self.b_nodes = b_nodes
        self.da = da
        self.db = db
        self.pole = pole
        self.periodic = periodic
        self.shape = (a_nodes.size, b_nodes.size)

        A, B = np.meshgrid(a_nodes, b_nodes, indexing='ij')
        self.A = A.ravel()
        self.B = B.ravel()

        mask = np.zeros(self.shape, dtype=bool)
        mask[interior_rows, interior_cols] = True
        self.interior_mask = mask.ravel()
        self.interior = np.flatnonzero(self.interior_mask)
        self.boundary = np.flatnonzero(~self.interior_mask)
        self.position = np.full(self.size, -1, dtype=int)
        self.position[self.interior] = np.arange(self.interior.size)

        self._build_neighbours()
        self._build_weights()
        self._build_boundary_segments()

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def radial(cls, model: AmbientModel, domain: Domain, m: int) -> "Grid":
        """Radial grid with m cells on a disc or an annulus"""
        if not model.leaf.is_polar or domain.shape == DomainShape.RECTANGLE:
            raise DomainError("Radial grids need a polar leaf and a disc or annulus")
        if not domain.phi.is_radial:
            raise DomainError(f"Boundary data {domain.phi.describe()} is not radially symmetric")
        if domain.shape == DomainShape.DISC:
            da = domain.r0 / (m + 0.5)
            a = (np.arange(m + 1) + 0.5) * da
            rows, pole = slice(0, m), True
        else:
            da = (domain.r_out - domain.r_in) / m
            a = domain.r_in + np.arange(m + 1) * da
            rows, pole = slice(1, m), False
        return cls(GridKind.RADIAL, model, domain, a, np.zeros(1), da, sphere_measure(model.n),
                   pole=pole, periodic=False, interior_rows=rows, interior_cols=slice(None))

    @classmethod
    def polar(cls, model: AmbientModel, domain: Domain, m_r: int,
              m_theta: Optional[int] = None) -> "Grid":
        """Polar grid with m_r radial cells and m_theta (even) angular cells, n = 2"""
        m_theta = m_theta or m_r
        if model.n != 2:
            raise DomainError("Polar grids are two-dimensional (n = 2)")
        if not model.leaf.is_polar or domain.shape == DomainShape.RECTANGLE:
            raise DomainError("Polar grids need a polar leaf and a disc or annulus")
        if m_theta % 2:
            raise DomainError(f"m_theta must be even for the pole reflection, got {m_theta}")
        db = 2.0 * np.pi / m_theta
        b = np.arange(m_theta) * db
        if domain.shape == DomainShape.DISC:
            da = domain.r0 / (m_r + 0.5)
            a = (np.arange(m_r + 1) + 0.5) * da
            rows, pole = slice(0, m_r), True
        else:
            da = (domain.r_out - domain.r_in) / m_r
            a = domain.r_in + np.arange(m_r + 1) * da
            rows, pole = slice(1, m_r), False
        return cls(GridKind.POLAR, model, domain, a, b, da, db,
                   pole=pole, periodic=True, interior_rows=rows, interior_cols=slice(None))

    @classmethod
    def cartesian(cls, model: AmbientModel, domain: Domain, m_x: int,
                  m_y: Optional[int] = None) -> "Grid":
        """Vertex-centered grid on a rectangle of a flat leaf, n = 2"""
        m_y = m_y or m_x
        if model.leaf.is_polar or domain.shape != DomainShape.RECTANGLE:
            raise DomainError("Cartesian grids need a cartesian-flat leaf and a rectangle")
        if model.n != 2:
            raise DomainError("Cartesian grids are two-dimensional (n = 2)")
        x0, x1, y0, y1 = domain.bounds
        a = np.linspace(x0, x1, m_x + 1)
        b = np.linspace(y0, y1, m_y + 1)
        return cls(GridKind.CARTESIAN, model, domain, a, b, (x1 - x0) / m_x, (y1 - y0) / m_y,
                   pole=False, periodic=False, interior_rows=slice(1, m_x),
                   interior_cols=slice(1, m_y))

    # ------------------------------------------------------------------
    # Basic properties
    # ------------------------------------------------------------------

    @property
    def size(self) -> int:
        return self.shape[0] * self.shape[1]

    @property
    def two_dimensional(self) -> bool:
        return self.kind != GridKind.RADIAL

    @property
    def polar_chart(self) -> bool:
        return self.kind != GridKind.CARTESIAN

    @property
    def spacing(self) -> float:
        """Characteristic mesh width used in convergence studies"""
        if self.kind == GridKind.CARTESIAN:
            return max(self.da, self.db)
        return self.da

    def index(self, i: int, j: int = 0) -> int:
        return i * self.shape[1] + j

    def rho(self, a):
        return self.model.warp.value(a)

    def xi(self, a, order: int = 0):
        return self.model.leaf.xi_at(a, order)

    def f(self, a):
        return self.model.warp.f(a)

    def sample(self, field_fn: FieldFunction) -> np.ndarray:
        """Evaluate a closed-form field at every node"""
        return np.asarray(field_fn(self.A, self.B, polar=self.polar_chart), dtype=float)

    def boundary_data(self, field_fn: Optional[FieldFunction] = None) -> np.ndarray:
        """Values of φ (default: the domain's) at the boundary nodes"""
        field_fn = field_fn or self.domain.phi
        return self.sample(field_fn)[self.boundary]

    def describe(self) -> str:
        return f"{self.kind}{self.shape} on {self.domain.describe()}"

    # ------------------------------------------------------------------
    # Stencils
    # ------------------------------------------------------------------

    def _wrap(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Full index of (i, j), reflecting row −1 through the pole and wrapping θ"""
        na, nb = self.shape
        i = np.asarray(i).copy()
        j = np.asarray(j).copy()
        if self.pole:
            below = i < 0
            i[below] = 0
            if self.two_dimensional:
                j[below] = j[below] + nb // 2
        if self.periodic:
            j = np.mod(j, nb)
        return i * nb + j

    def _build_neighbours(self) -> None:
        nb = self.shape[1]
        i, j = np.divmod(self.interior, nb)
        offsets = {'E': (1, 0), 'W': (-1, 0)}
        if self.two_dimensional:
            offsets.update({
                'N': (0, 1), 'S': (0, -1),
                'NE': (1, 1), 'NW': (-1, 1), 'SE': (1, -1), 'SW': (-1, -1),
            })
        self.neighbours: Dict[str, np.ndarray] = {
            key: self._wrap(i + di, j + dj) for key, (di, dj) in offsets.items()
        }

    def sparsity(self) -> sp.csc_matrix:
        """Boolean pattern of the residual Jacobian on the interior unknowns"""
        rows = [np.arange(self.interior.size)]
        cols = [np.arange(self.interior.size)]
        for full in self.neighbours.values():
            pos = self.position[full]
            keep = pos >= 0
            rows.append(np.flatnonzero(keep))
            cols.append(pos[keep])
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        pattern = sp.coo_matrix((np.ones(rows.size, dtype=bool), (rows, cols)),
                                shape=(self.interior.size, self.interior.size))
        return pattern.tocsc()

    # ------------------------------------------------------------------
    # Control volumes and face weights
    # ------------------------------------------------------------------

    def _measure_density(self, a):
        """ϱ ξ^{n−1}: the radial density of ϱ dℙ"""
        return self.rho(a) * np.power(self.xi(a), self.n - 1)

    def _integrate_density(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        x, w = np.polynomial.legendre.leggauss(_GAUSS_POINTS)
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        pts = mid[:, None] + half[:, None] * x[None, :]
        return (half[:, None] * w[None, :] * self._measure_density(pts)).sum(axis=1)

    def _build_weights(self) -> None:
        lo_a, hi_a = self.domain.primary_range
        a = self.A
        a_lo = np.clip(a - 0.5 * self.da, lo_a, hi_a)
        a_hi = np.clip(a + 0.5 * self.da, lo_a, hi_a)
        if self.kind == GridKind.CARTESIAN:
            y0, y1 = self.domain.bounds[2:]
            b_len = np.clip(self.B + 0.5 * self.db, y0, y1) - np.clip(self.B - 0.5 * self.db, y0, y1)
        else:
            b_len = np.full(self.size, self.db)

        # ϱ dℙ quadrature weight of every node (half cells on Γ)
        self.node_weights = self._integrate_density(a_lo, a_hi) * b_len

        ai = self.A[self.interior]
        self.volumes = self.node_weights[self.interior]
        self.a_east = ai + 0.5 * self.da
        self.a_west = ai - 0.5 * self.da
        self.w_east = self._measure_density(self.a_east) * self.db
        self.w_west = self._measure_density(np.maximum(self.a_west, 0.0)) * self.db
        if self.pole:
            self.w_west = np.where(self.a_west <= 0.0, 0.0, self.w_west)
        self.f_east = self.f(self.a_east)
        self.f_west = self.f(self.a_west)
        self.f_center = self.f(ai)
        self.xi_center = np.asarray(self.xi(ai), dtype=float) + 0.0 * ai
        xi_e = np.asarray(self.xi(self.a_east), dtype=float) + 0.0 * ai
        xi_w = np.asarray(self.xi(self.a_west), dtype=float) + 0.0 * ai
        self.xi_east = np.where(xi_e > 0, xi_e, 1.0)
        self.xi_west = np.where(xi_w > 0, xi_w, 1.0)
        # flux weight of the θ (or y) faces: ϱ times face length da
        self.w_north = self.rho(ai) * self.da

    def _build_boundary_segments(self) -> None:
        na, nb = self.shape
        segments: List[BoundarySegment] = []

        def ring(i: int, sign: float) -> BoundarySegment:
            nodes = np.arange(nb) + i * nb
            r = self.a_nodes[i]
            weight = self._measure_density(r) * self.db
            return BoundarySegment(nodes, 0, sign, np.full(nb, float(weight)))

        if self.polar_chart:
            segments.append(ring(na - 1, 1.0))
            if not self.pole:
                segments.append(ring(0, -1.0))
        else:
            trap_b = np.full(nb, self.db)
            trap_b[[0, -1]] *= 0.5
            trap_a = np.full(na, self.da)
            trap_a[[0, -1]] *= 0.5
            for i, sign in ((0, -1.0), (na - 1, 1.0)):
                nodes = np.arange(nb) + i * nb
                segments.append(BoundarySegment(nodes, 0, sign, self.rho(self.a_nodes[i]) * trap_b))
            for j, sign in ((0, -1.0), (nb - 1, 1.0)):
                nodes = np.arange(na) * nb + j
                segments.append(BoundarySegment(nodes, 1, sign, self.rho(self.a_nodes) * trap_a))
        self.boundary_segments: Tuple[BoundarySegment, ...] = tuple(segments)

    # ------------------------------------------------------------------
    # Differential quantities on node values
    # ------------------------------------------------------------------

    def gradient(self, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Second-order gradient at every node in the orthonormal chart frame.

        Central differences inside, reflection through the pole, periodic in θ,
        second-order one-sided stencils on Γ.

        Returns:
            (g_a, g_b): components along e_r/e_x and e_θ/e_y
        """
        U = np.asarray(values, dtype=float).reshape(self.shape)
        na, nb = self.shape
        ga = np.empty_like(U)
        ga[1:-1] = (U[2:] - U[:-2]) / (2.0 * self.da)
        if self.pole:
            if self.two_dimensional:
                reflected = np.roll(U[0], -(nb // 2))
            else:
                reflected = U[0]
            ga[0] = (U[1] - reflected) / (2.0 * self.da)
        else:
            ga[0] = (-3.0 * U[0] + 4.0 * U[1] - U[2]) / (2.0 * self.da)
        ga[-1] = (3.0 * U[-1] - 4.0 * U[-2] + U[-3]) / (2.0 * self.da)

        gb = np.zeros_like(U)
        if self.periodic:
            xi = np.asarray(self.xi(self.a_nodes), dtype=float)[:, None]
            gb = (np.roll(U, -1, axis=1) - np.roll(U, 1, axis=1)) / (2.0 * self.db) / xi
        elif self.two_dimensional:
            gb[:, 1:-1] = (U[:, 2:] - U[:, :-2]) / (2.0 * self.db)
            gb[:, 0] = (-3.0 * U[:, 0] + 4.0 * U[:, 1] - U[:, 2]) / (2.0 * self.db)
            gb[:, -1] = (3.0 * U[:, -1] - 4.0 * U[:, -2] + U[:, -3]) / (2.0 * self.db)
        return ga.ravel(), gb.ravel()

    def gradient_norm(self, values: np.ndarray) -> np.ndarray:
        ga, gb = self.gradient(values)
        return np.hypot(ga, gb)

    def boundary_flux(self, values: np.ndarray) -> float:
        """∫_Γ ϱ⟨∇u, η_out⟩/W dΓ by the trapezoid rule with one-sided normal derivatives"""
        ga, gb = self.gradient(values)
        total = 0.0
        for seg in self.boundary_segments:
            g = (ga, gb)[seg.axis][seg.nodes]
            W = np.sqrt(self.f(self.A[seg.nodes]) + ga[seg.nodes] ** 2 + gb[seg.nodes] ** 2)
            total += float(np.sum(seg.weights * seg.sign * g / W))
        return total

    def boundary_gradient(self, values: np.ndarray) -> float:
        """sup over Γ of |∇u|"""
        return float(np.max(self.gradient_norm(values)[self.boundary]))


def build_grid(model: AmbientModel, domain: Domain, kind: str, m: int,
               m_b: Optional[int] = None) -> Grid:
    """
    Build a grid by layout name.

    Args:
        model: Ambient model
        domain: Domain with boundary data
        kind: 'radial', 'polar' or 'cartesian'
        m: Cells along the primary coordinate
        m_b: Cells along the secondary coordinate (defaults to m)
    """
    grid_kind = GridKind(kind)
    if m < 8 or (m_b is not None and m_b < 8):
        raise DomainError(f"Grid sizes must be at least 8, got {m}, {m_b}")
    if grid_kind == GridKind.RADIAL:
        return Grid.radial(model, domain, m)
    if grid_kind == GridKind.POLAR:
        return Grid.polar(model, domain, m, m_b)
    return Grid.cartesian(model, domain, m, m_b)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """One value per grid node, tagged with its meaning (u, H, W, residual, tau)"""
    grid: Grid
    values: np.ndarray
    tag: str = "u"

    def __post_init__(self):
        values = np.array(self.values, dtype=float).ravel()
        if values.size != self.grid.size:
            raise DomainError(
                f"Field '{self.tag}' has {values.size} values for {self.grid.size} nodes"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError(f"Field '{self.tag}' contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @classmethod
    def from_function(cls, grid: Grid, field_fn, tag: str = "u") -> "ScalarField":
        """Sample a closed-form field (anything called as field(a, b, polar=...))"""
        return cls(grid, grid.sample(field_fn), tag)

    @property
    def interior_values(self) -> np.ndarray:
        return self.values[self.grid.interior]

    @property
    def boundary_values(self) -> np.ndarray:
        return self.values[self.grid.boundary]

    def as_array(self) -> np.ndarray:
        """Values reshaped to (rows, columns) of the grid"""
        return self.values.reshape(self.grid.shape)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        return ScalarField(self.grid, self.values - other.values, self.tag)
