"""
Damped Newton iteration for the discrete Dirichlet problem.

The Jacobian is assembled by finite differences of the residual. Columns
that never share a row of the stencil pattern are grouped by a greedy
coloring and perturbed together, so one Jacobian costs one residual
evaluation per color (9 on two-dimensional grids, 3 on radial grids).

A guess far from the solution is first smoothed by lagged-coefficient
sweeps, in which W is frozen and each step is a linear solve.
"""

import logging
import weakref
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from kgraph_toolkit.core.errors import DivergenceError, NonConvergenceError
from kgraph_toolkit.geometry.models import AmbientModel
from kgraph_toolkit.mce.equation import (
    CurvatureInput,
    _check_model,
    divergence_operator,
    sample_curvature,
)
from kgraph_toolkit.mce.grid import Grid, ScalarField

ResidualFn = Callable[[np.ndarray], np.ndarray]

_JACOBIANS: "weakref.WeakKeyDictionary[Grid, dict]" = weakref.WeakKeyDictionary()


@dataclass(frozen=True)
class NewtonOptions:
    """Newton solver settings"""
    tol: float = 1e-10
    max_iter: int = 50
    damping: bool = True
    max_halvings: int = 20
    fd_step: float = 1e-7
    armijo: float = 1e-4
    # stagnation below this relative update counts as converged at the round-off floor
    roundoff: float = 1e-13
    roundoff_residual_factor: float = 100.0
    # largest update, relative to 1 + |x|, taken in one iteration
    max_step: Optional[float] = 1.0
    # lagged-coefficient sweeps before Newton: always with picard_first, else after a failed attempt
    picard_first: bool = False
    picard_fallback: bool = True
    picard_max: int = 100
    picard_tol: float = 1e-6

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.max_step is not None and self.max_step <= 0:
            raise ValueError(f"max_step must be positive, got {self.max_step}")
        if self.picard_max < 0:
            raise ValueError(f"picard_max must be >= 0, got {self.picard_max}")


@dataclass(frozen=True, eq=False)
class NewtonResult:
    """Converged solution and iteration record"""
    u: ScalarField
    iterations: int
    residual_norm: float
    at_roundoff: bool = False


def color_columns(pattern: sp.spmatrix) -> np.ndarray:
    """
    Greedy coloring of the columns of a sparsity pattern.

    Two columns get different colors whenever they have a nonzero in a
    common row.
    """
    P = sp.csc_matrix(pattern, dtype=np.int8)
    conflicts = (P.T @ P).tocsr()
    n = P.shape[1]
    colors = np.full(n, -1, dtype=int)
    for col in range(n):
        neighbours = conflicts.indices[conflicts.indptr[col]:conflicts.indptr[col + 1]]
        used = set(colors[neighbours][colors[neighbours] >= 0].tolist())
        color = 0
        while color in used:
            color += 1
        colors[col] = color
    return colors


class ColoredJacobian:
    """Finite-difference Jacobian of a residual with a fixed sparsity pattern"""

    def __init__(self, pattern: sp.spmatrix, fd_step: float = 1e-7):
        P = sp.csc_matrix(pattern, dtype=bool)
        P.sort_indices()
        self.shape = P.shape
        self.fd_step = fd_step
        self.rows = P.indices.copy()
        self.cols = np.repeat(np.arange(P.shape[1]), np.diff(P.indptr))
        self.colors = color_columns(P)
        self.n_colors = int(self.colors.max()) + 1 if self.colors.size else 0
        entry_colors = self.colors[self.cols]
        self._groups = [
            (np.flatnonzero(self.colors == c), np.flatnonzero(entry_colors == c))
            for c in range(self.n_colors)
        ]

    def evaluate(self, F: ResidualFn, x: np.ndarray, Fx: np.ndarray) -> sp.csc_matrix:
        h = self.fd_step * (1.0 + np.abs(x))
        data = np.empty(self.rows.size)
        for columns, entries in self._groups:
            xp = x.copy()
            xp[columns] += h[columns]
            dF = F(xp) - Fx
            data[entries] = dF[self.rows[entries]] / h[self.cols[entries]]
        return sp.csc_matrix((data, (self.rows, self.cols)), shape=self.shape)


def jacobian_for(grid: Grid, fd_step: float = 1e-7) -> ColoredJacobian:
    """Colored Jacobian of a grid's residual, cached per grid"""
    cache = _JACOBIANS.setdefault(grid, {})
    if fd_step not in cache:
        cache[fd_step] = ColoredJacobian(grid.sparsity(), fd_step)
    return cache[fd_step]


def solve_system(F: ResidualFn, jacobian: ColoredJacobian, x0: np.ndarray,
                 opts: NewtonOptions,
                 logger: Optional[logging.Logger] = None) -> Tuple[np.ndarray, int, float, bool]:
    """
    Newton iteration on F(x) = 0 with Armijo step halving.

    Updates are capped at max_step·(1 + |x|∞) before the line search.

    Returns:
        (x, iterations, residual norm, stopped at the round-off floor)

    Raises:
        DivergenceError: If the residual becomes non-finite
        NonConvergenceError: If max_iter steps do not reach tol
    """
    logger = logger or logging.getLogger('kgraph_toolkit.mce.newton')
    x = np.array(x0, dtype=float)
    Fx = F(x)
    if not np.all(np.isfinite(Fx)):
        raise DivergenceError("Residual is not finite at the initial guess", x, float('nan'), 0)
    norm = float(np.max(np.abs(Fx))) if Fx.size else 0.0
    iterations = 0

    while norm > opts.tol:
        if iterations >= opts.max_iter:
            raise NonConvergenceError(
                f"Newton did not converge in {opts.max_iter} iterations (|Q| = {norm:.3e})",
                x, norm, iterations,
            )
        J = jacobian.evaluate(F, x, Fx)
        try:
            dx = np.atleast_1d(spsolve(J, -Fx))
        except RuntimeError as e:
            raise DivergenceError(f"Newton system could not be factorized: {e}",
                                  x, norm, iterations) from e
        if not np.all(np.isfinite(dx)):
            raise DivergenceError("Newton update is not finite (singular Jacobian)", x, norm, iterations)
        if opts.max_step is not None:
            cap = opts.max_step * (1.0 + float(np.max(np.abs(x))))
            largest = float(np.max(np.abs(dx)))
            if largest > cap:
                dx *= cap / largest

        merit = float(np.dot(Fx, Fx))
        t = 1.0
        x_new, F_new = x + dx, F(x + dx)
        if opts.damping:
            for _ in range(opts.max_halvings):
                if np.all(np.isfinite(F_new)) and np.dot(F_new, F_new) <= (1.0 - opts.armijo * t) * merit:
                    break
                t *= 0.5
                x_new = x + t * dx
                F_new = F(x_new)
        if not np.all(np.isfinite(F_new)):
            raise DivergenceError(
                f"Residual became non-finite after {iterations + 1} iterations", x, norm, iterations + 1
            )

        step = t * float(np.max(np.abs(dx)))
        iterations += 1
        x, Fx = x_new, F_new
        norm = float(np.max(np.abs(Fx)))
        logger.debug(f"Newton {iterations}: |Q| = {norm:.3e}, step = {step:.3e}, t = {t:g}")

        if (norm > opts.tol and step <= opts.roundoff * (1.0 + float(np.max(np.abs(x))))
                and norm <= opts.roundoff_residual_factor * opts.tol):
            logger.debug(f"Newton stagnated at the round-off floor, |Q| = {norm:.3e}")
            return x, iterations, norm, True

    return x, iterations, norm, False


def picard_sweeps(F: ResidualFn, F_lagged: Callable[[np.ndarray, np.ndarray], np.ndarray],
                  jacobian: ColoredJacobian, x0: np.ndarray, opts: NewtonOptions,
                  logger: Optional[logging.Logger] = None) -> np.ndarray:
    """
    Lagged-coefficient iteration: x_{k+1} solves the problem linearised with W frozen at x_k.

    Every sweep is a linear two-point-flux problem, so a rough guess is
    smoothed in one step. Returns the iterate with the smallest residual F.
    """
    logger = logger or logging.getLogger('kgraph_toolkit.mce.newton')
    x = np.array(x0, dtype=float)
    best, best_norm = x, float(np.max(np.abs(F(x)), initial=0.0))
    if not np.isfinite(best_norm):
        best_norm = np.inf
    for sweep in range(1, opts.picard_max + 1):
        def G(v: np.ndarray, frozen: np.ndarray = x) -> np.ndarray:
            return F_lagged(v, frozen)

        Gx = G(x)
        try:
            x_new = x - np.atleast_1d(spsolve(jacobian.evaluate(G, x, Gx), Gx))
        except RuntimeError as e:
            logger.debug(f"Picard sweep {sweep} could not be factorized: {e}")
            break
        if not np.all(np.isfinite(x_new)):
            break
        change = float(np.max(np.abs(x_new - x), initial=0.0))
        x = x_new
        norm = float(np.max(np.abs(F(x)), initial=0.0))
        if norm < best_norm:
            best, best_norm = x, norm
        logger.debug(f"Picard {sweep}: |Q| = {norm:.3e}, change = {change:.3e}")
        if change <= opts.picard_tol * (1.0 + float(np.max(np.abs(x), initial=0.0))):
            break
    return best


def newton_solve(model: Optional[AmbientModel], grid: Grid, H: CurvatureInput,
                 phi=None, u0=None, opts: Optional[NewtonOptions] = None,
                 logger: Optional[logging.Logger] = None) -> NewtonResult:
    """
    Solve Q[u] = 0 with u = φ on the boundary nodes.

    Args:
        model: Ambient model (or None to use the grid's)
        grid: Discretization
        H: Prescribed mean curvature (constant, field, or node values)
        phi: Boundary data; a closed-form field, boundary node values, or None
            for the domain's own φ
        u0: Initial guess (ScalarField or node values); zero in the interior if None
        opts: Solver options

    Returns:
        NewtonResult with the converged field

    Raises:
        DivergenceError, NonConvergenceError
    """
    _check_model(model, grid)
    opts = opts or NewtonOptions()
    logger = logger or logging.getLogger('kgraph_toolkit.mce.newton')

    if phi is None or callable(phi):
        boundary = grid.boundary_data(phi)
    else:
        boundary = np.asarray(phi, dtype=float).ravel()
    nH = grid.n * sample_curvature(grid, H)[grid.interior]

    full = np.zeros(grid.size)
    if u0 is not None:
        full[:] = u0.values if isinstance(u0, ScalarField) else np.asarray(u0, dtype=float).ravel()
    full[grid.boundary] = boundary

    def embed(x: np.ndarray) -> np.ndarray:
        v = full.copy()
        v[grid.interior] = x
        return v

    def F(x: np.ndarray) -> np.ndarray:
        return divergence_operator(grid, embed(x)) - nH

    def F_lagged(x: np.ndarray, frozen: np.ndarray) -> np.ndarray:
        return divergence_operator(grid, embed(x), frozen=embed(frozen)) - nH

    jacobian = jacobian_for(grid, opts.fd_step)
    x0 = full[grid.interior].copy()
    if opts.picard_first:
        x0 = picard_sweeps(F, F_lagged, jacobian, x0, opts, logger)
    try:
        try:
            x, iterations, norm, at_roundoff = solve_system(F, jacobian, x0, opts, logger)
        except NonConvergenceError as e:
            if opts.picard_first or not opts.picard_fallback or opts.picard_max == 0:
                raise
            logger.debug(f"{e}; restarting from lagged-coefficient sweeps")
            x1 = picard_sweeps(F, F_lagged, jacobian, x0, opts, logger)
            x, iterations, norm, at_roundoff = solve_system(F, jacobian, x1, opts, logger)
    except NonConvergenceError as e:
        if e.last_iterate is not None and np.all(np.isfinite(e.last_iterate)):
            last = full.copy()
            last[grid.interior] = e.last_iterate
            e.last_iterate = ScalarField(grid, last, "u")
        raise

    full[grid.interior] = x
    logger.debug(f"Newton converged on {grid.describe()} in {iterations} iterations, "
                 f"|Q| = {norm:.3e}")
    return NewtonResult(u=ScalarField(grid, full, "u"), iterations=iterations,
                        residual_norm=norm, at_roundoff=at_roundoff)
