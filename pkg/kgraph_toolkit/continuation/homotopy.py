"""
Continuity method in σ for the Dirichlet problem.

The family Q_σ[u] = a^{ij}u_{i;j} + b − nσH = 0, u|_Γ = σφ starts from the
exact solution u ≡ 0 at σ = 0 and is followed to σ = 1 with warm-started
Newton solves and an adaptive step.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence, Union

import numpy as np

from kgraph_toolkit.core.errors import ContinuationStallError, DomainError, NonConvergenceError
from kgraph_toolkit.core.models import HomotopyStep
from kgraph_toolkit.geometry.models import AmbientModel
from kgraph_toolkit.mce.equation import CurvatureInput, _check_model, divergence_operator, sample_curvature
from kgraph_toolkit.mce.grid import Grid, ScalarField
from kgraph_toolkit.mce.newton import NewtonOptions, newton_solve


@dataclass(frozen=True)
class HomotopyOptions:
    """Step control of the continuation"""
    dsigma: float = 0.1
    dsigma_max: float = 0.25
    dsigma_min: float = 1e-4
    growth: float = 1.5
    fast_iterations: int = 3
    newton: NewtonOptions = field(default_factory=NewtonOptions)

    def __post_init__(self):
        if not 0 < self.dsigma_min <= self.dsigma <= self.dsigma_max:
            raise ValueError(
                f"Need 0 < dsigma_min <= dsigma <= dsigma_max, got "
                f"{self.dsigma_min}, {self.dsigma}, {self.dsigma_max}"
            )


@dataclass
class HomotopyState:
    """Current point of the continuation and the record of attempted steps"""
    sigma: float
    u: ScalarField
    dsigma: float
    history: List[HomotopyStep] = field(default_factory=list)

    @property
    def accepted_steps(self) -> List[HomotopyStep]:
        return [step for step in self.history if step.accepted]

    @property
    def complete(self) -> bool:
        return self.sigma >= 1.0


def _accepted(sigma: float, u: ScalarField, iterations: int, residual: float) -> HomotopyStep:
    grad = u.grid.gradient_norm(u.values)
    return HomotopyStep(sigma, iterations, residual, u.max_abs(), float(np.max(grad)))


def continuity_solve(model: Optional[AmbientModel], grid: Grid, H: CurvatureInput, phi=None,
                     opts: Optional[HomotopyOptions] = None,
                     logger: Optional[logging.Logger] = None) -> HomotopyState:
    """
    Follow the σ-family from u ≡ 0 at σ = 0 to σ = 1.

    Args:
        model: Ambient model (or None to use the grid's)
        grid: Discretization
        H: Prescribed mean curvature
        phi: Boundary data as a closed-form field, boundary node values, or None
            for the domain's own φ
        opts: Step control

    Returns:
        Final HomotopyState; `u` is the σ = 1 solution

    Raises:
        ContinuationStallError: If the step drops below dsigma_min
    """
    _check_model(model, grid)
    opts = opts or HomotopyOptions()
    logger = logger or logging.getLogger('kgraph_toolkit.continuation.homotopy')

    if phi is None or callable(phi):
        boundary = grid.boundary_data(phi)
    else:
        boundary = np.asarray(phi, dtype=float).ravel()
    H_values = sample_curvature(grid, H)

    state = HomotopyState(sigma=0.0, u=ScalarField(grid, np.zeros(grid.size), "u"), dsigma=opts.dsigma)

    # u ≡ 0 may already solve the σ = 1 problem
    zero_residual = divergence_operator(grid, np.zeros(grid.size)) - grid.n * H_values[grid.interior]
    if not np.any(boundary) and float(np.max(np.abs(zero_residual), initial=0.0)) <= opts.newton.tol:
        state.sigma = 1.0
        state.history.append(_accepted(1.0, state.u, 0, float(np.max(np.abs(zero_residual), initial=0.0))))
        logger.info("u = 0 solves the problem; homotopy finished in one step")
        return state

    while state.sigma < 1.0:
        target = min(1.0, state.sigma + state.dsigma)
        if 1.0 - target <= 1e-12:
            target = 1.0
        try:
            result = newton_solve(None, grid, target * H_values, target * boundary,
                                  u0=state.u, opts=opts.newton)
        except NonConvergenceError as e:
            state.history.append(HomotopyStep(target, e.iterations, e.residual_norm,
                                              float('nan'), float('nan'), accepted=False))
            state.dsigma *= 0.5
            logger.debug(f"Newton failed at sigma={target:.6g}; dsigma -> {state.dsigma:.3g}")
            if state.dsigma < opts.dsigma_min:
                raise ContinuationStallError(
                    f"Continuation stalled at sigma = {state.sigma:.6g} "
                    f"(step below {opts.dsigma_min:g})",
                    last_sigma=state.sigma, history=state.history, last_solution=state.u,
                ) from e
            continue

        state.sigma = target
        state.u = result.u
        state.history.append(_accepted(target, result.u, result.iterations, result.residual_norm))
        logger.info(f"sigma = {target:.6g} accepted after {result.iterations} Newton iterations")
        if result.iterations <= opts.fast_iterations:
            state.dsigma = min(state.dsigma * opts.growth, opts.dsigma_max)

    return state


@dataclass
class UniquenessProbe:
    """Solutions reached from several initial guesses"""
    solutions: List[ScalarField]
    max_difference: float
    tolerance: float = 1e-8

    @property
    def unique(self) -> bool:
        return self.max_difference <= self.tolerance


def random_guess(grid: Grid, amplitude: float = 0.1, seed: int = 0) -> ScalarField:
    """Uniform random field in [−amplitude, amplitude] (reproducible by seed)"""
    rng = np.random.default_rng(seed)
    return ScalarField(grid, rng.uniform(-amplitude, amplitude, grid.size), "u")


def uniqueness_probe(model: Optional[AmbientModel], grid: Grid, H: CurvatureInput, phi,
                     initial_guesses: Sequence[Union[ScalarField, np.ndarray, float]],
                     opts: Optional[NewtonOptions] = None,
                     logger: Optional[logging.Logger] = None) -> UniquenessProbe:
    """
    Solve from every initial guess and compare the results pairwise.

    By default each solve starts with lagged-coefficient sweeps, which smooth
    a rough guess before Newton takes over.

    Raises:
        DomainError: If fewer than two guesses are given
        NonConvergenceError: If any solve fails
    """
    _check_model(model, grid)
    if len(initial_guesses) < 2:
        raise DomainError("uniqueness_probe needs at least two initial guesses")
    opts = opts or NewtonOptions(max_iter=200, picard_first=True)
    logger = logger or logging.getLogger('kgraph_toolkit.continuation.homotopy')

    solutions = []
    for guess in initial_guesses:
        if isinstance(guess, (int, float)):
            guess = np.full(grid.size, float(guess))
        solutions.append(newton_solve(None, grid, H, phi, u0=guess, opts=opts).u)

    max_diff = max(
        float(np.max(np.abs(a.values - b.values))) for a, b in combinations(solutions, 2)
    )
    outcome = UniquenessProbe(solutions, max_diff)
    if not outcome.unique:
        logger.warning(f"Initial guesses reached different solutions (max difference {max_diff:.3e})")
    return outcome
