"""
Main CLI for killing-graph-toolkit.

Provides commands for:
- Solving the Dirichlet problem with homotopy continuation
- Checking the hypotheses of the existence theorems
- Integrating rotational CMC profiles
- Manufactured-solution refinement studies
- Flux identity checks on computed solutions

Exit codes: 0 ok, 1 check failed, 2 solver failure, 3 configuration error.
"""

import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import click
import numpy as np

from kgraph_toolkit import __version__
from kgraph_toolkit.barriers import (
    boundary_gradient_barrier,
    check_theorem_hypotheses,
    choose_barrier_constants,
    verify_height,
)
from kgraph_toolkit.continuation import continuity_solve
from kgraph_toolkit.core.errors import (
    BarrierConstructionError,
    ConfigError,
    ContinuationStallError,
    DomainError,
    KGraphError,
    NonConvergenceError,
    UnboundedProfileError,
)
from kgraph_toolkit.core.models import HomotopyStep
from kgraph_toolkit.mce import build_grid, coefficients, manufactured_study, newton_solve
from kgraph_toolkit.mce.grid import Grid, ScalarField
from kgraph_toolkit.reports import (
    coefficient_entries,
    hypothesis_entries,
    write_convergence_csv,
    write_homotopy_csv,
    write_profile_csv,
    write_report,
    write_solution,
)
from kgraph_toolkit.rotational import (
    RotationalModel,
    graph_flux_check,
    integrate_cmc_sphere,
    serrin_bound_F,
)
from kgraph_toolkit.specs import ConfigValidator, OutputFormat, RunConfig

logger = logging.getLogger('kgraph_toolkit')

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_SOLVER = 2
EXIT_CONFIG = 3


def _fail(message: str, code: int) -> None:
    """Single-line diagnostic on stderr, then exit"""
    click.echo(f"✗ Error: {' '.join(str(message).split())}", err=True)
    sys.exit(code)


def _configure_logging(level: str, verbose: bool) -> None:
    logging.basicConfig(level=logging.WARNING, format='%(message)s', force=True)
    logging.getLogger('kgraph_toolkit').setLevel(logging.DEBUG if verbose else level)


def _load_config(config_path: str, grid_size: Optional[int], verbose: bool) -> RunConfig:
    """Load, validate and apply the --grid override; exits with 3 on any problem"""
    try:
        config = ConfigValidator.validate_file(config_path)
        if grid_size is not None:
            data = config.model_dump()
            data['solver']['m'] = grid_size
            if data['solver']['m_b'] is not None:
                data['solver']['m_b'] = grid_size
            config = ConfigValidator.validate_dict(data)
    except ConfigError as e:
        _fail(e, EXIT_CONFIG)
    _configure_logging(config.logging.level, verbose)
    return config


def _output_dir(config: RunConfig, out_dir: Optional[str]) -> Path:
    path = Path(out_dir or config.output.directory)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _wants(config: RunConfig, fmt: OutputFormat) -> bool:
    return fmt in config.output.formats


def _build(config: RunConfig):
    """Model, domain, H and grid; exits with 3 if they do not fit together"""
    try:
        model = config.build_model()
        domain = config.build_domain()
        H = config.build_H()
        grid = build_grid(model, domain, config.solver.grid.value, config.solver.m, config.solver.m_b)
    except (DomainError, ValueError) as e:
        _fail(e, EXIT_CONFIG)
    return model, domain, H, grid


def _solve(config: RunConfig, grid: Grid, H) -> Tuple[ScalarField, List[HomotopyStep]]:
    """
    Solve on the configured grid, by continuation or by a single Newton solve.

    Raises:
        ContinuationStallError, NonConvergenceError
    """
    if config.solver.homotopy:
        state = continuity_solve(None, grid, H, opts=config.solver.homotopy_options())
        return state.u, state.history

    result = newton_solve(None, grid, H, opts=config.solver.newton_options())
    grad = float(np.max(grid.gradient_norm(result.u.values)))
    step = HomotopyStep(1.0, result.iterations, result.residual_norm, result.u.max_abs(), grad)
    return result.u, [step]


def _solve_or_exit(config: RunConfig, grid: Grid, H, out: Path) -> Tuple[ScalarField, List[HomotopyStep]]:
    try:
        return _solve(config, grid, H)
    except ContinuationStallError as e:
        if _wants(config, OutputFormat.CSV):
            write_homotopy_csv(e.history, out / 'homotopy.csv')
        _fail(e, EXIT_SOLVER)
    except NonConvergenceError as e:
        _fail(e, EXIT_SOLVER)


def _barrier_entries(model, domain, H, grid: Grid, u: ScalarField) -> dict:
    """Height and boundary-gradient barrier verification; failures are reported, not raised"""
    entries = {}
    sup_phi = float(np.max(u.boundary_values))
    inf_phi = float(np.min(u.boundary_values))
    try:
        params = choose_barrier_constants(model, domain, H)
        check = verify_height(u, model, domain, sup_phi, inf_phi, params)
        entries.update({
            'height_C': params.C,
            'height_A': params.A,
            'height_margin': check.margin,
            'height_violations': check.violations,
            'height_contained': check.passed,
        })
    except (BarrierConstructionError, DomainError) as e:
        logger.warning(f"Height barrier: {e}")
        entries['height_barrier'] = f"unavailable: {' '.join(str(e).split())}"

    try:
        result = boundary_gradient_barrier(model, domain, domain.phi, H, grid, u=u)
        for key, value in result.to_dict().items():
            entries[f"gradient_{key}"] = value
    except (BarrierConstructionError, DomainError) as e:
        logger.warning(f"Boundary-gradient barrier: {e}")
        entries['gradient_barrier'] = f"unavailable: {' '.join(str(e).split())}"
    return entries


# ============================================================================
# CLI group
# ============================================================================

@click.group()
@click.version_option(version=__version__, prog_name='killing-graph-toolkit')
def cli():
    """
    Killing Graph Toolkit - prescribed mean curvature Killing graphs in warped products.

    \b
    Workflow:
    1. Check the existence hypotheses:  kgraph check --config run.yaml
    2. Solve the Dirichlet problem:     kgraph solve --config run.yaml --out results/
    3. Verify the discretization:       kgraph mms --config mms.yaml
    """
    pass


def common_options(func):
    func = click.option('-v', '--verbose', is_flag=True, help='Debug logging')(func)
    func = click.option('--grid', 'grid_size', type=int, help='Override solver.m (and solver.m_b)')(func)
    func = click.option('--out', 'out_dir', type=click.Path(file_okay=False),
                        help='Output directory (default: output.directory)')(func)
    func = click.option('--config', 'config_path', type=click.Path(), required=True,
                        help='Run configuration (.yaml or .ini)')(func)
    return func


# ============================================================================
# Solver Commands
# ============================================================================

@cli.command()
@common_options
@click.option('--require-hypotheses', is_flag=True,
              help='Exit with 1 before solving if the configured theorem hypotheses fail')
def solve(config_path, out_dir, grid_size, verbose, require_hypotheses):
    """
    Solve the Dirichlet problem and verify the solution.

    \b
    Writes: solution.kgraph, coefficients.txt, homotopy.csv, barriers.txt, flux.txt
    (and hypotheses.txt when problem.theorem is set).

    \b
    Example:
        kgraph solve --config config/hemisphere.yaml --out results/
    """
    config = _load_config(config_path, grid_size, verbose)
    model, domain, H, grid = _build(config)
    out = _output_dir(config, out_dir)
    click.echo(f"Solving on {grid.describe()}: {model.describe()}, {domain.describe()}")

    try:
        if config.problem.theorem is not None:
            report = check_theorem_hypotheses(model, domain, H, config.problem.theorem,
                                              k=config.problem.k)
            write_report(hypothesis_entries(report), out / 'hypotheses.txt')
            if not report.passed:
                if require_hypotheses:
                    _fail(f"Theorem {config.problem.theorem} hypotheses fail", EXIT_CHECK_FAILED)
                logger.warning(f"Theorem {config.problem.theorem} hypotheses fail; solving anyway")

        u, history = _solve_or_exit(config, grid, H, out)

        write_solution(u, out / 'solution.kgraph')
        if _wants(config, OutputFormat.CSV):
            write_homotopy_csv(history, out / 'homotopy.csv')
        if _wants(config, OutputFormat.TXT):
            write_report(coefficient_entries(coefficients(None, u)), out / 'coefficients.txt')
            write_report(_barrier_entries(model, domain, H, grid, u), out / 'barriers.txt')
            write_report(graph_flux_check(model, domain, u, H).to_dict(), out / 'flux.txt')

        click.echo(f"✓ Solved: sup|u| = {u.max_abs():.10g} "
                   f"({len([s for s in history if s.accepted])} continuation steps)")
        click.echo(f"  Output: {out}")

    except KGraphError as e:
        _fail(e, EXIT_SOLVER)


@cli.command()
@common_options
def flux(config_path, out_dir, grid_size, verbose):
    """
    Solve, then compare both sides of the flux identity.

    \b
    Example:
        kgraph flux --config config/hemisphere.yaml
    """
    config = _load_config(config_path, grid_size, verbose)
    model, domain, H, grid = _build(config)
    out = _output_dir(config, out_dir)

    try:
        u, _ = _solve_or_exit(config, grid, H, out)
        report = graph_flux_check(model, domain, u, H)
        write_report(report.to_dict(), out / 'flux.txt')
    except KGraphError as e:
        _fail(e, EXIT_SOLVER)

    click.echo(f"✓ Flux: lhs = {report.lhs:.12g}, rhs = {report.rhs:.12g}")
    click.echo(f"  Relative residual: {report.relative_residual:.3e}")


# ============================================================================
# Check Commands
# ============================================================================

@cli.command()
@common_options
@click.option('--theorem', type=click.IntRange(1, 3), help='Override problem.theorem')
def check(config_path, out_dir, grid_size, verbose, theorem):
    """
    Check the hypotheses of an existence theorem.

    \b
    Example:
        kgraph check --config config/theorem1.yaml
    """
    config = _load_config(config_path, grid_size, verbose)
    theorem = theorem or config.problem.theorem
    if theorem is None:
        _fail("No theorem given (problem.theorem or --theorem)", EXIT_CONFIG)
    try:
        model, domain, H = config.build_model(), config.build_domain(), config.build_H()
        report = check_theorem_hypotheses(model, domain, H, theorem, k=config.problem.k)
    except DomainError as e:
        _fail(e, EXIT_CONFIG)

    out = _output_dir(config, out_dir)
    write_report(hypothesis_entries(report), out / 'hypotheses.txt')

    for condition in report.conditions:
        mark = '✓' if condition.passed else '✗'
        click.echo(f"  {mark} {condition.name}: {condition.value:.10g} {condition.relation} "
                   f"{condition.bound:.10g}")
    click.echo(f"Theorem {theorem}: {report.verdict.value}")
    if not report.passed:
        sys.exit(EXIT_CHECK_FAILED)


@cli.command()
@common_options
def rotational(config_path, out_dir, grid_size, verbose):
    """
    Integrate the rotational CMC profile and evaluate F(r0).

    \b
    Writes: rotational.txt and profile.csv

    \b
    Example:
        kgraph rotational --config config/rotational_sphere.yaml
    """
    config = _load_config(config_path, grid_size, verbose)
    H0 = config.problem.profile_curvature
    if H0 is None:
        _fail("rotational runs need a constant H or problem.H0", EXIT_CONFIG)
    try:
        rot = RotationalModel.from_ambient(config.build_model())
        domain = config.build_domain()
    except DomainError as e:
        _fail(e, EXIT_CONFIG)

    out = _output_dir(config, out_dir)
    r0 = domain.enclosing_radius
    entries = {'H0': H0, 'r0': r0, 'F_r0': serrin_bound_F(rot, r0)}
    try:
        curve = integrate_cmc_sphere(rot, H0, samples=config.problem.profile_samples,
                                     method=config.problem.profile_method)
    except UnboundedProfileError as e:
        entries['profile'] = f"unbounded: {' '.join(str(e).split())}"
        write_report(entries, out / 'rotational.txt')
        _fail(e, EXIT_SOLVER)

    sphere = curve.full_sphere()
    entries.update({
        'method': curve.method,
        'turning_radius': curve.turning_radius,
        'turning_height': curve.turning_height,
        'sphere_height': sphere.height,
        'max_arc_length_residual': float(np.max(np.abs(curve.arc_length_residuals()))),
        'max_flux_residual': float(np.max(np.abs(curve.flux_residuals()))),
        'turning_identity_residual': curve.turning_identity_residual(),
    })
    write_report(entries, out / 'rotational.txt')
    if _wants(config, OutputFormat.CSV):
        write_profile_csv(curve, out / 'profile.csv')

    click.echo(f"✓ Profile: turning radius {curve.turning_radius:.12g}, F(r0) = {entries['F_r0']:.12g}")


@cli.command()
@common_options
def mms(config_path, out_dir, grid_size, verbose):
    """
    Refinement study against the manufactured solution problem.exact.

    \b
    Writes: convergence.csv

    \b
    Example:
        kgraph mms --config config/mms_warped.yaml
    """
    config = _load_config(config_path, grid_size, verbose)
    if config.problem.exact is None:
        _fail("mms runs need problem.exact", EXIT_CONFIG)
    try:
        model, domain = config.build_model(), config.build_domain()
        exact = config.problem.exact.build()
    except DomainError as e:
        _fail(e, EXIT_CONFIG)

    out = _output_dir(config, out_dir)
    try:
        rows = manufactured_study(model, domain, exact, config.solver.grid.value,
                                  config.solver.mms_sizes, opts=config.solver.newton_options())
    except DomainError as e:
        _fail(e, EXIT_CONFIG)
    except KGraphError as e:
        _fail(e, EXIT_SOLVER)

    if _wants(config, OutputFormat.CSV):
        write_convergence_csv(rows, out / 'convergence.csv')
    for row in rows:
        order = '-' if row.observed_order is None else f"{row.observed_order:.3f}"
        click.echo(f"  h = {row.h:.6g}  max error = {row.max_error:.3e}  order = {order}")
    click.echo(f"✓ Refinement study on {len(rows)} grids")


def main():
    """Main entry point"""
    cli()


if __name__ == '__main__':
    main()
