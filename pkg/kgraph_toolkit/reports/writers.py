"""
Deterministic output files.

All numbers are written with 17 significant digits. CSV headers:

    homotopy     sigma,iterations,residual,sup_u,sup_grad_u
    profile      u,s,r,sdot,rdot,flux_residual
    convergence  h,max_error,observed_order

Solution files:

    KGRAPH 1
    <kind> <n> <m_r> <m_theta> <r0>
    <one node value per line, row-major>
"""

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

import numpy as np
import pandas as pd

from kgraph_toolkit.core.errors import DomainError
from kgraph_toolkit.core.models import ConvergenceRow, HomotopyStep, HypothesisReport
from kgraph_toolkit.mce.equation import Coefficients
from kgraph_toolkit.mce.grid import GridKind, ScalarField
from kgraph_toolkit.rotational.profile import ProfileCurve

logger = logging.getLogger('kgraph_toolkit.reports.writers')

FLOAT_FORMAT = '%.17g'
SOLUTION_MAGIC = 'KGRAPH 1'

HOMOTOPY_COLUMNS = ['sigma', 'iterations', 'residual', 'sup_u', 'sup_grad_u']
PROFILE_COLUMNS = ['u', 's', 'r', 'sdot', 'rdot', 'flux_residual']
CONVERGENCE_COLUMNS = ['h', 'max_error', 'observed_order']

PathLike = Union[str, Path]


def format_number(value: float) -> str:
    return FLOAT_FORMAT % value


def format_value(value: Any) -> str:
    """Render a report value: floats at 17 digits, booleans lower-case, enums by value"""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_number(float(value))
    return str(value)


def _write_frame(rows: List[Dict[str, Any]], columns: List[str], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df = pd.DataFrame(rows, columns=columns)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep='nan', lineterminator='\n')
    logger.info(f"Wrote {path}")
    return path


# ============================================================================
# Solution files
# ============================================================================

@dataclass(frozen=True)
class SolutionHeader:
    kind: str
    n: int
    m_r: int
    m_theta: int
    r0: float


def solution_header(u: ScalarField) -> SolutionHeader:
    """Header fields of a solution; unused fields are 0"""
    grid = u.grid
    rows, cols = grid.shape
    r0 = grid.domain.enclosing_radius if grid.polar_chart else 0.0
    if grid.kind == GridKind.RADIAL:
        return SolutionHeader(str(grid.kind), grid.n, rows - 1, 0, r0)
    if grid.kind == GridKind.POLAR:
        return SolutionHeader(str(grid.kind), grid.n, rows - 1, cols, r0)
    return SolutionHeader(str(grid.kind), grid.n, rows - 1, cols - 1, r0)


def write_solution(u: ScalarField, path: PathLike) -> Path:
    """Write node values row-major under the two header lines"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = solution_header(u)
    lines = [
        SOLUTION_MAGIC,
        f"{header.kind} {header.n} {header.m_r} {header.m_theta} {format_number(header.r0)}",
    ]
    lines.extend(format_number(v) for v in u.values)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write('\n'.join(lines) + '\n')
    logger.info(f"Wrote {path}")
    return path


def read_solution(path: PathLike):
    """
    Read a solution file.

    Returns:
        (SolutionHeader, values) with values shaped (rows, columns)

    Raises:
        DomainError: If the file is not a solution file
    """
    path = Path(path)
    with open(path, 'r', encoding='utf-8') as f:
        lines = f.read().splitlines()
    if len(lines) < 2 or lines[0].strip() != SOLUTION_MAGIC:
        raise DomainError(f"{path} is not a {SOLUTION_MAGIC} solution file")
    fields = lines[1].split()
    if len(fields) != 5:
        raise DomainError(f"{path}: malformed header '{lines[1]}'")
    header = SolutionHeader(fields[0], int(fields[1]), int(fields[2]), int(fields[3]), float(fields[4]))
    values = np.array([float(line) for line in lines[2:] if line.strip()])

    rows = header.m_r + 1
    if header.kind == GridKind.RADIAL.value:
        cols = 1
    elif header.kind == GridKind.POLAR.value:
        cols = header.m_theta
    else:
        cols = header.m_theta + 1
    if values.size != rows * cols:
        raise DomainError(f"{path}: expected {rows * cols} values, found {values.size}")
    return header, values.reshape(rows, cols)


# ============================================================================
# CSV tables
# ============================================================================

def write_homotopy_csv(history: Iterable[HomotopyStep], path: PathLike) -> Path:
    """Accepted continuation steps, in order"""
    rows = [step.to_dict() for step in history if step.accepted]
    return _write_frame(rows, HOMOTOPY_COLUMNS, path)


def profile_table(curve: ProfileCurve) -> pd.DataFrame:
    return pd.DataFrame({
        'u': curve.u,
        's': curve.s,
        'r': curve.r,
        'sdot': curve.sdot,
        'rdot': curve.rdot,
        'flux_residual': curve.flux_residuals(),
    }, columns=PROFILE_COLUMNS)


def write_profile_csv(curve: ProfileCurve, path: PathLike) -> Path:
    return _write_frame(profile_table(curve).to_dict('records'), PROFILE_COLUMNS, path)


def write_convergence_csv(rows: Sequence[ConvergenceRow], path: PathLike) -> Path:
    return _write_frame([row.to_dict() for row in rows], CONVERGENCE_COLUMNS, path)


# ============================================================================
# key = value reports
# ============================================================================

def write_report(entries: Dict[str, Any], path: PathLike) -> Path:
    """One `key = value` line per entry, in insertion order"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{key} = {format_value(value)}" for key, value in entries.items()]
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write('\n'.join(lines) + '\n')
    logger.info(f"Wrote {path}")
    return path


def hypothesis_entries(report: HypothesisReport) -> Dict[str, Any]:
    entries: Dict[str, Any] = {'theorem': report.theorem_id}
    for name, value in report.quantities.items():
        entries[name] = value
    for condition in report.conditions:
        entries[f"condition[{condition.name}]"] = (
            f"{format_number(condition.value)} {condition.relation} "
            f"{format_number(condition.bound)} {condition.status.value}"
        )
    for i, note in enumerate(report.notes):
        entries[f"note[{i}]"] = note
    entries['verdict'] = report.verdict
    return entries


def coefficient_entries(coeffs: Coefficients) -> Dict[str, Any]:
    """Ranges of W, b and the ellipticity bounds"""
    return {
        'min_W': float(np.min(coeffs.W)),
        'max_W': float(np.max(coeffs.W)),
        'min_lambda': float(np.min(coeffs.lam)),
        'max_Lambda': float(np.max(coeffs.Lam)),
        'min_eigenvalue': float(np.min(coeffs.eigenvalues())),
        'max_eigenvalue': float(np.max(coeffs.eigenvalues())),
        'min_b': float(np.min(coeffs.b)),
        'max_b': float(np.max(coeffs.b)),
        'elliptic': coeffs.is_elliptic(),
    }
