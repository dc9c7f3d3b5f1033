"""
Hypothesis checks for the three existence theorems.

Theorem 1: H_cyl ≥ 0, Ric ≥ −n (inf_Γ H_cyl)², sup|H| ≤ inf_Γ H_cyl.
Theorem 2: Ric ≥ −(n−1)k, H_cyl ≥ 0, sup|H| ≤ inf_Γ H_cyl and r₀ below the
           geodesic-sphere barrier radius for (k, sup|H|).
Theorem 3: rotationally symmetric model over a disc, n·sup|H| ≤ F(r₀).
"""

import logging
import math
from typing import Optional

import numpy as np

from kgraph_toolkit.barriers.height import sphere_barrier_radius
from kgraph_toolkit.core.errors import DomainError
from kgraph_toolkit.core.models import ConditionResult, HypothesisReport
from kgraph_toolkit.geometry.models import AmbientModel, Domain, DomainShape
from kgraph_toolkit.geometry.operations import cylinder_mean_curvature, ricci_lower_bound
from kgraph_toolkit.mce.equation import CurvatureInput
from kgraph_toolkit.rotational.profile import serrin_bound_F

logger = logging.getLogger('kgraph_toolkit.barriers.hypotheses')

TOL = 1e-12
K_FLOOR = 1e-12


def sup_abs_curvature(domain: Domain, H: CurvatureInput, samples: int = 65) -> float:
    """sup_Ω |H| over a tensor sample of the closure"""
    if isinstance(H, (int, float)):
        return abs(float(H))
    lo, hi = domain.primary_range
    a = np.linspace(lo, hi, samples)
    if domain.is_polar:
        b = np.linspace(0.0, 2.0 * np.pi, samples - 1, endpoint=False)
    else:
        b = np.linspace(domain.bounds[2], domain.bounds[3], samples)
    A, B = np.meshgrid(a, b, indexing='ij')
    return float(np.max(np.abs(H(A, B, polar=domain.is_polar))))


def _geq(name: str, value: float, bound: float) -> ConditionResult:
    return ConditionResult(name, value, bound, '>=', value >= bound - TOL)


def _leq(name: str, value: float, bound: float) -> ConditionResult:
    return ConditionResult(name, value, bound, '<=', value <= bound + TOL)


def check_theorem_hypotheses(model: AmbientModel, domain: Domain, H: CurvatureInput,
                             theorem_id: int, k: Optional[float] = None,
                             logger: Optional[logging.Logger] = None) -> HypothesisReport:
    """
    Evaluate the hypotheses of theorem 1, 2 or 3.

    Args:
        model: Ambient model
        domain: Domain
        H: Prescribed mean curvature
        theorem_id: 1, 2 or 3
        k: Curvature bound for theorem 2; derived from the Ricci bound if None

    Raises:
        DomainError: On an unknown theorem or theorem 3 without rotational symmetry
    """
    logger = logger or logging.getLogger('kgraph_toolkit.barriers.hypotheses')
    if theorem_id not in (1, 2, 3):
        raise DomainError(f"Unknown theorem {theorem_id}; expected 1, 2 or 3")
    if theorem_id == 3 and not (model.leaf.is_polar and domain.shape == DomainShape.DISC):
        raise DomainError("Theorem 3 needs a rotationally symmetric model over a disc")

    n = model.n
    h_cyl = cylinder_mean_curvature(model, domain)
    sup_H = sup_abs_curvature(domain, H)
    ric = ricci_lower_bound(model, domain)
    report = HypothesisReport(theorem_id=theorem_id)
    report.quantities.update({
        'n': float(n),
        'inf_H_cyl': h_cyl,
        'sup_abs_H': sup_H,
        'ricci_lower_bound': ric,
        'r0': domain.enclosing_radius,
    })

    if theorem_id == 1:
        report.conditions += [
            _geq('inf_H_cyl >= 0', h_cyl, 0.0),
            _geq('ricci_lower_bound >= -n*inf_H_cyl^2', ric, -n * h_cyl ** 2),
            _leq('sup_abs_H <= inf_H_cyl', sup_H, h_cyl),
        ]
    elif theorem_id == 2:
        if k is None:
            k = max(-ric / (n - 1), K_FLOOR)
            report.notes.append(f"k derived from the Ricci lower bound (floor {K_FLOOR:g})")
        radius = sphere_barrier_radius(k, sup_H)
        report.quantities.update({'k': k, 'sphere_radius': radius})
        if math.isinf(radius):
            report.notes.append("sup|H| <= sqrt(k): the sphere barrier puts no limit on r0")
        report.conditions += [
            _geq('ricci_lower_bound >= -(n-1)*k', ric, -(n - 1) * k),
            _geq('inf_H_cyl >= 0', h_cyl, 0.0),
            _leq('sup_abs_H <= inf_H_cyl', sup_H, h_cyl),
            _leq('r0 <= sphere_radius', domain.enclosing_radius, radius),
        ]
    else:
        F = serrin_bound_F(model, domain.r0)
        report.quantities['F_r0'] = F
        report.conditions.append(_leq('n*sup_abs_H <= F_r0', n * sup_H, F))
        # the remaining hypotheses of the statement are informational here
        report.notes.append(
            f"inf_H_cyl >= 0: {'yes' if h_cyl >= -TOL else 'no'} (inf_H_cyl = {h_cyl:.17g})"
        )
        report.notes.append(
            f"ricci_lower_bound >= -n*inf_H_cyl^2: "
            f"{'yes' if ric >= -n * h_cyl ** 2 - TOL else 'no'} (ricci_lower_bound = {ric:.17g})"
        )

    if report.passed:
        logger.info(f"Theorem {theorem_id}: hypotheses hold")
    else:
        failed = ', '.join(c.name for c in report.conditions if not c.passed)
        logger.warning(f"Theorem {theorem_id}: hypotheses fail ({failed})")
    return report
