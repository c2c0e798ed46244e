"""Bohr radii K(B_X, J) from the m-homogeneous radii and explicit test functions"""

import math
import logging
from typing import Dict, List, Optional

import numpy as np
from scipy.optimize import brentq

from ..core.bracket import Bracket
from ..core.config import BudgetConfig, CapsConfig
from ..core.exceptions import ArgumentError
from ..core.lattice import LatticeSpec
from ..core.multiindex import IndexSetSpec, MultiIndex, reduce_set
from .characteristics import CharacteristicTable
from .constants import (BoundEntry, ConstantReport, Quantity, ensure_table, projection_norm_upper,
                        chi_mon_bracket, lambda_hat_upper)

logger = logging.getLogger(__name__)

MOBIUS_PARAMETERS = tuple(np.round(np.arange(0.5, 0.951, 0.05), 2))
MOBIUS_MAX_DEGREE = 64


def default_max_degree(n: int) -> int:
    """Critical degrees sit near log n"""
    return max(8, math.ceil(2 * math.log(n))) if n > 1 else 8


def pure_power_degree(J: IndexSetSpec, limit: int = MOBIUS_MAX_DEGREE) -> int:
    """Largest d <= limit with k e_1 in J for every 0 <= k <= d (-1 if 0 is missing)"""
    d = -1
    for k in range(limit + 1):
        if not J.contains(MultiIndex.unit(J.dimension, 0, k) if k else MultiIndex.zero(J.dimension)):
            break
        d = k
    return d


def mobius_radius(a: float, d: int) -> Optional[float]:
    """Radius where the majorant of the degree-d truncation of (a - z)/(1 - az) meets its norm bound

    The truncation T has ||T|| <= 1 + (1 + a) a^d on the disc and
    majorant a + (1 - a^2) sum_{k<=d} a^(k-1) r^k, so any Bohr radius
    of a ball containing the disc direction is at most the returned r.
    """
    if not 0 < a < 1 or d < 1:
        raise ArgumentError(f"need 0 < a < 1 and d >= 1, got a={a}, d={d}")
    bound = 1.0 + (1.0 + a) * a ** d
    k = np.arange(1, d + 1)
    coefficients = (1.0 - a * a) * a ** (k - 1.0)

    def majorant(r: float) -> float:
        return a + float(coefficients @ r ** k) - bound

    if majorant(1.0) <= 0:
        return None
    return float(brentq(majorant, 0.0, 1.0, xtol=1e-14))


def mobius_upper(J: IndexSetSpec) -> Optional[BoundEntry]:
    d = pure_power_degree(J)
    if d < 1:
        return None
    radii = [r for r in (mobius_radius(a, d) for a in MOBIUS_PARAMETERS) if r is not None]
    if not radii:
        return None
    return BoundEntry("mobius", min(radii), f"truncated disc automorphisms, degree {d}")


def wiener_radius(chi_hi: Dict[int, float]) -> float:
    """Largest r with sum_m r^m chi_m <= 1/2"""
    orders = np.array(sorted(chi_hi), dtype=float)
    weights = np.array([chi_hi[k] for k in sorted(chi_hi)])

    def excess(r: float) -> float:
        return float(weights @ r ** orders) - 0.5

    if len(orders) == 0 or excess(1.0) <= 0:
        return 1.0
    return float(brentq(excess, 0.0, 1.0, xtol=1e-14))


def bohr_bracket(J: IndexSetSpec, X: LatticeSpec, m_max: Optional[int] = None,
                 budget: Optional[BudgetConfig] = None, caps: Optional[CapsConfig] = None,
                 table: Optional[CharacteristicTable] = None) -> ConstantReport:
    """Certified routes for the Bohr radius of the ball of X restricted to J

    Lower routes: one third of the smallest K_m, the projection-constant
    route, and the Wiener coefficient inequality. Upper routes: the smallest
    K_m and truncated disc automorphisms in z_1. Degrees above m_max are not
    examined; the report says so when J reaches past it.
    """
    budget = budget or BudgetConfig()
    caps = caps or CapsConfig()
    table = ensure_table(table, X, budget)
    n = J.dimension
    m_max = default_max_degree(n) if m_max is None else m_max
    if m_max < 1:
        raise ArgumentError(f"m_max must be >= 1, got {m_max}")

    truncated = J.degree() > m_max
    orders = [k for k in J.orders() if 1 <= k <= m_max]
    params = {"m_max": m_max, "truncated": truncated, "m": J.degree()}
    if not orders:
        return ConstantReport(Quantity.BOHR, Bracket.exact(1.0, "constants-only"), J, X, [], params)

    chi: Dict[int, Bracket] = {}
    K: Dict[int, Bracket] = {}
    evaluations = 0
    for k in orders:
        report = chi_mon_bracket(J.homogeneous_slice(k), X, budget, caps, table)
        chi[k] = report.bracket
        K[k] = report.bracket.power(-1.0 / k)
        evaluations += report.bracket.evaluations
        logger.debug(f"K_{k} on {X.label}: [{K[k].lo:.6g}, {K[k].hi:.6g}]")

    lowers: List[BoundEntry] = [BoundEntry("sandwich", min(b.lo for b in K.values()) / 3.0,
                                           "one third of the smallest homogeneous radius", "lower")]
    if X.is_banach:
        worst = math.inf
        for k in orders:
            slice_spec = J.homogeneous_slice(k)
            q_norm = projection_norm_upper(slice_spec, X, table, caps)
            flat_hi = lambda_hat_upper(reduce_set(slice_spec, caps.enumeration_cap), X, table, caps)[0]
            worst = min(worst, (math.e * q_norm * flat_hi) ** (-1.0 / k))
        lowers.append(BoundEntry("projection", worst / 6.0, "projection constants of reduced sets", "lower"))
    lowers.append(BoundEntry("wiener", wiener_radius({k: b.hi for k, b in chi.items()}),
                             "coefficient inequality with chi_mon upper ends", "lower"))

    uppers: List[BoundEntry] = [BoundEntry("sandwich", min(b.hi for b in K.values()),
                                           "smallest homogeneous radius")]
    mobius = mobius_upper(J)
    if mobius is not None:
        uppers.append(mobius)

    lo_entry = max(lowers, key=lambda e: e.value)
    hi_entry = min(uppers, key=lambda e: e.value)
    method = f"{lo_entry.name}/{hi_entry.name}" + ("/truncated" if truncated else "")
    if truncated:
        logger.warning(f"Bohr radius of {J.label} on {X.label} examined degrees <= {m_max} only")
    bracket = Bracket.from_search(lo_entry.value, hi_entry.value, method, evaluations,
                                  context=f"for the Bohr radius of {J.label} on {X.label}")
    params["K_m"] = {k: [b.lo, b.hi] for k, b in K.items()}
    return ConstantReport(Quantity.BOHR, bracket, J, X, lowers + uppers, params)
