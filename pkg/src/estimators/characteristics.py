"""Characteristics c_X(alpha) = 1 / sup over the unit ball of |z^alpha|"""

import math
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.special import xlogy

from ..core.bracket import Bracket
from ..core.config import BudgetConfig
from ..core.lattice import LatticeSpec, norm, support_function_upper
from ..core.multiindex import MultiIndex
from ..core.utils import dual_exponent, inverse

logger = logging.getLogger(__name__)


def _log_closed_lp(exponents: np.ndarray, r: float) -> np.ndarray:
    """log (m^m / alpha^alpha)^(1/r) for the rows of an exponent matrix, 0^0 = 1"""
    exponents = np.asarray(exponents, dtype=float)
    orders = exponents.sum(axis=-1)
    return (xlogy(orders, orders) - xlogy(exponents, exponents).sum(axis=-1)) * inverse(r)


def char_closed_lp(alpha: MultiIndex, r: float) -> float:
    """(m^m / alpha^alpha)^(1/r); 1 for r = inf and for the zero index"""
    if alpha.order == 0:
        return 1.0
    return float(math.exp(_log_closed_lp(np.array(alpha.exponents), r)))


def _pattern_section(alpha: MultiIndex, X: LatticeSpec) -> Tuple[np.ndarray, LatticeSpec]:
    """Nonzero exponents (decreasing) and the section of X on that many coordinates"""
    pattern = np.array(alpha.pattern, dtype=float)
    return pattern, X.section(len(pattern))


def _log_monomial(u: np.ndarray, a: np.ndarray, Xk: LatticeSpec) -> float:
    """log of x^a / ||x||^m at x = exp(u)"""
    x = np.exp(u - u.max())
    return float(a @ np.log(x) - a.sum() * math.log(float(norm(Xk, x))))


def char_numeric(alpha: MultiIndex, X: LatticeSpec, budget: Optional[BudgetConfig] = None) -> Bracket:
    """Certified bracket for c_X(alpha) by log-domain maximization of |z^alpha|

    Coordinates outside the support are pinned to zero. The lower end of
    sup|z^alpha| is attained at the optimizer's point; the upper end comes
    from the weighted AM-GM bound with the support function of the ball.
    """
    budget = budget or BudgetConfig()
    if alpha.order == 0:
        return Bracket.exact(1.0, "zero-index")
    a, Xk = _pattern_section(alpha, X)
    m = float(a.sum())
    if len(a) == 1:
        return Bracket.exact(1.0, "single-variable")

    starts = [np.log(a / m) * inverse(X.p), np.zeros(len(a))]
    best_u, best_value, evaluations = None, -math.inf, 0
    for u0 in starts:
        result = minimize(lambda u: -_log_monomial(u, a, Xk), u0, method="Nelder-Mead",
                          options={"maxiter": budget.iterations * len(a), "xatol": budget.tolerance * 1e-2,
                                   "fatol": 1e-15})
        evaluations += result.nfev
        for candidate in (u0, result.x):
            value = _log_monomial(candidate, a, Xk)
            if value > best_value:
                best_u, best_value = candidate, value

    x = np.exp(best_u - best_u.max())
    x = x / float(norm(Xk, x))
    h = support_function_upper(Xk, a / x, hint=x)
    log_sup_hi = float(a @ np.log(x)) + m * math.log(h / m)
    log_sup_hi = max(log_sup_hi, best_value)

    witness = tuple(complex(v) for v in x)
    return Bracket(math.exp(-log_sup_hi), math.exp(-best_value), "log-ascent/am-gm", evaluations, witness)


def char_bounds(alpha: MultiIndex, X: LatticeSpec, r: Optional[float] = None) -> Dict[str, float]:
    """Upper bounds for c_X(alpha) from explicit test vectors and duality

    Returns:
        alpha_norm and scaled_alpha always; lozanovskii_product when the
        Kothe dual of X is exact (the l_p family).
    """
    if alpha.order == 0:
        return {"alpha_norm": 1.0, "scaled_alpha": 1.0}
    r = X.p if r is None else r
    vec = np.array(alpha.exponents, dtype=float)
    m = alpha.order
    log_alpha_alpha = float(xlogy(vec, vec).sum())

    bounds = {"alpha_norm": math.exp(m * math.log(float(norm(X, vec))) - log_alpha_alpha)}
    shaped = (vec / m) ** inverse(r)
    bounds["scaled_alpha"] = math.exp(m * math.log(float(norm(X, shaped))) + float(_log_closed_lp(vec, r)))

    if X.is_lp_like:
        log_full = float(_log_closed_lp(vec, 1.0))
        dual_lower = float(_log_closed_lp(vec, dual_exponent(X.p)))
        bounds["lozanovskii_product"] = math.exp(log_full - dual_lower)
    return bounds


@dataclass
class CharResult:
    alpha: MultiIndex
    lattice: LatticeSpec
    bracket: Bracket
    bounds: Dict[str, float] = field(default_factory=dict)

    @property
    def closed_form(self) -> bool:
        return self.bracket.method == "closed-form"

    def to_row(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "lattice": self.lattice.label,
            "lo": self.bracket.lo,
            "hi": self.bracket.hi,
            "method": self.bracket.method,
            "lozanovskii_product": self.bounds.get("lozanovskii_product", ""),
            "alpha_norm": self.bounds.get("alpha_norm", ""),
            "scaled_alpha": self.bounds.get("scaled_alpha", ""),
        }


def characteristic(alpha: MultiIndex, X: LatticeSpec, budget: Optional[BudgetConfig] = None,
                   numeric: bool = False) -> CharResult:
    """Closed form on the l_p family, certified numeric bracket otherwise"""
    if X.is_lp_like and not numeric:
        bracket = Bracket.exact(char_closed_lp(alpha, X.p), "closed-form")
    else:
        bracket = char_numeric(alpha, X, budget)
    return CharResult(alpha, X, bracket, char_bounds(alpha, X))


class CharacteristicTable:
    """Cache of characteristic brackets for one lattice

    Symmetric lattices make c_X(alpha) a function of the exponent pattern
    only, so entries are keyed by pattern and shared across dimensions.
    """

    def __init__(self, X: LatticeSpec, budget: Optional[BudgetConfig] = None, workers: int = 1):
        self.lattice = X
        self.budget = budget or BudgetConfig()
        self.workers = max(1, workers)
        self._cache: Dict[Tuple[int, ...], Bracket] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._cache)

    def _compute(self, pattern: Tuple[int, ...]) -> Bracket:
        alpha = MultiIndex(pattern) if pattern else MultiIndex.zero(1)
        if self.lattice.is_lp_like:
            return Bracket.exact(char_closed_lp(alpha, self.lattice.p), "closed-form")
        return char_numeric(alpha, self.lattice, self.budget)

    def prefetch(self, patterns: Iterable[Tuple[int, ...]]):
        """Compute missing patterns, concurrently when workers > 1"""
        with self._lock:
            missing = sorted({p for p in patterns if p not in self._cache})
        if not missing:
            return
        if self.workers > 1 and len(missing) > 1 and not self.lattice.is_lp_like:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                results = list(executor.map(self._compute, missing))
        else:
            results = [self._compute(p) for p in missing]
        with self._lock:
            for pattern, bracket in zip(missing, results):
                self._cache.setdefault(pattern, bracket)
        logger.debug(f"Characteristic table {self.lattice.label}: {len(missing)} new patterns, {len(self._cache)} total")

    def bracket(self, alpha: MultiIndex) -> Bracket:
        pattern = alpha.pattern
        with self._lock:
            cached = self._cache.get(pattern)
        if cached is None:
            self.prefetch([pattern])
            with self._lock:
                cached = self._cache[pattern]
        return cached

    def sup_hi(self, alpha: MultiIndex) -> float:
        """Certified upper bound for sup |z^alpha| over the ball"""
        return 1.0 / self.bracket(alpha).lo

    def log_bounds(self, exponents: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(log c_lo, log c_hi) for every row of an exponent matrix"""
        exponents = np.asarray(exponents)
        if len(exponents) == 0:
            return np.zeros(0), np.zeros(0)
        if self.lattice.is_lp_like:
            values = _log_closed_lp(exponents, self.lattice.p)
            return values, values
        patterns = -np.sort(-exponents, axis=1)
        unique, inverse_index = np.unique(patterns, axis=0, return_inverse=True)
        keys = [tuple(int(a) for a in row if a) for row in unique]
        self.prefetch(keys)
        with self._lock:
            lo = np.array([math.log(self._cache[k].lo) for k in keys])
            hi = np.array([math.log(self._cache[k].hi) for k in keys])
        inverse_index = np.asarray(inverse_index).reshape(-1)
        return lo[inverse_index], hi[inverse_index]
