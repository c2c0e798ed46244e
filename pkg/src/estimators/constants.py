"""Projection and unconditionality constants of polynomial spaces as certified brackets"""

import math
import logging
import itertools
from enum import Enum
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize
from scipy.special import gammaln

from ..core.bracket import Bracket
from ..core.config import BudgetConfig, CapsConfig
from ..core.exceptions import ArgumentError, CapacityError, IndexSetError
from ..core.lattice import (LatticeSpec, dual_fundamental_function, embedding_norm,
                            fundamental_function, norm)
from ..core.multiindex import (Generator, IndexSetSpec, MultiIndex, exponent_matrix, is_permutation_symmetric,
                               is_phase_free, log_class_sizes, order_slices, reduce_set)
from ..core.polynomials import Polynomial, sup_norm
from ..core.ball_search import (LOG_FLOOR, MonomialObjective, flat_moduli, maximize_on_ball,
                                random_ball_moduli)
from ..core.utils import inverse
from .characteristics import CharacteristicTable
from .tetra_average import kappa, prime_count

logger = logging.getLogger(__name__)

HOELDER_EXPONENTS = (1.0, 2.0, math.inf)
CANDIDATES_PER_PROFILE = 64
CERTIFIED_CANDIDATES = 3
EXHAUSTIVE_SIGNS_MAX_TERMS = 16
RANDOM_SIGN_PATTERNS = 512
GREEDY_DESCENTS = 16
GREEDY_MAX_TERMS = 128
GREEDY_PASSES = 2
REFINE_MAX_TERMS = 12
PROXY_ENTRIES = 1 << 22


class Quantity(Enum):
    LAMBDA_HAT = "lambda_hat"
    CHI_MON = "chi_mon"
    K_M = "K_m"
    BOHR = "bohr"
    PROJ_CLOSED = "proj_closed"


@dataclass
class BoundEntry:
    """One named bound of a report's chain"""
    name: str
    value: float
    anchor: str
    kind: str = "upper"  # upper, lower

    def to_text(self) -> str:
        return f"{self.name}={self.value:.12g}"


@dataclass
class ConstantReport:
    quantity: Quantity
    bracket: Bracket
    index_set: Optional[IndexSetSpec] = None
    lattice: Optional[LatticeSpec] = None
    chain: List[BoundEntry] = field(default_factory=list)
    params: Dict[str, Any] = field(default_factory=dict)

    def upper_entries(self) -> List[BoundEntry]:
        return [e for e in self.chain if e.kind == "upper"]

    def chain_consistent(self, tol: float = 1e-9) -> bool:
        """lo never exceeds an upper chain value"""
        return all(self.bracket.lo <= e.value + tol for e in self.upper_entries())

    def to_row(self, seed: int = 0, wall_ms: float = 0) -> dict:
        X, J = self.lattice, self.index_set
        degree = self.params.get("m", J.degree() if J is not None else "")
        return {
            "quantity": self.quantity.value,
            "n": X.dimension if X is not None else self.params.get("n", ""),
            "m": degree,
            "family": X.family.value if X is not None else "",
            "p": X.p if X is not None else "",
            "q": X.q if X is not None and X.q is not None else "",
            "J_generator": J.label if J is not None else self.params.get("name", ""),
            "lo": self.bracket.lo,
            "hi": self.bracket.hi,
            "method": self.bracket.method,
            "chain": ";".join(e.to_text() for e in self.chain),
            "seed": seed,
            "evals": self.bracket.evaluations,
            "wall_ms": wall_ms,
        }


# Index-set data shared by the calculators

@dataclass
class _SetData:
    members: Tuple[MultiIndex, ...]
    exponents: np.ndarray
    log_c_lo: np.ndarray
    log_c_hi: np.ndarray
    log_class: np.ndarray

    @property
    def orders(self) -> np.ndarray:
        return self.exponents.sum(axis=1)

    @property
    def log_sup_hi(self) -> np.ndarray:
        return -self.log_c_lo

    def __len__(self) -> int:
        return len(self.members)


def _set_data(J: IndexSetSpec, table: CharacteristicTable, caps: CapsConfig) -> _SetData:
    members = J.enumerate(caps.enumeration_cap)
    E = exponent_matrix(members, J.dimension)
    log_c_lo, log_c_hi = table.log_bounds(E)
    return _SetData(members, E, log_c_lo, log_c_hi, log_class_sizes(E) if len(E) else np.zeros(0))


@lru_cache(maxsize=256)
def _embedding_hi(X: LatticeSpec, r: float) -> float:
    return embedding_norm(X, LatticeSpec.lp(r, X.dimension)).hi


def ensure_table(table: Optional[CharacteristicTable], X: LatticeSpec, budget: BudgetConfig) -> CharacteristicTable:
    if table is None:
        return CharacteristicTable(X, budget)
    if table.lattice != X:
        raise ArgumentError(f"characteristic table for {table.lattice.label} used on {X.label}")
    return table


def _is_symmetric_set(J: IndexSetSpec, members: Sequence[MultiIndex]) -> bool:
    return J.generator != Generator.EXPLICIT or is_permutation_symmetric(members)


def _ball_flat_value(X: LatticeSpec, objective: MonomialObjective) -> Tuple[float, np.ndarray, int]:
    """Best objective value over the flat vectors, for supports too large to search"""
    U = flat_moduli(X)
    values = np.exp(objective.log_values(U, None))
    best = int(np.argmax(values))
    return float(values[best]), np.exp(U[best]).astype(complex), len(U)


# lambda-hat

def lambda_hat_upper(J: IndexSetSpec, X: LatticeSpec, table: CharacteristicTable,
                     caps: Optional[CapsConfig] = None, data: Optional[_SetData] = None) -> Tuple[float, List[BoundEntry]]:
    """Optimizer-free upper bounds for lambda-hat; returns (min, entries)"""
    caps = caps or CapsConfig()
    data = data if data is not None else _set_data(J, table, caps)
    if len(data) == 0:
        return 0.0, [BoundEntry("empty", 0.0, "empty index set")]

    entries = [BoundEntry("termwise", float(np.exp(data.log_c_hi - data.log_c_lo).sum()),
                          "coefficient functional cap")]

    exponents = sorted({*HOELDER_EXPONENTS, X.p})
    holder = 0.0
    orders = data.orders
    for k in np.unique(orders):
        idx = orders == k
        size = int(idx.sum())
        best = math.inf
        for r in exponents:
            weight = float(np.max(data.log_c_hi[idx] - data.log_class[idx] * inverse(r)))
            M = _embedding_hi(X, r) if k > 0 else 1.0
            best = min(best, math.exp(weight + k * math.log(M) + (1.0 - inverse(r)) * math.log(size)))
        holder += best
    entries.append(BoundEntry("hoelder", holder, "multinomial Hoelder"))

    n = J.dimension
    if X.is_banach and all(a.is_tetrahedral for a in data.members):
        tetra = 0.0
        for k in np.unique(orders):
            k = int(k)
            if k == 0:
                tetra += 1.0
                continue
            ratio = dual_fundamental_function(X, n) / dual_fundamental_function(X, k)
            tetra += math.exp(k * (1.0 + math.log(ratio)))
        entries.append(BoundEntry("tetra_fundamental", tetra, "tetrahedral fundamental-function bound"))

    return min(e.value for e in entries), entries


def lambda_hat(J: IndexSetSpec, X: LatticeSpec, budget: Optional[BudgetConfig] = None,
               caps: Optional[CapsConfig] = None, table: Optional[CharacteristicTable] = None) -> ConstantReport:
    """Bracket for sup over the ball of sum_{alpha in J} c(alpha) |z^alpha|"""
    budget = budget or BudgetConfig()
    caps = caps or CapsConfig()
    table = ensure_table(table, X, budget)
    data = _set_data(J, table, caps)

    if len(data) == 0:
        return ConstantReport(Quantity.LAMBDA_HAT, Bracket.exact(0.0, "empty"), J, X)
    if len(data) == 1:
        return ConstantReport(Quantity.LAMBDA_HAT, Bracket.exact(1.0, "single-monomial"), J, X,
                              [BoundEntry("single", 1.0, "one monomial")])

    hi, chain = lambda_hat_upper(J, X, table, caps, data)
    objective = MonomialObjective(data.exponents, np.exp(data.log_c_lo))
    if len(data) > caps.search_terms_cap:
        lo, witness, evaluations = _ball_flat_value(X, objective)
        method = "flat-vectors"
    else:
        rng = np.random.default_rng(budget.seed)
        result = maximize_on_ball(objective, X, budget, rng, decreasing=_is_symmetric_set(J, data.members))
        lo, witness, evaluations = result.value, result.witness, result.evaluations
        method = "ascent"

    best_upper = min(chain, key=lambda e: e.value)
    bracket = Bracket.from_search(lo, hi, f"{method}/{best_upper.name}", evaluations, tuple(witness),
                                  f"for lambda_hat of {J.label} on {X.label}")
    logger.debug(f"lambda_hat {J.label} on {X.label}: [{bracket.lo:.6g}, {bracket.hi:.6g}]")
    return ConstantReport(Quantity.LAMBDA_HAT, bracket, J, X, chain)


# chi_mon

def projection_norm_upper(slice_spec: IndexSetSpec, X: LatticeSpec, table: CharacteristicTable,
                           caps: CapsConfig) -> float:
    """Upper bound for the norm of the coefficient projection P_k -> P_{J(k)}"""
    k = slice_spec.degree()
    n = slice_spec.dimension
    size = slice_spec.cardinality()
    if size == math.comb(n + k - 1, k):
        return 1.0
    members = slice_spec.enumerate(caps.enumeration_cap)
    if size == math.comb(n, k) and all(a.is_tetrahedral for a in members):
        return kappa(prime_count(k)) ** k
    return lambda_hat_upper(slice_spec, X, table, caps)[0]


def chi_upper_bounds(J: IndexSetSpec, X: LatticeSpec, table: CharacteristicTable,
                     caps: Optional[CapsConfig] = None, data: Optional[_SetData] = None) -> List[BoundEntry]:
    """Every certified upper bound for chi_mon that needs no search"""
    caps = caps or CapsConfig()
    data = data if data is not None else _set_data(J, table, caps)
    lam_hi, _ = lambda_hat_upper(J, X, table, caps, data)
    entries = [
        BoundEntry("termwise", float(np.exp(data.log_c_hi - data.log_c_lo).sum()), "absolute-sum cap"),
        BoundEntry("lambda_hat", lam_hi, "coefficient bound by characteristics"),
    ]

    phi = fundamental_function(X, X.dimension)
    log_terms = 2.0 * (data.log_sup_hi + data.orders * math.log(phi))
    entries.append(BoundEntry("parseval", float(math.sqrt(np.exp(log_terms).sum())), "torus Parseval"))

    if X.is_banach:
        orders = [k for k in J.orders() if k >= 1]
        if orders:
            m = J.degree()
            q_norms, flat_lams = [], []
            for k in orders:
                slice_spec = J.homogeneous_slice(k)
                q_norms.append(projection_norm_upper(slice_spec, X, table, caps))
                flat = reduce_set(slice_spec, caps.enumeration_cap)
                flat_lams.append(lambda_hat_upper(flat, X, table, caps)[0])
            chain_all = math.e * (m + 1) * 2 ** m * max(q_norms) * max(flat_lams)
            entries.append(BoundEntry("degree_projection", chain_all, "unconditionality via projection constants"))
            if J.is_homogeneous() and m >= 1:
                entries.append(BoundEntry("homogeneous_projection", math.e * 2 ** m * q_norms[-1] * flat_lams[-1],
                                          "homogeneous unconditionality via projection constants"))
    return entries


class _Proxy:
    """Cheap sup estimates over a fixed sample of ball points"""

    def __init__(self, X: LatticeSpec, E: np.ndarray, rng: np.random.Generator, homogeneous: bool):
        n, T = X.dimension, len(E)
        if n <= 2:
            U, Theta = _dense_points(X, homogeneous, 200, 64)
        else:
            count = int(max(64, min(4096, PROXY_ENTRIES // max(T, 1))))
            U = np.vstack([flat_moduli(X), random_ball_moduli(X, count, rng)])
            Theta = rng.uniform(0, 2 * np.pi, size=U.shape)
            if homogeneous:
                Theta[:, 0] = 0.0
        self.moduli = np.exp(U @ E.T)
        self.points = self.moduli * np.exp(1j * (Theta @ E.T))
        # Moduli rows repeat across phases; keep distinct ones for the majorant
        self.unique_moduli = np.unique(np.round(self.moduli, 14), axis=0)

    def numerators(self, C: np.ndarray) -> np.ndarray:
        return (self.unique_moduli @ np.abs(C).T).max(axis=0)

    def denominators(self, C: np.ndarray) -> np.ndarray:
        best = np.zeros(len(C))
        chunk = max(1, PROXY_ENTRIES // max(1, len(self.points)))
        for start in range(0, len(C), chunk):
            block = C[start:start + chunk]
            best[start:start + chunk] = np.abs(self.points @ block.T).max(axis=0)
        return best

    def ratios(self, C: np.ndarray) -> np.ndarray:
        return self.numerators(C) / np.maximum(self.denominators(C), 1e-300)


def _dense_points(X: LatticeSpec, homogeneous: bool, grid: int, phases: int) -> Tuple[np.ndarray, np.ndarray]:
    """Structured sphere points for n <= 2: direction grid times a phase grid"""
    n = X.dimension
    if n == 1:
        directions = np.ones((1, 1))
    else:
        w = np.linspace(0.0, 1.0, grid + 1)
        directions = np.column_stack([w, 1.0 - w])
    moduli = directions / norm(X, directions)[:, None]
    U = np.log(np.maximum(moduli, np.exp(LOG_FLOOR)))
    free = n - 1 if homogeneous else n
    if free > 1:
        phases = max(8, phases // 2)
    angles = 2 * np.pi * np.arange(phases) / phases
    theta_grid = np.array(list(itertools.product(angles, repeat=free))) if free else np.zeros((1, 0))
    if homogeneous:
        theta_grid = np.column_stack([np.zeros(len(theta_grid)), theta_grid])
    U_all = np.repeat(U, len(theta_grid), axis=0)
    Theta_all = np.tile(theta_grid, (len(U), 1))
    return U_all, Theta_all


def _profiles(data: _SetData) -> Dict[str, np.ndarray]:
    profiles = {
        "flat": np.ones(len(data)),
        "class_sqrt": np.exp(0.5 * data.log_class),
        "characteristic": np.exp(data.log_c_lo),
    }
    tetra = np.array([1.0 if a.is_tetrahedral else 0.0 for a in data.members])
    if 0 < tetra.sum() < len(data):
        profiles["tetra_ones"] = tetra
    return profiles


def _coefficients_from_params(params: np.ndarray, T: int) -> np.ndarray:
    return np.exp(params[:T]) * np.exp(1j * params[T:])


def _certify_ratio(coeffs: np.ndarray, data: _SetData, X: LatticeSpec, budget: BudgetConfig,
                   caps: CapsConfig, table: CharacteristicTable, rng: np.random.Generator) -> Tuple[float, int]:
    """num_lo / den_hi for one candidate: a certified lower bound for chi_mon"""
    keep = np.abs(coeffs) > 0
    P = Polynomial(X.dimension, {a: c for a, c, k in zip(data.members, coeffs, keep) if k})
    majorant = MonomialObjective(data.exponents[keep], np.abs(coeffs[keep]))
    numerator = maximize_on_ball(majorant, X, budget, rng)
    denominator = sup_norm(P, X, budget, caps, table, search=False)
    return numerator.value / denominator.hi, numerator.evaluations + denominator.evaluations


def _sign_patterns(T: int, rng: np.random.Generator, proxy: _Proxy, base: np.ndarray) -> np.ndarray:
    """Sign vectors with the first sign fixed, best (smallest proxy norm) first"""
    if T <= EXHAUSTIVE_SIGNS_MAX_TERMS:
        patterns = np.array(list(itertools.product((1.0, -1.0), repeat=T - 1)))
        patterns = np.column_stack([np.ones(len(patterns)), patterns])
    else:
        patterns = rng.choice((1.0, -1.0), size=(RANDOM_SIGN_PATTERNS, T))
        patterns[:, 0] = 1.0
        if T <= GREEDY_MAX_TERMS:
            starts = patterns[:GREEDY_DESCENTS].copy()
            for row in starts:
                current = proxy.denominators((row * base)[None, :])[0]
                for _ in range(GREEDY_PASSES):
                    # All single flips of the current row at once
                    flips = np.repeat(row[None, :], T - 1, axis=0)
                    flips[np.arange(T - 1), np.arange(1, T)] *= -1.0
                    values = proxy.denominators(flips * base[None, :])
                    best = int(np.argmin(values))
                    if values[best] >= current:
                        break
                    row[:] = flips[best]
                    current = values[best]
            patterns = np.vstack([patterns, starts])
    scores = proxy.denominators(patterns * base[None, :])
    return patterns[np.argsort(scores, kind="stable")]


def chi_mon_lower(J: IndexSetSpec, X: LatticeSpec, budget: BudgetConfig, caps: CapsConfig,
                  table: CharacteristicTable, data: _SetData) -> Tuple[float, List[BoundEntry], int]:
    """Certified lower bounds from coefficient-profile search and flat-point sign quotients"""
    T = len(data)
    entries = [BoundEntry("trivial", 1.0, "chi >= 1", "lower")]
    if T > caps.chi_search_terms:
        logger.debug(f"chi_mon search skipped for {J.label}: {T} terms")
        return 1.0, entries, 0
    # Without a grid certificate the sup-norm upper end is the majorant and every quotient is <= 1
    if X.dimension > caps.certify_dimension:
        return 1.0, entries, 0

    rng = np.random.default_rng(budget.seed)
    proxy = _Proxy(X, data.exponents, rng, J.is_homogeneous())
    evaluations = 0

    # Coefficient profiles with random phases, refined on the proxy
    candidates = []
    for profile in _profiles(data).values():
        phases = rng.uniform(0, 2 * np.pi, size=(CANDIDATES_PER_PROFILE, T))
        phases[: CANDIDATES_PER_PROFILE // 2] = np.pi * rng.integers(0, 2, size=(CANDIDATES_PER_PROFILE // 2, T))
        candidates.append(profile[None, :] * np.exp(1j * phases))
    C = np.vstack(candidates)
    scores = proxy.ratios(C)
    order = np.argsort(-scores, kind="stable")
    top = [C[i] for i in order[: CERTIFIED_CANDIDATES + 1]]

    if T <= REFINE_MAX_TERMS:
        refined = []
        for coeffs in top:
            start = np.concatenate([np.log(np.maximum(np.abs(coeffs), 1e-12)), np.angle(coeffs)])
            objective = lambda v: -float(proxy.ratios(_coefficients_from_params(v, T)[None, :])[0])  # noqa: E731
            result = minimize(objective, start, method="Nelder-Mead",
                              options={"maxiter": budget.iterations * 4, "xatol": 1e-6, "fatol": 1e-9})
            evaluations += result.nfev
            refined.append(_coefficients_from_params(result.x, T))
        pool = np.vstack([np.array(refined), np.array(top)])
        top = [pool[i] for i in np.argsort(-proxy.ratios(pool), kind="stable")[:CERTIFIED_CANDIDATES]]

    best_profile = 1.0
    for coeffs in top[:CERTIFIED_CANDIDATES]:
        ratio, used = _certify_ratio(coeffs, data, X, budget, caps, table, rng)
        evaluations += used
        best_profile = max(best_profile, ratio)
    entries.append(BoundEntry("profile_search", best_profile, "coefficient ratio", "lower"))

    # Sign quotient at the normalized flat vector
    phi = fundamental_function(X, X.dimension)
    base = np.exp(-data.orders * math.log(phi))
    numerator = float(base.sum())
    best_sign = 1.0
    for signs in _sign_patterns(T, rng, proxy, np.ones(T))[:CERTIFIED_CANDIDATES]:
        P = Polynomial(X.dimension, dict(zip(data.members, signs)))
        denominator = sup_norm(P, X, budget, caps, table, search=False)
        evaluations += denominator.evaluations
        best_sign = max(best_sign, numerator / denominator.hi)
    entries.append(BoundEntry("flat_sign_quotient", best_sign, "random signs at the flat point", "lower"))

    return max(e.value for e in entries), entries, evaluations


def chi_mon_bracket(J: IndexSetSpec, X: LatticeSpec, budget: Optional[BudgetConfig] = None,
                    caps: Optional[CapsConfig] = None, table: Optional[CharacteristicTable] = None) -> ConstantReport:
    """Bracket for the monomial unconditionality constant of P_J(X_n)"""
    budget = budget or BudgetConfig()
    caps = caps or CapsConfig()
    table = ensure_table(table, X, budget)
    data = _set_data(J, table, caps)

    if len(data) <= 1:
        return ConstantReport(Quantity.CHI_MON, Bracket.exact(1.0, "single-monomial"), J, X,
                              [BoundEntry("single", 1.0, "at most one monomial")])
    if len(data) - 1 <= J.dimension and is_phase_free(data.members):
        return ConstantReport(Quantity.CHI_MON, Bracket.exact(1.0, "phase-free"), J, X,
                              [BoundEntry("phase_free", 1.0, "sign changes are variable rotations")])

    uppers = chi_upper_bounds(J, X, table, caps, data)
    hi_entry = min(uppers, key=lambda e: e.value)
    lo, lowers, evaluations = chi_mon_lower(J, X, budget, caps, table, data)
    lo_entry = max(lowers, key=lambda e: e.value)

    bracket = Bracket.from_search(lo, hi_entry.value, f"{lo_entry.name}/{hi_entry.name}", evaluations,
                                  context=f"for chi_mon of {J.label} on {X.label}")
    logger.debug(f"chi_mon {J.label} on {X.label}: [{bracket.lo:.6g}, {bracket.hi:.6g}]")
    return ConstantReport(Quantity.CHI_MON, bracket, J, X, lowers + uppers)


def chi_mon_oracle(J: IndexSetSpec, X: LatticeSpec, restarts: int = 1000, seed: int = 0,
                   grid: int = 200, phases: int = 64) -> float:
    """Brute-force coefficient search on a dense grid (n <= 2)

    Not certified: the dense grid slightly underestimates sup norms.
    """
    if X.dimension > 2:
        raise CapacityError("the dense coefficient oracle is limited to n <= 2")
    members = J.enumerate()
    T = len(members)
    if T <= 1:
        return 1.0
    E = exponent_matrix(members, J.dimension)
    U, Theta = _dense_points(X, J.is_homogeneous(), grid, phases)
    moduli = np.exp(U @ E.T)
    points = moduli * np.exp(1j * (Theta @ E.T))

    def ratios(C: np.ndarray) -> np.ndarray:
        num = (moduli @ np.abs(C).T).max(axis=0)
        den = np.zeros(len(C))
        chunk = max(1, PROXY_ENTRIES // len(points))
        for start in range(0, len(C), chunk):
            den[start:start + chunk] = np.abs(points @ C[start:start + chunk].T).max(axis=0)
        return num / np.maximum(den, 1e-300)

    rng = np.random.default_rng(seed)
    C = rng.exponential(size=(restarts, T)) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=(restarts, T)))
    scores = ratios(C)
    best = float(scores.max())
    for i in np.argsort(-scores, kind="stable")[:10]:
        start = np.concatenate([np.log(np.abs(C[i])), np.angle(C[i])])
        result = minimize(lambda v: -float(ratios(_coefficients_from_params(v, T)[None, :])[0]), start,
                          method="Nelder-Mead", options={"maxiter": 1500, "xatol": 1e-7, "fatol": 1e-10})
        best = max(best, -float(result.fun))
    return best


def K_m_bracket(J: IndexSetSpec, X: LatticeSpec, m: Optional[int] = None, budget: Optional[BudgetConfig] = None,
                caps: Optional[CapsConfig] = None, table: Optional[CharacteristicTable] = None) -> ConstantReport:
    """m-homogeneous Bohr radius: chi_mon(P_{J(m)})^(-1/m), ends swapped"""
    if m is None:
        orders = J.orders()
        if len(orders) != 1:
            raise IndexSetError(f"K_m needs a degree or a homogeneous set, {J.label} has orders {orders}")
        m = orders[0]
    if m < 1:
        raise IndexSetError(f"K_m needs m >= 1, got {m}")
    slice_spec = J.homogeneous_slice(m)
    if slice_spec.cardinality() == 0:
        raise IndexSetError(f"{J.label} has no members of order {m}")
    chi = chi_mon_bracket(slice_spec, X, budget, caps, table)
    return ConstantReport(Quantity.K_M, chi.bracket.power(-1.0 / m), slice_spec, X, chi.chain, {"m": m})


# Closed forms and reference curves

def rw_projection_constant(m: int, n: int) -> float:
    """Projection constant of the m-homogeneous polynomials on l_2^n"""
    if m < 1 or n < 1:
        raise ArgumentError(f"m and n must be >= 1, got m={m}, n={n}")
    return float(math.exp(gammaln(n + m) + gammaln(1 + m / 2) - gammaln(1 + m) - gammaln(n + m / 2)))


def kadets_snobar(dim: int) -> float:
    if dim < 1:
        raise ArgumentError(f"dimension must be >= 1, got {dim}")
    return math.sqrt(dim)


def lebesgue_constant(m: int, tol: float = 1e-10) -> float:
    """(1/pi) * integral over [0, pi] of |D_m| with D_m the Dirichlet kernel"""
    if m < 0:
        raise ArgumentError(f"degree must be >= 0, got {m}")
    if m == 0:
        return 1.0

    def kernel(t: float) -> float:
        return math.sin((m + 0.5) * t) / math.sin(0.5 * t)

    # D_m keeps one sign between consecutive zeros 2 pi k / (2m + 1)
    nodes = [2 * math.pi * k / (2 * m + 1) for k in range(m + 1)] + [math.pi]
    total = 0.0
    for a, b in zip(nodes, nodes[1:]):
        value, _ = quad(kernel, a, b, epsabs=tol, epsrel=tol, limit=200)
        total += abs(value)
    return total / math.pi


def lebesgue_asymptotic(m: int) -> float:
    return 4.0 / math.pi ** 2 * math.log(m + 1)


REFERENCE_CURVES = ("sqrt_logn_over_n", "logn_over_n_pow", "logpow_over_npow", "km_two_convex")


def reference_asymptotic(name: str, n: float, m: Optional[int] = None, r: Optional[float] = None,
                         s: Optional[float] = None) -> float:
    """Reference growth curves for Bohr radii and their m-homogeneous parts"""
    if name not in REFERENCE_CURVES:
        raise ArgumentError(f"unknown reference curve {name!r}, expected one of {', '.join(REFERENCE_CURVES)}")

    def need(value, label):
        if value is None:
            raise ArgumentError(f"curve {name} needs {label}")
        return value

    log_n = math.log(n)
    if name == "sqrt_logn_over_n":
        return math.sqrt(log_n / n)
    if name == "logn_over_n_pow":
        return (log_n / n) ** (1.0 - inverse(need(r, "r")))
    if name == "logpow_over_npow":
        return log_n ** (1.0 - inverse(need(s, "s"))) / n ** (1.0 - inverse(need(r, "r")))
    m = need(m, "m")
    return (m / (n + m)) ** ((m - 1) / (2.0 * m))


def degree_sum_bound(n: int, m: int, r: float) -> Dict[str, float]:
    """sum_{k<=m} (n/k)^(k/r') against (m+1) max(e^(m/r'), (n/m)^(m/r'))"""
    w = 1.0 - inverse(r)
    total = sum((n / k) ** (k * w) for k in range(1, m + 1))
    bound = (m + 1) * max(math.exp(m * w), (n / m) ** (m * w))
    return {"sum": total, "bound": bound, "ok": total <= bound * (1 + 1e-12)}


def kadets_snobar_split(J: IndexSetSpec) -> Dict[str, float]:
    """sqrt|J| against sqrt(m+1) max_k sqrt|J(k)|"""
    whole = math.sqrt(J.cardinality())
    slices = [math.sqrt(part.cardinality()) for part in order_slices(J).values()] or [0.0]
    split = math.sqrt(J.degree() + 1) * max(slices)
    return {"whole": whole, "split": split, "ok": whole <= split + 1e-12}


def degree_homogeneous_chain(J: IndexSetSpec, X: LatticeSpec, budget: Optional[BudgetConfig] = None,
                             caps: Optional[CapsConfig] = None, table: Optional[CharacteristicTable] = None,
                             tol: float = 1e-6) -> Dict[str, Any]:
    """lambda-hat of the homogeneous slices against the whole set"""
    budget = budget or BudgetConfig()
    table = ensure_table(table, X, budget)
    whole = lambda_hat(J, X, budget, caps, table).bracket
    slices = {k: lambda_hat(part, X, budget, caps, table).bracket for k, part in order_slices(J).items()}
    max_lo = max(b.lo for b in slices.values())
    max_hi = max(b.hi for b in slices.values())
    m = J.degree()
    return {
        "whole": whole,
        "slices": slices,
        "slice_below_whole": max_lo <= whole.hi + tol,
        "whole_below_split": whole.lo <= (m + 1) * max_hi + tol,
    }


def proj_closed_report(m: int, n: int) -> ConstantReport:
    """Closed-form projection constant on l_2^n with its reference bounds"""
    value = rw_projection_constant(m, n)
    dim = math.comb(n + m - 1, m)
    chain = [
        BoundEntry("two_pow_n_minus_1", 2.0 ** (n - 1), "l_2 polynomial bound"),
        BoundEntry("kadets_snobar", kadets_snobar(dim), "square root of the dimension"),
    ]
    X = LatticeSpec.lp(2, n)
    return ConstantReport(Quantity.PROJ_CLOSED, Bracket.exact(value, "closed-form"), IndexSetSpec.full(n, m), X,
                          chain, {"m": m})
