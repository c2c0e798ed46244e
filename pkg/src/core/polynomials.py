"""Sparse multivariate polynomials and certified sup-norm brackets"""

import math
import logging
import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .bracket import Bracket
from .config import BudgetConfig, CapsConfig
from .exceptions import CapacityError, DimensionMismatchError, PolynomialError
from .lattice import LatticeSpec, norm
from .multiindex import Generator, IndexSetSpec, MultiIndex, exponent_matrix, is_permutation_symmetric
from .ball_search import MonomialObjective, maximize_on_ball

logger = logging.getLogger(__name__)

# Bernstein slack levels tried when sizing the torus grid
SLACK_LEVELS = (0.01, 0.02, 0.05, 0.1, 0.2, 0.3)
FFT_BATCH_ENTRIES = 1 << 22


class Polynomial:
    """P(z) = sum_alpha c_alpha z^alpha with finitely many nonzero coefficients"""

    def __init__(self, dimension: int, coefficients: Mapping[MultiIndex, complex]):
        if dimension < 1:
            raise PolynomialError(f"dimension must be >= 1, got {dimension}")
        self.dimension = dimension
        self._coefficients: Dict[MultiIndex, complex] = {}
        for alpha, value in coefficients.items():
            if not isinstance(alpha, MultiIndex):
                alpha = MultiIndex(tuple(alpha))
            if alpha.dimension != dimension:
                raise DimensionMismatchError(f"exponent {alpha} does not have length {dimension}")
            value = complex(value)
            if math.isnan(value.real) or math.isnan(value.imag):
                raise PolynomialError(f"NaN coefficient at {alpha}")
            if value != 0:
                self._coefficients[alpha] = value
        self._support = tuple(sorted(self._coefficients))

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n, {})

    @classmethod
    def monomial(cls, alpha: MultiIndex, coefficient: complex = 1.0) -> "Polynomial":
        return cls(alpha.dimension, {alpha: coefficient})

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[Tuple[Sequence[int], complex]]) -> "Polynomial":
        coefficients: Dict[MultiIndex, complex] = {}
        for alpha, value in terms:
            key = alpha if isinstance(alpha, MultiIndex) else MultiIndex(tuple(alpha))
            coefficients[key] = coefficients.get(key, 0) + value
        return cls(n, coefficients)

    @property
    def coefficients(self) -> Dict[MultiIndex, complex]:
        return dict(self._coefficients)

    @property
    def support(self) -> Tuple[MultiIndex, ...]:
        return self._support

    def coefficient(self, alpha: MultiIndex) -> complex:
        return self._coefficients.get(alpha, 0j)

    def is_zero(self) -> bool:
        return not self._coefficients

    def degree(self) -> int:
        return max((alpha.order for alpha in self._support), default=0)

    def orders(self) -> List[int]:
        return sorted({alpha.order for alpha in self._support})

    def is_homogeneous(self) -> bool:
        return len(self.orders()) <= 1

    def has_nonnegative_coefficients(self) -> bool:
        return all(c.imag == 0 and c.real >= 0 for c in self._coefficients.values())

    def is_symmetric(self) -> bool:
        """Invariant under every permutation of the variables"""
        by_pattern: Dict[Tuple[int, ...], set] = {}
        for alpha, value in self._coefficients.items():
            by_pattern.setdefault(tuple(sorted(alpha.exponents)), set()).add(value)
        if any(len(values) > 1 for values in by_pattern.values()):
            return False
        return is_permutation_symmetric(self._support)

    def exponent_matrix(self) -> np.ndarray:
        return exponent_matrix(self._support, self.dimension)

    def coefficient_array(self) -> np.ndarray:
        return np.array([self._coefficients[a] for a in self._support], dtype=complex)

    def evaluate(self, z) -> complex:
        """P(z) for one point, or an array of values for the rows of a 2-D input"""
        Z = np.asarray(z, dtype=complex)
        if Z.shape[-1] != self.dimension:
            raise DimensionMismatchError(f"point of length {Z.shape[-1]} for a polynomial in {self.dimension} variables")
        single = Z.ndim == 1
        Z = Z.reshape(-1, self.dimension)
        if self.is_zero():
            values = np.zeros(len(Z), dtype=complex)
        else:
            E = self.exponent_matrix()
            values = np.prod(Z[:, None, :] ** E[None, :, :], axis=2) @ self.coefficient_array()
        return complex(values[0]) if single else values

    def scaled(self, factor: complex) -> "Polynomial":
        return Polynomial(self.dimension, {a: c * factor for a, c in self._coefficients.items()})

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if other.dimension != self.dimension:
            raise DimensionMismatchError(f"adding polynomials in {self.dimension} and {other.dimension} variables")
        merged = dict(self._coefficients)
        for alpha, value in other._coefficients.items():
            merged[alpha] = merged.get(alpha, 0) + value
        return Polynomial(self.dimension, merged)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.dimension == other.dimension and self._coefficients == other._coefficients

    def __len__(self) -> int:
        return len(self._coefficients)

    def __repr__(self) -> str:
        return f"Polynomial(n={self.dimension}, terms={len(self)}, degree={self.degree()})"

    def to_json_list(self) -> List[dict]:
        return [{"alpha": a.to_list(), "re": c.real, "im": c.imag} for a, c in
                ((a, self._coefficients[a]) for a in self._support)]

    @classmethod
    def from_json_list(cls, n: int, data: Sequence[dict]) -> "Polynomial":
        try:
            terms = [(tuple(item["alpha"]), complex(float(item["re"]), float(item.get("im", 0.0)))) for item in data]
        except (KeyError, TypeError, ValueError) as e:
            raise PolynomialError(f"invalid polynomial description: {e}") from e
        return cls.from_terms(n, terms)


def random_polynomial(spec: IndexSetSpec, rng: np.random.Generator, real: bool = False,
                      cap: int = 10**7) -> Polynomial:
    """Gaussian coefficients on every member of the index set"""
    members = spec.enumerate(cap)
    values = rng.standard_normal(len(members))
    if not real:
        values = values + 1j * rng.standard_normal(len(members))
    return Polynomial(spec.dimension, dict(zip(members, values)))


def project(P: Polynomial, I: IndexSetSpec) -> Polynomial:
    """Q_I: keep exactly the coefficients indexed by I"""
    if I.dimension != P.dimension:
        raise DimensionMismatchError(f"index set in {I.dimension} variables for a polynomial in {P.dimension}")
    if I.generator == Generator.EXPLICIT:
        members = set(I.members)
        keep = lambda alpha: alpha in members  # noqa: E731
    else:
        keep = I.contains
    return Polynomial(P.dimension, {a: c for a, c in P.coefficients.items() if keep(a)})


def homogeneous_part(P: Polynomial, k: int) -> Polynomial:
    """The order-k Taylor part"""
    if k < 0:
        raise PolynomialError(f"order must be >= 0, got {k}")
    return Polynomial(P.dimension, {a: c for a, c in P.coefficients.items() if a.order == k})


def polarization_eval(P: Polynomial, points: Sequence, max_degree: int = 12) -> complex:
    """Symmetric m-linear form of an m-homogeneous P by the sign-average formula"""
    if not P.is_homogeneous():
        raise PolynomialError(f"polarization needs a homogeneous polynomial, orders are {P.orders()}")
    m = P.degree()
    if m > max_degree:
        raise CapacityError(f"polarization of degree {m} exceeds the guard {max_degree}")
    pts = np.asarray(points, dtype=complex).reshape(-1, P.dimension) if len(points) else np.zeros((0, P.dimension))
    if len(pts) != m:
        raise PolynomialError(f"polarization of degree {m} needs {m} points, got {len(pts)}")

    signs = np.array(list(itertools.product((1.0, -1.0), repeat=m))).reshape(-1, m)
    values = P.evaluate(signs @ pts) if m else np.full(1, P.evaluate(np.zeros(P.dimension)))
    return complex((signs.prod(axis=1) * values).sum() / (math.factorial(m) * 2 ** m))


# Sup-norm certification

@dataclass
class GridPlan:
    """Torus grid and moduli cover sized to an evaluation budget"""
    points: Tuple[int, ...]
    slack: float
    cells_per_axis: int

    @property
    def grid_size(self) -> int:
        return int(np.prod(self.points))


def _plan_grid(degrees: np.ndarray, pinned: Optional[int], n: int, budget_points: int,
               single_cell: bool) -> Optional[GridPlan]:
    free = [j for j in range(n) if degrees[j] > 0 and j != pinned]
    best: Optional[GridPlan] = None
    best_factor = math.inf
    for slack in SLACK_LEVELS:
        points = [1] * n
        for j in free:
            points[j] = max(int(degrees[j]) + 1, math.ceil(math.pi * degrees[j] * len(free) / slack))
        size = int(np.prod(points))
        if size > budget_points:
            continue
        if single_cell or n == 1:
            cells = 1
        else:
            cells = int((budget_points / size) ** (1.0 / (n - 1)))
            if cells < 4:
                continue
        actual = math.pi * sum(degrees[j] / points[j] for j in free)
        cover_error = 0.0 if cells == 1 else 2.0 * degrees.sum() * (n - 1) / cells
        factor = (1.0 + cover_error) / (1.0 - actual)
        if factor < best_factor:
            best_factor = factor
            best = GridPlan(tuple(points), actual, cells)
    return best


def _simplex_cells(n: int, cells: int) -> Tuple[np.ndarray, np.ndarray]:
    """Boxes [w_min, w_max] covering the direction simplex {w >= 0, sum w = 1}"""
    h = 1.0 / cells
    index = np.indices((cells,) * (n - 1)).reshape(n - 1, -1).T.astype(float)
    lo = index * h
    lo = lo[lo.sum(axis=1) <= 1.0 + 1e-12]
    hi = np.minimum(lo + h, 1.0)
    last_lo = np.maximum(0.0, 1.0 - hi.sum(axis=1))
    last_hi = np.maximum(0.0, 1.0 - lo.sum(axis=1))
    return np.column_stack([lo, last_lo]), np.column_stack([hi, last_hi])


def _cell_corners(X: LatticeSpec, cells: int) -> np.ndarray:
    """Moduli dominating every unit-sphere point whose direction lies in a cell"""
    n = X.dimension
    if X.is_lp_like and math.isinf(X.p):
        return np.ones((1, n))
    if n == 1:
        return np.array([[1.0 / float(norm(X, np.ones(1)))]])
    w_min, w_max = _simplex_cells(n, cells)
    scale = norm(X, w_min)
    if np.any(scale <= 0):
        return np.full((1, n), math.inf)
    return w_max / scale[:, None]


def _scaled_coefficients(corners: np.ndarray, E: np.ndarray, c: np.ndarray) -> np.ndarray:
    """c_alpha rho^alpha for every corner rho, one row per corner"""
    scaled = np.tile(c, (len(corners), 1))
    for j in range(E.shape[1]):
        scaled = scaled * corners[:, j][:, None] ** E[:, j][None, :]
    return scaled


def _cover_cells(n: int, terms: int, budget_points: int) -> int:
    if n == 1:
        return 1
    return max(4, min(4096, int((budget_points / max(terms, 1)) ** (1.0 / (n - 1)))))


def grid_certificate(P: Polynomial, X: LatticeSpec, budget_points: int) -> Tuple[float, int]:
    """Upper bound for sup over the ball of |P| from a torus grid and a moduli cover

    The torus sup T(rho) is nondecreasing in each modulus, so the ball is
    covered by direction cells evaluated at a dominating corner. On each
    torus a Bernstein slack turns the grid maximum into a bound.

    Returns:
        (bound, evaluations); bound is inf when the budget is too small.
    """
    n = P.dimension
    E = P.exponent_matrix()
    c = P.coefficient_array()
    degrees = E.max(axis=0)
    flat_ball = X.is_lp_like and math.isinf(X.p)

    if P.has_nonnegative_coefficients():
        # Nonnegative coefficients peak at theta = 0
        plan = GridPlan((1,) * n, 0.0, 1 if flat_ball else _cover_cells(n, len(c), budget_points))
    else:
        pinned = int(np.argmax(degrees)) if P.is_homogeneous() and P.degree() > 0 else None
        plan = _plan_grid(degrees, pinned, n, budget_points, flat_ball)
        if plan is None:
            logger.debug(f"Grid certificate skipped for {P!r} on {X.label}: budget {budget_points} too small")
            return math.inf, 0

    corners = _cell_corners(X, plan.cells_per_axis)
    if not np.all(np.isfinite(corners)):
        return math.inf, 0

    scaled = _scaled_coefficients(corners, E, c)
    if plan.grid_size == 1:
        best = float(np.abs(scaled.sum(axis=1)).max())
        return best / (1.0 - plan.slack), len(corners)

    shape = plan.points
    flat_index = np.ravel_multi_index(tuple((E % np.array(shape)).T), shape)
    batch = max(1, FFT_BATCH_ENTRIES // plan.grid_size)
    best = 0.0
    for start in range(0, len(scaled), batch):
        chunk = scaled[start:start + batch]
        grid = np.zeros((len(chunk), plan.grid_size), dtype=complex)
        for t in range(E.shape[0]):
            grid[:, flat_index[t]] += chunk[:, t]
        values = np.fft.ifftn(grid.reshape((len(chunk),) + shape), axes=tuple(range(1, n + 1)))
        best = max(best, float(np.abs(values).max()) * plan.grid_size)
    return best / (1.0 - plan.slack), len(corners) * plan.grid_size


def majorant(P: Polynomial, monomial_sup: Mapping[MultiIndex, float]) -> float:
    """sum |c_alpha| sup|z^alpha|, valid for any ball"""
    return float(sum(abs(c) * monomial_sup[a] for a, c in P.coefficients.items()))


def sup_norm(P: Polynomial, X: LatticeSpec, budget: Optional[BudgetConfig] = None,
             caps: Optional[CapsConfig] = None, table=None,
             extra_starts: Sequence[np.ndarray] = (), search: bool = True) -> Bracket:
    """Certified bracket for sup over the unit ball of X of |P(z)|

    lo is attained at the recorded witness. hi is the smaller of the
    characteristic majorant and, in low dimension, the grid certificate.
    With search=False only fixed test points feed lo.
    """
    if P.dimension != X.dimension:
        raise DimensionMismatchError(f"polynomial in {P.dimension} variables on {X.label}")
    budget = budget or BudgetConfig()
    caps = caps or CapsConfig()
    if P.is_zero():
        return Bracket.exact(0.0, "zero")

    if table is None:
        from ..estimators.characteristics import CharacteristicTable
        table = CharacteristicTable(X, budget)
    sups = {alpha: table.sup_hi(alpha) for alpha in P.support}
    hi = majorant(P, sups)
    method = "majorant"

    rng = np.random.default_rng(budget.seed)
    objective = MonomialObjective(P.exponent_matrix(), P.coefficient_array())
    if not search or len(P) > caps.search_terms_cap:
        lo, witness, evaluations = _fixed_points_only(P, X)
        method_lo = "fixed-points"
    else:
        decreasing = P.has_nonnegative_coefficients() and P.is_symmetric()
        result = maximize_on_ball(objective, X, budget, rng, extra_starts, decreasing=decreasing)
        lo, witness, evaluations = result.value, result.witness, result.evaluations
        method_lo = "ascent"

    if P.dimension <= caps.certify_dimension and len(P) > 1:
        certified, grid_evaluations = grid_certificate(P, X, budget.certify_points)
        evaluations += grid_evaluations
        if certified < hi:
            hi, method = certified, "grid"

    bracket = Bracket.from_search(lo, hi, f"{method_lo}/{method}", evaluations, tuple(complex(v) for v in witness),
                                  f"for {P!r} on {X.label}")
    logger.debug(f"sup_norm {P!r} on {X.label}: [{bracket.lo:.6g}, {bracket.hi:.6g}] ({bracket.method})")
    return bracket


def _fixed_points_only(P: Polynomial, X: LatticeSpec) -> Tuple[float, np.ndarray, int]:
    """Flat vector and unit vectors, for supports too large to search"""
    n = X.dimension
    points = np.vstack([np.ones(n), np.eye(n)])
    points = points / norm(X, points)[:, None]
    values = np.abs(P.evaluate(points))
    best = int(np.argmax(values))
    return float(values[best]), points[best].astype(complex), len(points)


def cauchy_check(P: Polynomial, X: LatticeSpec, budget: Optional[BudgetConfig] = None,
                 caps: Optional[CapsConfig] = None, table=None, tol: float = 1e-9) -> List[dict]:
    """Each Taylor part satisfies ||P_k|| <= ||P|| at bracket level"""
    whole = sup_norm(P, X, budget, caps, table)
    rows = []
    for k in range(P.degree() + 1):
        part = homogeneous_part(P, k)
        bracket = sup_norm(part, X, budget, caps, table)
        rows.append({"k": k, "part_lo": bracket.lo, "whole_hi": whole.hi, "ok": bracket.lo <= whole.hi + tol})
    return rows
