"""Finite-dimensional symmetric Banach sequence lattices (l_p and Lorentz l_{p,q})"""

import math
import logging
from enum import Enum
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from .bracket import Bracket
from .exceptions import DimensionMismatchError, LatticeError
from .utils import dual_exponent, inverse

logger = logging.getLogger(__name__)


class LatticeFamily(Enum):
    LP = "lp"
    LORENTZ = "lorentz"


@dataclass(frozen=True)
class LatticeSpec:
    """The n-th section of l_p or of the Lorentz space l_{p,q}"""
    family: LatticeFamily
    p: float
    dimension: int
    q: Optional[float] = None

    def __post_init__(self):
        if self.dimension < 1:
            raise LatticeError(f"dimension must be >= 1, got {self.dimension}")
        if not (self.p >= 1):
            raise LatticeError(f"p must lie in [1, inf], got {self.p}")
        if self.family == LatticeFamily.LORENTZ:
            if self.q is None or not (self.q >= 1):
                raise LatticeError(f"Lorentz q must lie in [1, inf], got {self.q}")
        elif self.q is not None:
            object.__setattr__(self, "q", None)

    @classmethod
    def lp(cls, p: float, n: int) -> "LatticeSpec":
        return cls(LatticeFamily.LP, float(p), n)

    @classmethod
    def lorentz(cls, p: float, q: float, n: int) -> "LatticeSpec":
        return cls(LatticeFamily.LORENTZ, float(p), n, float(q))

    @property
    def is_lp_like(self) -> bool:
        """l_p, or a Lorentz space with p == q (which is l_p)"""
        return self.family == LatticeFamily.LP or self.p == self.q

    @property
    def lp_exponent(self) -> Optional[float]:
        return self.p if self.is_lp_like else None

    @property
    def is_quasi_norm(self) -> bool:
        return self.family == LatticeFamily.LORENTZ and self.q > self.p

    @property
    def is_banach(self) -> bool:
        return not self.is_quasi_norm

    @property
    def is_two_convex(self) -> bool:
        if self.family == LatticeFamily.LP:
            return self.p >= 2
        return self.p > 2 and self.q >= 2

    @property
    def is_two_concave(self) -> bool:
        if self.family == LatticeFamily.LP:
            return self.p <= 2
        return self.p < 2 and self.q <= 2

    @property
    def label(self) -> str:
        if self.family == LatticeFamily.LP:
            return f"l_{_fmt(self.p)}^{self.dimension}"
        return f"l_{{{_fmt(self.p)},{_fmt(self.q)}}}^{self.dimension}"

    def section(self, k: int) -> "LatticeSpec":
        """Same lattice on the first k coordinates"""
        return LatticeSpec(self.family, self.p, k, self.q)

    def weights(self, k: Optional[int] = None) -> np.ndarray:
        """Rearrangement weights j^(1/p - 1/q), j = 1..k (Lorentz only)"""
        k = self.dimension if k is None else k
        j = np.arange(1, k + 1, dtype=float)
        return j ** (inverse(self.p) - inverse(self.q))

    def to_dict(self) -> dict:
        data = {"family": self.family.value, "p": _json_real(self.p), "n": self.dimension}
        if self.family == LatticeFamily.LORENTZ:
            data["q"] = _json_real(self.q)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "LatticeSpec":
        try:
            family = LatticeFamily(data["family"])
            p = float(data["p"])
            n = int(data["n"])
        except (KeyError, ValueError) as e:
            raise LatticeError(f"invalid lattice description {data!r}") from e
        if family == LatticeFamily.LORENTZ:
            return cls.lorentz(p, float(data.get("q", p)), n)
        return cls.lp(p, n)


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return f"{value:g}"


def _json_real(value: float):
    return "inf" if math.isinf(value) else value


@dataclass(frozen=True)
class DualLattice:
    """Kothe dual; exact=False means equal only up to constants"""
    spec: LatticeSpec
    exact: bool


def _check_dimension(X: LatticeSpec, z: np.ndarray):
    if z.shape[-1] != X.dimension:
        raise DimensionMismatchError(f"vector of length {z.shape[-1]} for {X.label}")


def decreasing_rearrangement(z) -> np.ndarray:
    """z*: |z| sorted descending along the last axis (stable)"""
    a = np.abs(np.asarray(z))
    return -np.sort(-a, axis=-1, kind="stable")


def norm(X: LatticeSpec, z) -> np.ndarray:
    """Lattice norm of a vector, or of each row of a 2-D array"""
    z = np.asarray(z)
    _check_dimension(X, z)
    a = np.abs(z).astype(float)

    if X.is_lp_like:
        return np.linalg.norm(a, ord=X.p, axis=-1)

    s = decreasing_rearrangement(a) * X.weights()
    if math.isinf(X.q):
        return s.max(axis=-1)
    return (s ** X.q).sum(axis=-1) ** (1.0 / X.q)


def star_norm(X: LatticeSpec, z) -> np.ndarray:
    """Lorentz norm computed on the Cesaro means of z*"""
    if X.family != LatticeFamily.LORENTZ:
        raise LatticeError(f"star_norm needs a Lorentz lattice, got {X.label}")
    z = np.asarray(z)
    _check_dimension(X, z)
    s = decreasing_rearrangement(z)
    j = np.arange(1, X.dimension + 1, dtype=float)
    means = np.cumsum(s, axis=-1) / j
    weighted = means * X.weights()
    if math.isinf(X.q):
        return weighted.max(axis=-1)
    return (weighted ** X.q).sum(axis=-1) ** (1.0 / X.q)


def dual(X: LatticeSpec) -> DualLattice:
    if X.family == LatticeFamily.LP:
        return DualLattice(LatticeSpec.lp(dual_exponent(X.p), X.dimension), True)
    if X.p == 1:
        raise LatticeError("Lorentz duals need p > 1")
    spec = LatticeSpec.lorentz(dual_exponent(X.p), dual_exponent(X.q), X.dimension)
    return DualLattice(spec, X.p == X.q)


def fundamental_function(X: LatticeSpec, k: int) -> float:
    """phi_X(k) = norm of the flat vector with k ones"""
    if not 1 <= k <= X.dimension:
        raise LatticeError(f"k={k} outside 1..{X.dimension}")
    if X.is_lp_like:
        return float(k) ** inverse(X.p)
    if math.isinf(X.q):
        return float(k) ** inverse(X.p)
    j = np.arange(1, k + 1, dtype=float)
    return float((j ** (X.q * inverse(X.p) - 1.0)).sum() ** (1.0 / X.q))


def dual_fundamental_function(X: LatticeSpec, k: int) -> float:
    """phi_{X'}(k) = k / phi_X(k), exact for symmetric Banach lattices"""
    return k / fundamental_function(X, k)


def _weak_type_profile(X: LatticeSpec) -> np.ndarray:
    """Pointwise bound z*_k <= 1/phi_X(k) on the unit ball"""
    return np.array([1.0 / fundamental_function(X, k) for k in range(1, X.dimension + 1)])


def embedding_norm(X: LatticeSpec, Y: LatticeSpec, seed: int = 0, samples: int = 200) -> Bracket:
    """Bracket for the norm of the formal identity X_n -> Y_n"""
    if X.dimension != Y.dimension:
        raise DimensionMismatchError(f"{X.label} and {Y.label} differ in dimension")
    n = X.dimension

    if X.is_lp_like and Y.is_lp_like:
        value = max(1.0, float(n) ** (inverse(Y.p) - inverse(X.p)))
        return Bracket.exact(value, "lp-closed-form")
    if X.family == LatticeFamily.LORENTZ and X.q <= X.p and Y.is_lp_like and Y.p == X.p:
        return Bracket.exact(1.0, "lorentz-into-lp-contraction")

    profile = _weak_type_profile(X)
    hi = float(norm(Y, profile))
    method = "weak-type"
    # Route through l_p when X embeds contractively into it
    if X.family == LatticeFamily.LORENTZ and X.q <= X.p and Y.is_lp_like:
        via_lp = max(1.0, float(n) ** (inverse(Y.p) - inverse(X.p)))
        if via_lp < hi:
            hi, method = via_lp, "via-lp"

    rng = np.random.default_rng(seed)
    shapes = [np.eye(n)[0]]
    shapes.extend(np.concatenate([np.ones(k), np.zeros(n - k)]) for k in range(1, n + 1))
    shapes.append(profile)
    random_profiles = -np.sort(-rng.exponential(size=(samples, n)) ** rng.uniform(0.5, 3.0, size=(samples, 1)), axis=1)
    candidates = np.vstack([np.array(shapes), random_profiles])
    ratios = norm(Y, candidates) / norm(X, candidates)
    best = int(np.argmax(ratios))
    lo = float(ratios[best])
    witness = tuple(complex(v) for v in candidates[best] / norm(X, candidates[best]))
    return Bracket.from_search(lo, hi, f"shapes/{method}", len(candidates), witness,
                               f"for {X.label} into {Y.label}")


def banach_mazur_upper(X: LatticeSpec, Y: LatticeSpec) -> float:
    """d(X, Y) <= ||id: X -> Y|| * ||id: Y -> X||"""
    return embedding_norm(X, Y).hi * embedding_norm(Y, X).hi


def support_function_upper(X: LatticeSpec, g, hint=None) -> float:
    """Certified upper bound for sup over the unit ball of sum_k g_k |z_k|

    Args:
        X: lattice whose dimension equals len(g)
        g: nonnegative weights
        hint: optional near-maximizing vector used to seed the dual certificate

    Returns:
        An upper bound; exact for l_p and for Lorentz spaces with q = 1.
    """
    g = np.asarray(g, dtype=float)
    _check_dimension(X, g)
    if np.any(g < 0):
        raise LatticeError("support function weights must be nonnegative")

    if X.is_lp_like:
        return float(np.linalg.norm(g, ord=dual_exponent(X.p)))

    gs = -np.sort(-g)
    G = np.cumsum(gs)
    w = X.weights()
    q_dual = dual_exponent(X.q)
    best = float(np.linalg.norm(gs / w, ord=q_dual))

    # Dual certificates: any y >= 0 with ||y||_{q'} = 1 gives max_j G_j / (w y)-partial-sums
    def certificate(y: np.ndarray) -> float:
        y = np.abs(y)
        scale = np.linalg.norm(y, ord=q_dual)
        if scale <= 0 or not np.isfinite(scale):
            return math.inf
        partial = np.cumsum(w * y / scale)
        mask = G > 0
        if not np.any(mask):
            return 0.0
        if np.any(partial[mask] <= 0):
            return math.inf
        return float((G[mask] / partial[mask]).max())

    starts = [np.ones_like(g)]
    if hint is not None and not math.isinf(X.q):
        x = -np.sort(-np.abs(np.asarray(hint, dtype=float)))
        starts.append((w * x) ** (X.q - 1.0) + 1e-300)
    for y0 in starts:
        best = min(best, certificate(y0))
        if len(g) > 1 and X.q != 1:
            result = minimize(lambda v: certificate(np.exp(v)), np.log(np.maximum(y0, 1e-12)),
                              method="Nelder-Mead",
                              options={"maxiter": 400 * len(g), "xatol": 1e-10, "fatol": 1e-13})
            best = min(best, certificate(np.exp(result.x)))
    return best


def lozanovskii_factor_lp(p: float, f) -> Tuple[np.ndarray, np.ndarray]:
    """Split f >= 0 as g*h with ||g||_p ||h||_{p'} = ||f||_1"""
    if not 1 < p < math.inf:
        raise LatticeError(f"factorization needs 1 < p < inf, got {p}")
    f = np.asarray(f, dtype=float)
    if np.any(f < 0):
        raise LatticeError("factorization needs nonnegative entries")
    return f ** (1.0 / p), f ** (1.0 / dual_exponent(p))


def lorentz_two_s_lower_bounds(n: int, s: float) -> Dict[str, Any]:
    """Reference lower growth of lambda(l_{2,s}^n) for 1 < s < 2 (up to constants)"""
    if not 1 < s < 2:
        raise LatticeError(f"only defined for 1 < s < 2, got {s}")
    log_n = 1.0 + math.log(n)
    small = log_n ** (-(1.0 - 1.0 / s)) * math.sqrt(n / math.log(math.e + math.log(n)))
    large = math.sqrt(n) / log_n ** (1.0 / s - 0.5)
    return {"s_below_4_3": small, "s_from_4_3": large, "applicable": "s_below_4_3" if s < 4 / 3 else "s_from_4_3"}
