"""Prime averages behind the tetrahedral projection and its constant kappa"""

import math
import cmath
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from ..core.config import BudgetConfig, CapsConfig
from ..core.exceptions import CapacityError
from ..core.lattice import LatticeSpec
from ..core.multiindex import IndexSetSpec
from ..core.polynomials import Polynomial, project, random_polynomial, sup_norm
from ..core.utils import spawn_seeds
from .characteristics import CharacteristicTable

logger = logging.getLogger(__name__)

KAPPA_REFERENCE = 2.209
QUADRATURE_NODES = 32


def primes_up_to(limit: int) -> np.ndarray:
    """Sieve of Eratosthenes"""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(limit)) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve)


def first_primes(count: int) -> np.ndarray:
    """The first `count` primes"""
    if count < 1:
        return np.zeros(0, dtype=np.int64)
    # Rosser's bound p_k < k (log k + log log k) for k >= 6
    limit = 15 if count < 6 else int(count * (math.log(count) + math.log(math.log(count)))) + 1
    primes = primes_up_to(limit)
    return primes[:count]


def prime_count(x: int) -> int:
    return int(len(primes_up_to(x)))


def kappa_partials(num_primes: int) -> np.ndarray:
    """Partial products (prod_{k<=N} sinc(pi/p_k))^-1 for N = 1..num_primes"""
    primes = first_primes(num_primes)
    # np.sinc(x) = sin(pi x) / (pi x)
    return np.exp(-np.cumsum(np.log(np.sinc(1.0 / primes))))


@lru_cache(maxsize=32)
def kappa(num_primes: int) -> float:
    """Partial product of kappa over the first num_primes primes"""
    if num_primes < 1:
        return 1.0
    primes = first_primes(num_primes)
    return float(np.exp(-np.log(np.sinc(1.0 / primes)).sum()))


def _unimodular_average(x: float) -> complex:
    """Integral of exp(2 pi i x t) over t in [0, 1]"""
    if x == 0:
        return 1.0 + 0j
    if float(x).is_integer():
        return 0j
    return (cmath.exp(2j * math.pi * x) - 1.0) / (2j * math.pi * x)


class PrimeAverager:
    """r_m(t) = c_m exp(2 pi i sum_j t_j / p_j) over the primes p_j <= m

    Its first moment is 1 and its moments of order 2..m vanish, so
    averaging P(z_1 r_m(t^1), ..., z_n r_m(t^n)) keeps only the
    tetrahedral coefficients.
    """

    def __init__(self, m: int):
        self.m = m
        self.primes = primes_up_to(m)
        factors = [_unimodular_average(1.0 / p) for p in self.primes]
        self.c_m = complex(1.0 / np.prod(factors)) if factors else 1.0 + 0j

    @property
    def modulus(self) -> float:
        """|r_m(t)|, the same for every t"""
        return abs(self.c_m)

    def value(self, t) -> complex:
        t = np.asarray(t, dtype=float)
        return complex(self.c_m * np.exp(2j * math.pi * (t / self.primes).sum()))

    def moment(self, k: int) -> complex:
        """Closed form of the integral of r_m^k over [0, 1]^pi(m)"""
        if k < 1:
            raise ValueError(f"moment order must be >= 1, got {k}")
        result = self.c_m ** k
        for p in self.primes:
            factor = _unimodular_average(k / p)
            if factor == 0:
                return 0j
            result *= factor
        return complex(result)

    def moment_quadrature(self, k: int, nodes: int = QUADRATURE_NODES) -> complex:
        """Tensor Gauss-Legendre quadrature of r_m^k"""
        dims = len(self.primes)
        if dims == 0:
            return complex(self.c_m ** k)
        if nodes ** dims > 50_000_000:
            raise CapacityError(f"quadrature grid {nodes}^{dims} too large")
        x, w = np.polynomial.legendre.leggauss(nodes)
        t = 0.5 * (x + 1.0)
        w = 0.5 * w
        phase = np.zeros((1,))
        weight = np.ones((1,))
        for p in self.primes:
            phase = (phase[:, None] + t[None, :] / p).reshape(-1)
            weight = (weight[:, None] * w[None, :]).reshape(-1)
        values = (self.c_m * np.exp(2j * math.pi * phase)) ** k
        return complex((values * weight).sum())


def moment(m: int, k: int) -> complex:
    return PrimeAverager(m).moment(k)


def moment_quadrature(m: int, k: int, nodes: int = QUADRATURE_NODES) -> complex:
    return PrimeAverager(m).moment_quadrature(k, nodes)


@dataclass
class TetraCheckReport:
    lattice: str
    m: int
    n: int
    trials: int
    max_ratio: float = 0.0
    kappa_pow_m: float = 0.0
    witnesses: List[dict] = field(default_factory=list)
    violations: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "grid": {"lattice": self.lattice, "m": self.m, "n": self.n, "trials": self.trials},
            "max_ratio": self.max_ratio,
            "kappa_pow_m": self.kappa_pow_m,
            "witnesses": self.witnesses,
            "violations": self.violations,
        }


def tetra_projection_norm_check(X: LatticeSpec, m: int, trials: int = 100, seed: int = 0,
                                budget: Optional[BudgetConfig] = None, caps: Optional[CapsConfig] = None,
                                table: Optional[CharacteristicTable] = None, workers: int = 1,
                                tol: float = 1e-6) -> TetraCheckReport:
    """Random P of degree <= m against the tetrahedral projection bound kappa^m

    For each trial the searched lower end of ||Q P|| (Q keeps the
    tetrahedral coefficients) must not exceed kappa^m times the certified
    upper end of ||P||.
    """
    budget = budget or BudgetConfig()
    caps = caps or CapsConfig()
    n = X.dimension
    if m > caps.desk_degree or n > caps.desk_dimension:
        raise CapacityError(f"tetrahedral check limited to m <= {caps.desk_degree}, n <= {caps.desk_dimension}")

    table = table or CharacteristicTable(X, budget)
    full = IndexSetSpec.full_upto(n, m)
    bound = kappa(prime_count(10**5)) ** m
    seeds = spawn_seeds(seed, trials)

    def run_trial(trial_seed: int) -> dict:
        rng = np.random.default_rng(trial_seed)
        P = random_polynomial(full, rng, real=bool(rng.integers(2)))
        q_lo, p_hi = check_polynomial_projection(P, X, budget.with_seed(trial_seed), caps, table)
        return {"seed": trial_seed, "q_lo": q_lo, "p_hi": p_hi, "ratio": q_lo / p_hi,
                "polynomial": P.to_json_list()}

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(run_trial, seeds))
    else:
        outcomes = [run_trial(s) for s in seeds]

    report = TetraCheckReport(X.label, m, n, trials, kappa_pow_m=bound)
    for outcome in outcomes:
        report.max_ratio = max(report.max_ratio, outcome["ratio"])
        if outcome["q_lo"] > bound * outcome["p_hi"] + tol:
            report.violations.append(outcome)
    top = sorted(outcomes, key=lambda o: -o["ratio"])[:3]
    report.witnesses = [{k: o[k] for k in ("seed", "q_lo", "p_hi", "ratio")} for o in top]
    logger.info(f"Tetrahedral check {X.label} m={m}: max ratio {report.max_ratio:.4f} "
                f"vs kappa^m {bound:.4f}, {len(report.violations)} violations")
    return report


def check_polynomial_projection(P: Polynomial, X: LatticeSpec, budget: Optional[BudgetConfig] = None,
                                caps: Optional[CapsConfig] = None,
                                table: Optional[CharacteristicTable] = None) -> Tuple[float, float]:
    """(lo of ||Q P||, hi of ||P||) with Q keeping the tetrahedral coefficients"""
    tetra = IndexSetSpec.tetra_upto(P.dimension, max(P.degree(), 0))
    Q = project(P, tetra)
    p_hi = sup_norm(P, X, budget, caps, table, search=False).hi
    if Q.is_zero():
        return 0.0, p_hi
    return sup_norm(Q, X, budget, caps, table).lo, p_hi
