"""Multi-start projected ascent of |sum c_alpha z^alpha| over a lattice unit ball"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .config import BudgetConfig
from .lattice import LatticeSpec, norm

logger = logging.getLogger(__name__)

LOG_FLOOR = -40.0
CANDIDATES_PER_RESTART = 8
# Rows times terms per ascent step; large supports get fewer restarts
SEARCH_WORK = 1 << 20


@dataclass
class SearchResult:
    value: float
    witness: np.ndarray
    evaluations: int


class MonomialObjective:
    """z -> |sum_alpha c_alpha z^alpha| with z = exp(u + i theta)"""

    def __init__(self, exponents: np.ndarray, coefficients: np.ndarray):
        self.int_exponents = np.asarray(exponents, dtype=np.int64)
        self.exponents = self.int_exponents.astype(float)
        coefficients = np.asarray(coefficients, dtype=complex)
        self.nonnegative = bool(np.all(coefficients.imag == 0) and np.all(coefficients.real >= 0))
        self.coefficients = coefficients.real.copy() if self.nonnegative else coefficients
        self.dimension = self.exponents.shape[1]

    def _monomials(self, U: np.ndarray, Theta: Optional[np.ndarray]) -> np.ndarray:
        logs = U @ self.exponents.T
        if Theta is None:
            return np.exp(logs)
        return np.exp(logs + 1j * (Theta @ self.exponents.T))

    def log_values(self, U: np.ndarray, Theta: Optional[np.ndarray]) -> np.ndarray:
        P = self._monomials(U, Theta) @ self.coefficients
        return np.log(np.abs(P) + 1e-300)

    def gradients(self, U: np.ndarray, Theta: Optional[np.ndarray]):
        """Gradient of log|P| in u and theta"""
        M = self._monomials(U, Theta)
        P = M @ self.coefficients
        A = (M * self.coefficients) @ self.exponents
        if Theta is None:
            return A / (P[:, None] + 1e-300), None
        weight = np.abs(P) ** 2 + 1e-300
        cross = np.conj(P)[:, None] * A
        return cross.real / weight[:, None], -cross.imag / weight[:, None]

    def evaluate(self, z: np.ndarray) -> complex:
        z = np.asarray(z, dtype=complex).reshape(1, -1)
        return complex(np.prod(z ** self.int_exponents, axis=1) @ self.coefficients)


def _project(X: LatticeSpec, U: np.ndarray) -> np.ndarray:
    """Rescale rows of exp(U) onto the unit sphere of X"""
    U = np.maximum(U, LOG_FLOOR)
    scale = norm(X, np.exp(U))
    return U - np.log(scale)[:, None]


def random_ball_moduli(X: LatticeSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Log-moduli of random points on the positive unit sphere"""
    shape = rng.uniform(0.3, 3.0, size=(count, 1))
    moduli = rng.exponential(size=(count, X.dimension)) ** shape
    # Random sparsity: some starts live on a few coordinates
    mask = rng.uniform(size=(count, X.dimension)) < rng.uniform(0.0, 0.6, size=(count, 1))
    moduli = np.where(mask, 0.0, moduli)
    empty = moduli.sum(axis=1) == 0
    moduli[empty, 0] = 1.0
    return _project(X, np.log(np.maximum(moduli, np.exp(LOG_FLOOR))))


def maximize_on_ball(objective: MonomialObjective, X: LatticeSpec, budget: BudgetConfig,
                     rng: np.random.Generator, extra_starts: Sequence[np.ndarray] = (),
                     decreasing: bool = False) -> SearchResult:
    """Best |P(z)| over ||z||_X <= 1 found by projected ascent from many starts

    Nonnegative objectives are searched in the positive orthant only.
    """
    n = X.dimension
    terms = max(1, objective.exponents.shape[0])
    restarts = max(1, min(budget.restarts, max(4, SEARCH_WORK // terms)))

    fixed = [np.zeros(n)]
    for i in range(n):
        unit = np.full(n, LOG_FLOOR)
        unit[i] = 0.0
        fixed.append(unit)
    for start in extra_starts:
        fixed.append(np.log(np.maximum(np.abs(np.asarray(start, dtype=complex)), np.exp(LOG_FLOOR))))
    pool = np.vstack([_project(X, np.array(fixed)), random_ball_moduli(X, restarts * CANDIDATES_PER_RESTART, rng)])
    if decreasing:
        pool = -np.sort(-pool, axis=1)

    use_phases = not objective.nonnegative
    phases = rng.uniform(0, 2 * np.pi, size=pool.shape) if use_phases else None
    if use_phases:
        phases[: len(fixed)] = 0.0

    scores = objective.log_values(pool, phases)
    evaluations = len(pool)
    keep = np.argsort(-scores, kind="stable")[:restarts]
    U = pool[keep]
    Theta = phases[keep] if use_phases else None
    values = scores[keep]

    step = np.full(len(U), 0.5)
    for _ in range(budget.iterations):
        grad_u, grad_t = objective.gradients(U, Theta)
        U_new = _project(X, U + step[:, None] * grad_u)
        Theta_new = Theta + step[:, None] * grad_t if use_phases else None
        new_values = objective.log_values(U_new, Theta_new)
        evaluations += len(U)

        improved = new_values > values
        U[improved] = U_new[improved]
        if use_phases:
            Theta[improved] = Theta_new[improved]
        values[improved] = new_values[improved]
        step = np.where(improved, np.minimum(step * 1.5, 4.0), step * 0.5)
        if np.all(step < budget.tolerance):
            break

    best = int(np.argmax(values))
    z = np.exp(U[best]).astype(complex)
    if use_phases:
        z = z * np.exp(1j * Theta[best])
    z = z / max(float(norm(X, z)), 1.0)
    value = abs(objective.evaluate(z))
    logger.debug(f"Ball search on {X.label}: best {value:.6g} after {evaluations} evaluations")
    return SearchResult(value, z, evaluations)


def flat_moduli(X: LatticeSpec) -> np.ndarray:
    """Log-moduli of the normalized flat vectors on the first k coordinates, k = 1..n"""
    n = X.dimension
    rows = np.full((n, n), LOG_FLOOR)
    for k in range(n):
        rows[k, : k + 1] = 0.0
    return _project(X, rows)
