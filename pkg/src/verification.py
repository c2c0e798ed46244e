"""Acceptance suites: each returns CheckResults, never raises on a failed check"""

import math
import logging
import itertools
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Sequence

import numpy as np

from .core.config import BudgetConfig
from .core.exceptions import ArgumentError
from .core.lattice import LatticeSpec, dual_fundamental_function, embedding_norm, norm, star_norm
from .core.multiindex import (IndexSetSpec, class_size, jmode, parity_split, reduce_set,
                              support_level_bounds, support_level_cardinality)
from .core.utils import dual_exponent, spawn_seeds
from .estimators.bohr import bohr_bracket, default_max_degree
from .estimators.characteristics import char_closed_lp, char_numeric
from .estimators.constants import (K_m_bracket, chi_mon_bracket, chi_mon_oracle, degree_homogeneous_chain,
                                   degree_sum_bound, kadets_snobar_split, lambda_hat, lebesgue_asymptotic,
                                   lebesgue_constant, reference_asymptotic, rw_projection_constant)
from .estimators.lorentz_suite import lorentz_bound_suite
from .estimators.tetra_average import KAPPA_REFERENCE, kappa, kappa_partials, moment, moment_quadrature, \
    tetra_projection_norm_check
from .lab import Instance, PolyLab, RunResult
from .reporting import render_csv

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    suite: str
    check: str
    passed: bool
    value: float = math.nan
    limit: float = math.nan
    detail: str = ""

    def to_row(self) -> dict:
        return {"suite": self.suite, "check": self.check, "passed": self.passed,
                "value": "" if math.isnan(self.value) else self.value,
                "limit": "" if math.isnan(self.limit) else self.limit, "detail": self.detail}


def _count_check(suite: str, name: str, failures: int, total: int) -> CheckResult:
    return CheckResult(suite, name, failures == 0, failures, 0, f"{failures} of {total} failed")


def _light_budget(budget: BudgetConfig) -> BudgetConfig:
    """Smaller search budget for suites with hundreds of sup norms"""
    return replace(budget, restarts=min(budget.restarts, 16), iterations=min(budget.iterations, 200),
                   certify_points=min(budget.certify_points, 250_000))


# Exact combinatorics

def suite_combinatorics(lab: PolyLab) -> List[CheckResult]:
    suite = "combinatorics"
    results = []

    bad, total = 0, 0
    for n in range(1, 9):
        for m in range(0, 9):
            total += 2
            bad += len(IndexSetSpec.full(n, m).enumerate()) != math.comb(n + m - 1, m)
            bad += len(IndexSetSpec.tetra(n, m).enumerate()) != math.comb(n, m)
    results.append(_count_check(suite, "cardinality_full_and_tetra", bad, total))

    bad, total = 0, 0
    for n in range(1, 7):
        for m in range(0, 7):
            for alpha in IndexSetSpec.full(n, m).enumerate():
                total += 1
                bad += class_size(alpha) != len(set(itertools.permutations(jmode(alpha))))
    results.append(_count_check(suite, "class_size_permutations", bad, total))

    bad, total = 0, 0
    for n in range(1, 9):
        for m in range(1, 9):
            total += 1
            full = IndexSetSpec.full(n, m)
            listed = IndexSetSpec.explicit(n, full.enumerate())
            bad += reduce_set(listed).enumerate() != IndexSetSpec.full(n, m - 1).enumerate()
    results.append(_count_check(suite, "reduce_full", bad, total))

    bad, total = 0, 0
    for n in range(1, 7):
        for m in range(0, 7):
            for alpha in IndexSetSpec.full(n, m).enumerate():
                total += 1
                tetra, even = parity_split(alpha)
                bad += class_size(alpha) > 2 ** m * class_size(tetra) * class_size(even)
    results.append(_count_check(suite, "even_tetra_class_sizes", bad, total))

    bad, total = 0, 0
    for n in range(1, 7):
        for m in range(1, 7):
            for level in range(1, min(m, n) + 1):
                total += 1
                exact = len(IndexSetSpec.support_level(n, m, level).enumerate())
                lower, count, upper = support_level_bounds(m, n, level)
                bad += not (exact == count == support_level_cardinality(m, n, level) and lower <= exact <= upper)
    results.append(_count_check(suite, "support_level_counts", bad, total))
    return results


# Characteristics and lattices

def suite_characteristics(lab: PolyLab) -> List[CheckResult]:
    suite = "characteristics"
    worst, total = 0.0, 0
    for r in (1.0, 1.5, 2.0, 3.0, math.inf):
        X = LatticeSpec.lp(r, 4)
        patterns = {alpha.pattern: alpha for m in range(1, 6) for n in range(1, 5)
                    for alpha in IndexSetSpec.full(n, m).enumerate()}
        for alpha in patterns.values():
            total += 1
            closed = char_closed_lp(alpha, r)
            bracket = char_numeric(alpha, X.section(alpha.dimension), lab.budget)
            worst = max(worst, abs(bracket.lo - closed) / closed, abs(bracket.hi - closed) / closed)
    return [CheckResult(suite, "numeric_vs_closed_form", worst <= 1e-6, worst, 1e-6, f"{total} patterns")]


def suite_lorentz_norms(lab: PolyLab) -> List[CheckResult]:
    suite = "lorentz_norms"
    results = []
    rng = np.random.default_rng(lab.budget.seed)
    bad, total = 0, 0
    for p, q in ((2.0, 1.0), (2.0, 4.0), (3.0, 2.0), (1.5, 3.0)):
        X = LatticeSpec.lorentz(p, q, 8)
        Z = rng.standard_normal((10_000, 8)) * rng.exponential(size=(10_000, 1))
        plain, starred = norm(X, Z), star_norm(X, Z)
        total += len(Z)
        bad += int(np.sum((plain > starred * (1 + 1e-12)) | (starred > dual_exponent(p) * plain * (1 + 1e-12))))
    results.append(_count_check(suite, "star_norm_sandwich", bad, total))

    bad, total = 0, 0
    for p, q in ((2.0, 1.0), (3.0, 2.0), (4.0, 1.0)):
        for n in (2, 8, 64):
            total += 1
            bracket = embedding_norm(LatticeSpec.lorentz(p, q, n), LatticeSpec.lp(p, n))
            bad += not (bracket.lo == 1.0 and bracket.hi == 1.0)
    results.append(_count_check(suite, "lorentz_into_lp_contraction", bad, total))
    return results


# Prime averages

def suite_kappa(lab: PolyLab) -> List[CheckResult]:
    suite = "kappa"
    value = kappa(10**6)
    partials = kappa_partials(10**5)
    increasing = bool(np.all(np.diff(partials) > 0))
    return [
        CheckResult(suite, "kappa_million_primes", abs(value - KAPPA_REFERENCE) <= 1e-3, value, KAPPA_REFERENCE),
        CheckResult(suite, "partials_increasing", increasing, detail=f"{len(partials)} partial products"),
    ]


def suite_moments(lab: PolyLab) -> List[CheckResult]:
    suite = "moments"
    worst = 0.0
    for m in range(1, 8):
        for k in range(1, m + 1):
            target = 1.0 if k == 1 else 0.0
            worst = max(worst, abs(moment(m, k) - target))
    cross = 0.0
    for m in range(1, 6):
        for k in range(1, m + 1):
            cross = max(cross, abs(moment(m, k) - moment_quadrature(m, k)))
    return [
        CheckResult(suite, "vanishing_moments", worst <= 1e-10, worst, 1e-10),
        CheckResult(suite, "quadrature_cross_check", cross <= 1e-10, cross, 1e-10),
    ]


def suite_tetra_projection(lab: PolyLab) -> List[CheckResult]:
    suite = "tetra_projection"
    budget = _light_budget(lab.budget)
    results = []
    lattices = (LatticeSpec.lp(math.inf, 1), LatticeSpec.lp(2, 1), LatticeSpec.lorentz(2, 1, 1))
    for base in lattices:
        for n in range(1, 4):
            X = base.section(n)
            for m in range(1, 4):
                report = tetra_projection_norm_check(X, m, trials=100, seed=lab.budget.seed, budget=budget,
                                                     caps=lab.caps, table=lab.table(X), workers=lab.workers)
                results.append(CheckResult(suite, f"{X.label}_m{m}", report.ok, report.max_ratio,
                                           report.kappa_pow_m, f"{len(report.violations)} violations"))
    return results


# Closed forms

def suite_projection_constants(lab: PolyLab) -> List[CheckResult]:
    suite = "projection_constants"
    rw_two = max(rw_projection_constant(m, 2) for m in range(1, 51))
    bad = sum(rw_projection_constant(m, n) > math.sqrt(math.comb(n + m - 1, m)) + 1e-12
              for m in range(1, 11) for n in range(1, 11))
    exact = abs(rw_projection_constant(2, 2) - 1.5)
    residuals = [lebesgue_constant(m) - lebesgue_asymptotic(m) for m in (8, 32, 128, 512)]
    worst = max(abs(r) for r in residuals)
    spread = max(residuals) - min(residuals)
    sums = [degree_sum_bound(n, m, r)["ok"] for n in (4, 16, 64) for m in range(1, 6) for r in (1.5, 2.0, 4.0)]
    return [
        CheckResult(suite, "rw_two_variables", rw_two <= 2.0, rw_two, 2.0),
        _count_check(suite, "rw_kadets_snobar", int(bad), 100),
        CheckResult(suite, "rw_2_2", exact <= 1e-12, exact, 1e-12),
        CheckResult(suite, "lebesgue_residual", worst <= 1.5, worst, 1.5),
        CheckResult(suite, "lebesgue_oscillation", spread <= 0.1, spread, 0.1),
        _count_check(suite, "degree_sum_bound", sum(not ok for ok in sums), len(sums)),
    ]


# Projection constants of index sets

def suite_lambda_hat(lab: PolyLab) -> List[CheckResult]:
    suite = "lambda_hat"
    results = []
    bad, total = 0, 0
    for n in range(1, 7):
        X = LatticeSpec.lp(1, n)
        for m in range(1, 5):
            total += 1
            bad += lambda_hat(IndexSetSpec.full(n, m), X, lab.budget, lab.caps, lab.table(X)).bracket.hi \
                > math.e ** m * (1 + 1e-9)
    results.append(_count_check(suite, "l1_full_below_e_pow_m", bad, total))

    bad, total = 0, 0
    for base in (LatticeSpec.lp(2, 1), LatticeSpec.lorentz(2, 1, 1), LatticeSpec.lorentz(3, 1, 1)):
        for n in range(1, 9):
            X = base.section(n)
            for m in range(1, min(3, n) + 1):
                total += 1
                bound = math.e ** m * (dual_fundamental_function(X, n) / dual_fundamental_function(X, m)) ** m
                hi = lambda_hat(IndexSetSpec.tetra(n, m), X, lab.budget, lab.caps, lab.table(X)).bracket.hi
                bad += hi > bound * (1 + 1e-9)
    results.append(_count_check(suite, "tetra_fundamental_bound", bad, total))

    X = LatticeSpec.lp(2, 2)
    bad = sum(rw_projection_constant(m, 2) > lambda_hat(IndexSetSpec.full(2, m), X, lab.budget, lab.caps,
                                                        lab.table(X)).bracket.hi + 1e-6 for m in range(1, 5))
    results.append(_count_check(suite, "rw_below_lambda_hat", int(bad), 4))

    bad, total = 0, 0
    for J in (IndexSetSpec.full_upto(2, 3), IndexSetSpec.tetra_upto(3, 2), IndexSetSpec.full_upto(3, 2)):
        for X in (LatticeSpec.lp(2, J.dimension), LatticeSpec.lp(math.inf, J.dimension),
                  LatticeSpec.lorentz(2, 1, J.dimension)):
            total += 1
            chain = degree_homogeneous_chain(J, X, lab.budget, lab.caps, lab.table(X))
            split = kadets_snobar_split(J)
            bad += not (chain["slice_below_whole"] and chain["whole_below_split"] and split["ok"])
    results.append(_count_check(suite, "degree_homogeneous_chain", bad, total))
    return results


def suite_chi_oracle(lab: PolyLab, tol: float = 0.05) -> List[CheckResult]:
    suite = "chi_oracle"
    results = []
    full = IndexSetSpec.full(2, 2).enumerate()
    subsets = [s for size in range(2, len(full) + 1) for s in itertools.combinations(full, size)]
    for members in subsets:
        J = IndexSetSpec.explicit(2, members)
        brackets = {}
        for p in (1.0, 2.0, math.inf):
            X = LatticeSpec.lp(p, 2)
            chi = chi_mon_bracket(J, X, lab.budget, lab.caps, lab.table(X)).bracket
            brackets[p] = chi
            oracle = chi_mon_oracle(J, X, seed=lab.budget.seed)
            K = K_m_bracket(J, X, 2, lab.budget, lab.caps, lab.table(X)).bracket
            inverted = abs(K.lo - chi.hi ** -0.5) <= 1e-12 and abs(K.hi - chi.lo ** -0.5) <= 1e-12
            closes = oracle - tol <= chi.lo and oracle <= chi.hi + tol
            results.append(CheckResult(suite, f"{J.label}{[a.exponents for a in members]}_{X.label}",
                                       closes and inverted, chi.lo, oracle,
                                       f"bracket [{chi.lo:.6g}, {chi.hi:.6g}]"))
        ordered = brackets[1.0].lo <= brackets[math.inf].hi + 1e-9
        results.append(CheckResult(suite, f"lattice_order{[a.exponents for a in members]}", ordered,
                                   brackets[1.0].lo, brackets[math.inf].hi))
    return results


# Bohr radii

def suite_bohr(lab: PolyLab) -> List[CheckResult]:
    suite = "bohr"
    results = []
    disc = bohr_bracket(IndexSetSpec.full_upto(1, 64), LatticeSpec.lp(math.inf, 1), 64, lab.budget, lab.caps,
                        lab.table(LatticeSpec.lp(math.inf, 1))).bracket
    results.append(CheckResult(suite, "disc_above_one_third", disc.hi >= 1 / 3 - 0.01, disc.hi, 1 / 3 - 0.01))
    results.append(CheckResult(suite, "disc_mobius_upper", disc.hi <= 0.37, disc.hi, 0.37))

    for n in (2, 4, 8, 16):
        X = LatticeSpec.lp(math.inf, n)
        m_max = default_max_degree(n)
        report = bohr_bracket(IndexSetSpec.full_upto(n, m_max), X, m_max, lab.budget, lab.caps, lab.table(X))
        reference = reference_asymptotic("sqrt_logn_over_n", n)
        lo_ratio, hi_ratio = report.bracket.lo / reference, report.bracket.hi / reference
        results.append(CheckResult(suite, f"trend_n{n}", 0.25 <= lo_ratio <= 4 and 0.25 <= hi_ratio <= 4,
                                   lo_ratio, hi_ratio, f"[{report.bracket.lo:.6g}, {report.bracket.hi:.6g}]"))
        k_lo = min(lo for lo, _ in report.params["K_m"].values())
        results.append(CheckResult(suite, f"sandwich_n{n}", report.bracket.lo >= k_lo / 3 - 1e-12
                                   and report.bracket.lo <= report.bracket.hi, report.bracket.lo, k_lo / 3))
    return results


def suite_lorentz(lab: PolyLab) -> List[CheckResult]:
    suite = "lorentz_suite"
    results = []
    grid = [(r, s, m) for r in (1.5, 2.0, 3.0) for s in (1.0, r, 4.0) for m in range(1, 4)]
    items = [(r, s, m, n) for r, s, m in grid for n in (4, 8, 16)]
    seeds = spawn_seeds(lab.budget.seed, len(items))

    def run(item):
        (r, s, m, n), seed = item
        X = LatticeSpec.lorentz(r, s, n)
        return lorentz_bound_suite(m, n, r, s, lab.budget.with_seed(seed), lab.caps, lab.table(X))

    reports = lab.map_ordered(run, list(zip(items, seeds)))
    by_key: Dict[tuple, List] = {}
    for (r, s, m, n), report in zip(items, reports):
        by_key.setdefault((r, s, m), []).append(report)
        estimate = report.estimate2
        results.append(CheckResult(suite, f"r{r:g}_s{s:g}_m{m}_n{n}", report.ok,
                                   report.c_implied.get("tetra", math.nan), math.nan,
                                   f"even-part {'n/a' if not estimate.applicable else estimate.violations}"))
    for (r, s, m), group in by_key.items():
        values = [rep.c_implied["tetra"] for rep in group]
        spread = max(values) / min(values)
        results.append(CheckResult(suite, f"spread_r{r:g}_s{s:g}_m{m}", spread <= 8, spread, 8))
    return results


def suite_determinism(lab: PolyLab) -> List[CheckResult]:
    instances = [Instance("lambda_hat", IndexSetSpec.full(n, 2), LatticeSpec.lorentz(2, 1, n)) for n in (2, 3, 4)]
    first = render_csv(lab.run_instances(instances).rows, {})
    second = render_csv(PolyLab(lab.config).run_instances(instances).rows, {})
    return [CheckResult("determinism", "rerun_identical", first == second)]


SUITES: Dict[str, Callable[[PolyLab], List[CheckResult]]] = {
    "combinatorics": suite_combinatorics,
    "characteristics": suite_characteristics,
    "lorentz_norms": suite_lorentz_norms,
    "kappa": suite_kappa,
    "moments": suite_moments,
    "tetra_projection": suite_tetra_projection,
    "projection_constants": suite_projection_constants,
    "lambda_hat": suite_lambda_hat,
    "chi_oracle": suite_chi_oracle,
    "bohr": suite_bohr,
    "lorentz_suite": suite_lorentz,
    "determinism": suite_determinism,
}


def run_suites(lab: PolyLab, names: Sequence[str]) -> RunResult:
    """Run named suites ('all' for every suite) in the listed order"""
    if "all" in names:
        names = list(SUITES)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise ArgumentError(f"unknown suite(s) {', '.join(unknown)}; expected {', '.join(SUITES)} or all")

    result = RunResult()
    for name in names:
        logger.info(f"Verification suite {name}...")
        checks = SUITES[name](lab)
        for check in checks:
            row = check.to_row()
            result.rows.append(row)
            if not check.passed:
                result.failures.append(row)
        logger.info(f"Suite {name}: {sum(c.passed for c in checks)}/{len(checks)} passed")
    return result
