"""Poly Lab - Main orchestration class"""

import math
import time
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .core.config import LabConfig
from .core.exceptions import ArgumentError
from .core.lattice import LatticeSpec, embedding_norm, fundamental_function
from .core.multiindex import Generator, IndexSetSpec, class_size, support_level_bounds
from .core.utils import resolve_worker_count, spawn_seeds
from .estimators.bohr import bohr_bracket
from .estimators.characteristics import CharacteristicTable, characteristic
from .estimators.constants import (ConstantReport, K_m_bracket, chi_mon_bracket, proj_closed_report,
                                   lambda_hat, lebesgue_asymptotic, lebesgue_constant,
                                   reference_asymptotic)
from .estimators.lorentz_suite import LorentzSuiteReport, lorentz_bound_suite
from .estimators.tetra_average import kappa, moment

logger = logging.getLogger(__name__)

QUANTITIES = ("lambda_hat", "chi_mon", "K_m", "bohr")


@dataclass(frozen=True)
class Instance:
    """One (quantity, J, X) evaluation of a sweep"""
    quantity: str
    index_set: IndexSetSpec
    lattice: LatticeSpec
    m_max: Optional[int] = None


@dataclass
class RunResult:
    rows: List[dict] = field(default_factory=list)
    failures: List[dict] = field(default_factory=list)
    header: Dict[str, Any] = field(default_factory=dict)
    extra: Dict[str, Any] = field(default_factory=dict)

    def extend(self, other: "RunResult"):
        self.rows.extend(other.rows)
        self.failures.extend(other.failures)


class PolyLab:
    """Main Poly Lab orchestration class

    Owns the configuration, one characteristic table per lattice and the
    worker pool. Every entry point returns rows ready for the writers.
    """

    def __init__(self, config: LabConfig):
        self.config = config
        self.workers = resolve_worker_count(config.threads)

        # Characteristic tables, shared across instances on the same lattice
        self._tables: Dict[LatticeSpec, CharacteristicTable] = {}
        self._tables_lock = threading.Lock()

    @property
    def budget(self):
        return self.config.budget

    @property
    def caps(self):
        return self.config.caps

    def table(self, X: LatticeSpec) -> CharacteristicTable:
        with self._tables_lock:
            table = self._tables.get(X)
            if table is None:
                table = CharacteristicTable(X, self.budget, self.workers)
                self._tables[X] = table
            return table

    def _wall_ms(self, start: float) -> float:
        if not self.config.output.timing:
            return 0
        return round((time.perf_counter() - start) * 1000.0, 3)

    def map_ordered(self, fn: Callable, items: Sequence) -> List:
        """fn over items on the worker pool; results come back in input order"""
        if self.workers <= 1 or len(items) <= 1:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            return list(executor.map(fn, items))

    # Single-instance queries

    def index_set(self, J: IndexSetSpec) -> RunResult:
        members = J.enumerate(self.caps.enumeration_cap)
        rows = [{"index": i, "alpha": " ".join(str(a) for a in alpha.exponents), "order": alpha.order,
                 "class_size": class_size(alpha)} for i, alpha in enumerate(members)]
        header = {"cardinality": J.cardinality()}
        if J.generator == Generator.SUPPORT_LEVEL and 1 <= J.level <= min(J.m, J.dimension):
            header["support_level_bounds"] = list(support_level_bounds(J.m, J.dimension, J.level))
        return RunResult(rows, header=header)

    def characteristics(self, J: IndexSetSpec, X: LatticeSpec, numeric: bool = False) -> RunResult:
        members = J.enumerate(self.caps.enumeration_cap)
        results = self.map_ordered(lambda alpha: characteristic(alpha, X, self.budget, numeric), members)
        return RunResult([r.to_row() for r in results])

    def evaluate(self, instance: Instance, seed: Optional[int] = None) -> Tuple[ConstantReport, float]:
        """One quantity for one instance; returns (report, wall_ms)"""
        budget = self.budget if seed is None else self.budget.with_seed(seed)
        J, X = instance.index_set, instance.lattice
        table = self.table(X)
        start = time.perf_counter()
        if instance.quantity == "lambda_hat":
            report = lambda_hat(J, X, budget, self.caps, table)
        elif instance.quantity == "chi_mon":
            report = chi_mon_bracket(J, X, budget, self.caps, table)
        elif instance.quantity == "K_m":
            report = K_m_bracket(J, X, None, budget, self.caps, table)
        elif instance.quantity == "bohr":
            report = bohr_bracket(J, X, instance.m_max, budget, self.caps, table)
        else:
            raise ArgumentError(f"unknown quantity {instance.quantity!r}, expected one of {', '.join(QUANTITIES)}")
        return report, self._wall_ms(start)

    def run_instances(self, instances: Sequence[Instance]) -> RunResult:
        """Evaluate instances concurrently with per-instance seeds, merged in order"""
        seeds = spawn_seeds(self.budget.seed, len(instances))
        logger.info(f"Running {len(instances)} instances on {self.workers} workers")

        def run(item):
            instance, seed = item
            report, wall_ms = self.evaluate(instance, seed)
            return report, seed, wall_ms

        outcomes = self.map_ordered(run, list(zip(instances, seeds)))
        result = RunResult()
        for report, seed, wall_ms in outcomes:
            row = report.to_row(seed, wall_ms)
            result.rows.append(row)
            if not report.chain_consistent():
                result.failures.append({"check": "chain_consistent", "row": row})
        return result

    def single(self, instance: Instance) -> RunResult:
        report, wall_ms = self.evaluate(instance)
        result = RunResult([report.to_row(self.budget.seed, wall_ms)])
        result.extra["chain"] = [vars(e) for e in report.chain]
        if report.params:
            result.extra["params"] = report.params
        if not report.chain_consistent():
            result.failures.append({"check": "chain_consistent", "row": result.rows[0]})
        return result

    # Reference constants

    def constants(self, primes: Optional[int] = None, lebesgue: Sequence[int] = (),
                  rw: Sequence[Tuple[int, int]] = (), moments: Sequence[Tuple[int, int]] = (),
                  curves: Sequence[Tuple[str, float, Dict[str, float]]] = ()) -> RunResult:
        rows, failures = [], []
        if primes:
            rows.append({"name": "kappa", "args": f"primes={primes}", "value": kappa(primes)})
        for m in lebesgue:
            rows.append({"name": "lebesgue", "args": f"m={m}", "value": lebesgue_constant(m)})
            rows.append({"name": "lebesgue_asymptotic", "args": f"m={m}", "value": lebesgue_asymptotic(m)})
        for m, n in rw:
            report = proj_closed_report(m, n)
            args = f"m={m},n={n}"
            rows.append({"name": "rw_projection", "args": args, "value": report.bracket.lo})
            rows.extend({"name": e.name, "args": args, "value": e.value} for e in report.chain)
            if not report.chain_consistent():
                failures.append({"check": "proj_closed_chain", "args": args})
        for m, k in moments:
            value = moment(m, k)
            rows.append({"name": "moment_re", "args": f"m={m},k={k}", "value": value.real})
            rows.append({"name": "moment_im", "args": f"m={m},k={k}", "value": value.imag})
        for name, n, params in curves:
            rows.append({"name": name, "args": f"n={n}," + ",".join(f"{k}={v}" for k, v in params.items()),
                         "value": reference_asymptotic(name, n, **params)})
        return RunResult(rows, failures=failures)

    def lattice_facts(self, X: LatticeSpec) -> RunResult:
        rows = [{"name": "phi", "args": f"k={k}", "value": fundamental_function(X, k)}
                for k in range(1, X.dimension + 1)]
        for r in (1.0, 2.0, math.inf):
            bracket = embedding_norm(X, LatticeSpec.lp(r, X.dimension), seed=self.budget.seed)
            rows.append({"name": "embedding_lo", "args": f"r={r:g}", "value": bracket.lo})
            rows.append({"name": "embedding_hi", "args": f"r={r:g}", "value": bracket.hi})
        return RunResult(rows)

    def lorentz_suite(self, grid: Sequence[Tuple[int, int, float, float]]) -> RunResult:
        """Suite over (m, n, r, s) tuples, in grid order"""
        seeds = spawn_seeds(self.budget.seed, len(grid))

        def run(item) -> Tuple[LorentzSuiteReport, int]:
            (m, n, r, s), seed = item
            X = LatticeSpec.lorentz(r, s, n)
            return lorentz_bound_suite(m, n, r, s, self.budget.with_seed(seed), self.caps, self.table(X)), seed

        result = RunResult()
        suites = []
        for report, seed in self.map_ordered(run, list(zip(grid, seeds))):
            result.rows.extend(report.rows(seed))
            suites.append(report.to_dict())
            if not report.ok:
                result.failures.append({"check": "lorentz_suite", "suite": report.to_dict()})
        result.extra["suites"] = suites
        return result


def build_grid(quantity: str, generator: str, ns: Sequence[int], ms: Sequence[int],
               lattices: Sequence[Tuple[str, float, Optional[float]]], m_max: Optional[int] = None) -> List[Instance]:
    """Row-major instance grid: lattice family/p/q outermost, then n, then m"""
    if quantity not in QUANTITIES:
        raise ArgumentError(f"unknown quantity {quantity!r}, expected one of {', '.join(QUANTITIES)}")
    if generator in (Generator.EXPLICIT.value, Generator.SUPPORT_LEVEL.value):
        raise ArgumentError(f"sweeps take single-parameter generators, got {generator!r}")
    instances = []
    for family, p, q in lattices:
        for n in ns:
            X = LatticeSpec.lorentz(p, q, n) if family == "lorentz" else LatticeSpec.lp(p, n)
            for m in ms:
                J = IndexSetSpec.from_dict({"n": n, "generator": generator, "params": [m]})
                instances.append(Instance(quantity, J, X, m_max))
    return instances
