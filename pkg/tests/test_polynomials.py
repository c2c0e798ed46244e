import math

import numpy as np
import pytest

from src.core.config import BudgetConfig
from src.core.exceptions import CapacityError, DimensionMismatchError, PolynomialError
from src.core.lattice import LatticeSpec, norm
from src.core.multiindex import IndexSetSpec, MultiIndex
from src.core.polynomials import (Polynomial, cauchy_check, grid_certificate, homogeneous_part, polarization_eval,
                                  project, random_polynomial, sup_norm)


def z1z2():
    return Polynomial(2, {MultiIndex.of(1, 1): 1.0})


def test_evaluate():
    assert z1z2().evaluate([2, 3]) == pytest.approx(6)
    P = Polynomial.from_terms(2, [((2, 0), 2.0), ((1, 1), 3.0)])
    assert P.evaluate([1, 1]) == pytest.approx(5)
    tetra = Polynomial(3, {alpha: 1.0 for alpha in IndexSetSpec.tetra(3, 2).enumerate()})
    assert tetra.evaluate([1, 1, 1]) == pytest.approx(3)


def test_evaluate_rows():
    values = z1z2().evaluate(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert values == pytest.approx([2.0, 12.0])


def test_evaluate_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        z1z2().evaluate([1.0, 2.0, 3.0])


def test_nan_coefficients_are_rejected():
    with pytest.raises(PolynomialError):
        Polynomial(2, {MultiIndex.of(1, 0): math.nan})


def test_zero_coefficients_are_dropped():
    P = Polynomial.from_terms(2, [((1, 0), 1.0), ((1, 0), -1.0), ((0, 1), 2.0)])
    assert len(P) == 1
    assert P.degree() == 1


def test_degree_and_homogeneity():
    P = Polynomial.from_terms(2, [((0, 0), 1.0), ((1, 0), 1.0), ((1, 1), 1.0)])
    assert P.degree() == 2
    assert P.orders() == [0, 1, 2]
    assert not P.is_homogeneous()
    assert z1z2().is_homogeneous()


def test_project():
    P = Polynomial.from_terms(2, [((2, 0), 2.0), ((1, 1), 3.0)])
    Q = project(P, IndexSetSpec.explicit(2, [(1, 1)]))
    assert Q == Polynomial.from_terms(2, [((1, 1), 3.0)])
    assert project(P, IndexSetSpec.full(2, 2)) == P
    assert project(Q, IndexSetSpec.explicit(2, [(1, 1)])) == Q


def test_homogeneous_parts_match_projections():
    rng = np.random.default_rng(4)
    P = random_polynomial(IndexSetSpec.full_upto(3, 3), rng)
    for k in range(4):
        assert homogeneous_part(P, k) == project(P, IndexSetSpec.full(3, k))
    assert homogeneous_part(P, 7).is_zero()

    P = Polynomial.from_terms(2, [((0, 0), 1.0), ((1, 0), 1.0), ((1, 1), 1.0)])
    assert homogeneous_part(P, 2) == z1z2()


def test_polarization_of_z1z2():
    assert polarization_eval(z1z2(), [[1, 0], [0, 1]]) == pytest.approx(0.5)


def test_polarization_is_symmetric_and_recovers_diagonal():
    rng = np.random.default_rng(2)
    P = random_polynomial(IndexSetSpec.full(3, 3), rng)
    points = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    base = polarization_eval(P, points)
    assert polarization_eval(P, points[[2, 0, 1]]) == pytest.approx(base, abs=1e-12)
    z = points[0]
    assert polarization_eval(P, [z, z, z]) == pytest.approx(P.evaluate(z), abs=1e-12)


def test_polarization_guards():
    P = Polynomial.from_terms(2, [((1, 0), 1.0), ((1, 1), 1.0)])
    with pytest.raises(PolynomialError):
        polarization_eval(P, [[1, 0], [0, 1]])
    with pytest.raises(PolynomialError):
        polarization_eval(z1z2(), [[1, 0]])
    with pytest.raises(CapacityError):
        polarization_eval(Polynomial(1, {MultiIndex.of(3): 1.0}), [[1], [1], [1]], max_degree=2)


def test_sup_norm_linear_functional():
    for X in (LatticeSpec.lp(2, 2), LatticeSpec.lorentz(2, 1, 2)):
        bracket = sup_norm(Polynomial(2, {MultiIndex.of(1, 0): 1.0}), X)
        assert bracket.lo == pytest.approx(1.0)
        assert bracket.hi == pytest.approx(1.0)


def test_sup_norm_z1z2_on_l2(budget, l2_2):
    bracket = sup_norm(z1z2(), l2_2, budget)
    assert 0.5 - 1e-6 <= bracket.lo <= bracket.hi <= 0.5 + 1e-9


def test_sup_norm_z1z2_on_l1(budget, l1_2):
    bracket = sup_norm(z1z2(), l1_2, budget)
    assert bracket.lo == pytest.approx(0.25, abs=1e-6)
    assert bracket.hi == pytest.approx(0.25, abs=1e-6)


def test_sup_norm_witness_is_feasible(budget, lorentz_21_2):
    P = Polynomial.from_terms(2, [((2, 0), 1.0), ((1, 1), -2.0), ((0, 2), 1j)])
    bracket = sup_norm(P, lorentz_21_2, budget)
    witness = np.array(bracket.witness)
    assert norm(lorentz_21_2, witness) <= 1 + 1e-9
    assert abs(P.evaluate(witness)) == pytest.approx(bracket.lo)
    assert bracket.lo <= bracket.hi


def test_sup_norm_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        sup_norm(z1z2(), LatticeSpec.lp(2, 3))


def test_zero_polynomial_has_zero_norm():
    bracket = sup_norm(Polynomial.zero(2), LatticeSpec.lp(2, 2))
    assert bracket.lo == bracket.hi == 0.0


def test_grid_certificate_bounds_the_disc_polynomial():
    # |1 + z - z^2| on the disc peaks at sqrt(5) (z = i)
    P = Polynomial.from_terms(1, [((0,), 1.0), ((1,), 1.0), ((2,), -1.0)])
    bound, evaluations = grid_certificate(P, LatticeSpec.lp(math.inf, 1), 100_000)
    assert evaluations > 0
    assert math.sqrt(5) <= bound <= 1.05 * math.sqrt(5)


def test_cauchy_inequality_on_random_polynomials(budget):
    rng = np.random.default_rng(11)
    for X in (LatticeSpec.lp(1, 2), LatticeSpec.lp(math.inf, 2), LatticeSpec.lorentz(2, 1, 2)):
        P = random_polynomial(IndexSetSpec.full_upto(2, 2), rng)
        assert all(row["ok"] for row in cauchy_check(P, X, budget))


def test_json_round_trip():
    P = Polynomial.from_terms(2, [((2, 0), 1 + 2j), ((0, 1), -0.5)])
    assert Polynomial.from_json_list(2, P.to_json_list()) == P
    with pytest.raises(PolynomialError):
        Polynomial.from_json_list(2, [{"alpha": [1, 0]}])


def test_budget_seed_is_reproducible(lorentz_21_2):
    rng = np.random.default_rng(5)
    P = random_polynomial(IndexSetSpec.full(2, 3), rng)
    budget = BudgetConfig(restarts=4, iterations=50, seed=9, certify_points=50_000)
    assert sup_norm(P, lorentz_21_2, budget) == sup_norm(P, lorentz_21_2, budget)
