import math

import pytest

from src.core.exceptions import ArgumentError, CapacityError, IndexSetError
from src.core.lattice import LatticeSpec, dual_fundamental_function
from src.core.multiindex import IndexSetSpec
from src.estimators.characteristics import CharacteristicTable
from src.estimators.constants import (K_m_bracket, Quantity, chi_mon_bracket, chi_mon_oracle, degree_homogeneous_chain,
                                      degree_sum_bound, ensure_table, kadets_snobar, kadets_snobar_split, lambda_hat,
                                      lebesgue_asymptotic, lebesgue_constant, proj_closed_report,
                                      reference_asymptotic, rw_projection_constant)


# lambda-hat

def test_lambda_hat_linear_l2(budget, l2_2):
    report = lambda_hat(IndexSetSpec.full(2, 1), l2_2, budget)
    assert report.bracket.lo == pytest.approx(math.sqrt(2), abs=1e-6)
    assert report.bracket.hi == pytest.approx(math.sqrt(2), abs=1e-6)
    assert report.chain_consistent()


def test_lambda_hat_single_monomial(budget):
    J = IndexSetSpec.explicit(3, [(1, 2, 0)])
    report = lambda_hat(J, LatticeSpec.lorentz(2, 1, 3), budget)
    assert report.bracket.lo == report.bracket.hi == 1.0


def test_lambda_hat_empty_set(budget, l2_2):
    assert lambda_hat(IndexSetSpec.tetra(2, 3), l2_2, budget).bracket.hi == 0.0


@pytest.mark.parametrize("m", [1, 2, 3])
def test_lambda_hat_l1_below_e_to_the_m(budget, m):
    report = lambda_hat(IndexSetSpec.full(3, m), LatticeSpec.lp(1, 3), budget)
    assert 1.0 <= report.bracket.lo <= report.bracket.hi <= math.e ** m


def test_lambda_hat_tetrahedral_fundamental_bound(budget):
    n, m = 6, 2
    X = LatticeSpec.lorentz(2, 1, n)
    report = lambda_hat(IndexSetSpec.tetra(n, m), X, budget)
    bound = math.e ** m * (dual_fundamental_function(X, n) / dual_fundamental_function(X, m)) ** m
    assert report.bracket.hi <= bound * (1 + 1e-9)
    assert "tetra_fundamental" in {e.name for e in report.chain}


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_projection_constant_below_lambda_hat(budget, l2_2, m):
    assert rw_projection_constant(m, 2) <= lambda_hat(IndexSetSpec.full(2, m), l2_2, budget).bracket.hi + 1e-6


def test_degree_homogeneous_chain(budget):
    chain = degree_homogeneous_chain(IndexSetSpec.full_upto(2, 3), LatticeSpec.lorentz(2, 1, 2), budget)
    assert chain["slice_below_whole"]
    assert chain["whole_below_split"]
    assert sorted(chain["slices"]) == [0, 1, 2, 3]


def test_ensure_table_rejects_other_lattices(budget, l2_2, l1_2):
    with pytest.raises(ArgumentError):
        lambda_hat(IndexSetSpec.full(2, 2), l2_2, budget, table=CharacteristicTable(l1_2))
    table = CharacteristicTable(l2_2)
    assert ensure_table(table, l2_2, budget) is table


# chi_mon and K_m

def test_chi_single_monomial_is_one(budget, linf_2):
    report = chi_mon_bracket(IndexSetSpec.explicit(2, [(2, 1)]), linf_2, budget)
    assert report.bracket.lo == report.bracket.hi == 1.0


@pytest.mark.parametrize("X", [LatticeSpec.lp(1, 4), LatticeSpec.lorentz(3, 1, 4)])
def test_chi_linear_is_one(budget, X):
    report = chi_mon_bracket(IndexSetSpec.full(4, 1), X, budget)
    assert report.bracket.lo == report.bracket.hi == 1.0
    assert report.bracket.method == "phase-free"


def test_chi_quadratic_on_the_bidisc(budget, linf_2):
    report = chi_mon_bracket(IndexSetSpec.full(2, 2), linf_2, budget)
    assert report.bracket.lo >= 1.2
    assert report.bracket.hi <= 3.0
    assert report.chain_consistent()
    assert report.quantity is Quantity.CHI_MON


def test_chi_brackets_are_ordered_across_lattices(budget, l1_2, linf_2):
    J = IndexSetSpec.full(2, 2)
    on_l1 = chi_mon_bracket(J, l1_2, budget).bracket
    on_linf = chi_mon_bracket(J, linf_2, budget).bracket
    assert on_l1.lo <= on_linf.hi + 1e-9


def test_chi_oracle_is_limited_to_two_variables():
    with pytest.raises(CapacityError):
        chi_mon_oracle(IndexSetSpec.full(3, 2), LatticeSpec.lp(2, 3))


@pytest.mark.parametrize("members, lattice", [
    ([(2, 0), (1, 1)], "l2_2"),
    ([(2, 0), (1, 1), (0, 2)], "linf_2"),
    ([(2, 0), (0, 2), (1, 1)], "l1_2"),
])
def test_chi_oracle_lies_in_bracket(budget, request, members, lattice):
    X = request.getfixturevalue(lattice)
    J = IndexSetSpec.explicit(2, members)
    bracket = chi_mon_bracket(J, X, budget).bracket
    oracle = chi_mon_oracle(J, X, restarts=100)
    tol = 0.05
    assert bracket.lo - tol <= oracle <= bracket.hi + tol


def test_K_m_inverts_chi(budget, linf_2):
    J = IndexSetSpec.full(2, 2)
    chi = chi_mon_bracket(J, linf_2, budget).bracket
    K = K_m_bracket(J, linf_2, budget=budget)
    assert K.bracket.lo == chi.hi ** -0.5
    assert K.bracket.hi == chi.lo ** -0.5
    assert K.bracket.hi <= 1.2 ** -0.5
    assert K.params["m"] == 2


def test_K_1_is_one(budget):
    assert K_m_bracket(IndexSetSpec.full_upto(3, 2), LatticeSpec.lp(2, 3), 1, budget).bracket.lo == 1.0


def test_K_m_needs_a_degree(budget, l2_2):
    with pytest.raises(IndexSetError):
        K_m_bracket(IndexSetSpec.full_upto(2, 2), l2_2, budget=budget)
    with pytest.raises(IndexSetError):
        K_m_bracket(IndexSetSpec.tetra_upto(2, 3), l2_2, 3, budget)


# Closed forms

def test_rw_projection_constant():
    assert rw_projection_constant(2, 2) == pytest.approx(1.5, abs=1e-12)
    assert rw_projection_constant(1, 1) == pytest.approx(1.0)
    assert all(rw_projection_constant(m, 2) <= 2 for m in range(1, 51))
    for m in range(1, 11):
        for n in range(1, 11):
            assert rw_projection_constant(m, n) <= kadets_snobar(math.comb(n + m - 1, m)) + 1e-12
    with pytest.raises(ArgumentError):
        rw_projection_constant(0, 2)


def test_kadets_snobar():
    assert kadets_snobar(4) == 2
    assert kadets_snobar(math.comb(4, 2)) == pytest.approx(math.sqrt(6))


def test_lebesgue_constants():
    assert lebesgue_constant(0) == 1.0
    assert lebesgue_constant(1) == pytest.approx(1.4359911, abs=1e-6)
    residuals = [lebesgue_constant(m) - lebesgue_asymptotic(m) for m in (8, 32, 128)]
    assert all(abs(r) <= 1.5 for r in residuals)
    assert max(residuals) - min(residuals) <= 0.1


def test_reference_curves():
    assert reference_asymptotic("sqrt_logn_over_n", math.e ** 2) == pytest.approx(math.sqrt(2) / math.e)
    assert reference_asymptotic("km_two_convex", 50, m=1) == 1.0
    assert reference_asymptotic("logn_over_n_pow", 16, r=2) == pytest.approx(0.4163, abs=1e-4)
    with pytest.raises(ArgumentError):
        reference_asymptotic("nope", 16)
    with pytest.raises(ArgumentError):
        reference_asymptotic("logpow_over_npow", 16, r=2)


def test_degree_sum_and_split_bounds():
    for n in (2, 8, 32):
        for m in (1, 3, 6):
            assert degree_sum_bound(n, m, 2.5)["ok"]
    split = kadets_snobar_split(IndexSetSpec.full_upto(3, 3))
    assert split["ok"]
    assert split["whole"] == pytest.approx(math.sqrt(20))


def test_proj_closed_report():
    report = proj_closed_report(2, 2)
    assert report.bracket.lo == report.bracket.hi == pytest.approx(1.5)
    assert report.chain_consistent()
    row = report.to_row()
    assert row["quantity"] == "proj_closed"
    assert row["chain"].startswith("two_pow_n_minus_1=2")
