import math

import numpy as np
import pytest

from src.core.lattice import LatticeSpec
from src.core.multiindex import IndexSetSpec, MultiIndex, exponent_matrix
from src.core.utils import dual_exponent
from src.estimators.characteristics import (CharacteristicTable, char_bounds, char_closed_lp, char_numeric,
                                            characteristic)


@pytest.mark.parametrize("r, expected", [(1, 4.0), (2, 2.0), (math.inf, 1.0)])
def test_closed_form_for_z1z2(r, expected):
    assert char_closed_lp(MultiIndex.of(1, 1), r) == pytest.approx(expected)


def test_closed_form_for_tetrahedral_indices():
    alpha = MultiIndex.of(1, 1, 1, 0)
    assert char_closed_lp(alpha, 2) == pytest.approx(3 ** 1.5)


def test_zero_index_has_characteristic_one():
    assert char_closed_lp(MultiIndex.zero(3), 2) == 1.0
    assert char_numeric(MultiIndex.zero(3), LatticeSpec.lorentz(2, 1, 3)).hi == 1.0


def test_numeric_bracket_matches_closed_form(budget):
    for r in (1.0, 1.5, 3.0):
        X = LatticeSpec.lp(r, 3)
        for alpha in IndexSetSpec.full(3, 4).enumerate():
            closed = char_closed_lp(alpha, r)
            bracket = char_numeric(alpha, X, budget)
            assert bracket.lo == pytest.approx(closed, rel=1e-6)
            assert bracket.hi == pytest.approx(closed, rel=1e-6)


def test_numeric_bracket_on_lorentz_flat_maximizer(budget, lorentz_21_2):
    expected = (1 + 2 ** -0.5) ** 2
    bracket = char_numeric(MultiIndex.of(1, 1), lorentz_21_2, budget)
    assert bracket.contains(expected, tol=1e-6)
    assert bracket.width < 1e-5


def test_char_bounds_are_exact_for_z1z2():
    alpha = MultiIndex.of(1, 1)
    assert char_bounds(alpha, LatticeSpec.lp(2, 2))["alpha_norm"] == pytest.approx(2.0)
    assert char_bounds(alpha, LatticeSpec.lp(1, 2))["alpha_norm"] == pytest.approx(4.0)


def test_char_bounds_dominate_the_characteristic(budget):
    for X in (LatticeSpec.lp(3, 3), LatticeSpec.lorentz(3, 1, 3), LatticeSpec.lorentz(2, 1.5, 3)):
        for alpha in IndexSetSpec.full(3, 3).enumerate():
            result = characteristic(alpha, X, budget)
            for value in result.bounds.values():
                assert value >= result.bracket.lo * (1 - 1e-9)


def test_lozanovskii_product_is_exact_on_lp():
    for alpha in IndexSetSpec.full(3, 3).enumerate():
        m = alpha.order
        full = char_closed_lp(alpha, 1.0)
        assert char_closed_lp(alpha, 3.0) * char_closed_lp(alpha, dual_exponent(3.0)) == pytest.approx(full)
        assert full == pytest.approx(m ** m / math.prod(a ** a for a in alpha.exponents))


def test_characteristic_rows():
    result = characteristic(MultiIndex.of(2, 1), LatticeSpec.lp(2, 2))
    assert result.closed_form
    row = result.to_row()
    assert row["alpha"] == "(2,1)"
    assert row["lattice"] == "l_2^2"
    assert row["lo"] == row["hi"]


def test_characteristics_grow_with_the_norm(budget):
    # ||.||_{2,1} >= ||.||_2 pointwise, so c_{2,1} >= c_2
    lorentz, lp = LatticeSpec.lorentz(2, 1, 3), LatticeSpec.lp(2, 3)
    for alpha in IndexSetSpec.full(3, 2).enumerate():
        assert char_numeric(alpha, lorentz, budget).hi >= char_closed_lp(alpha, 2) * (1 - 1e-9)


def test_table_caches_by_pattern(budget):
    table = CharacteristicTable(LatticeSpec.lorentz(2, 1, 3), budget)
    first = table.bracket(MultiIndex.of(2, 1, 0))
    assert table.bracket(MultiIndex.of(0, 1, 2)) == first
    assert len(table) == 1


def test_table_log_bounds_on_lp():
    X = LatticeSpec.lp(2, 3)
    table = CharacteristicTable(X)
    members = IndexSetSpec.full(3, 2).enumerate()
    lo, hi = table.log_bounds(exponent_matrix(members, 3))
    expected = np.log([char_closed_lp(alpha, 2) for alpha in members])
    assert lo == pytest.approx(expected)
    assert hi == pytest.approx(expected)
    assert table.sup_hi(members[0]) == pytest.approx(1 / char_closed_lp(members[0], 2))


def test_table_prefetch_with_workers(budget):
    table = CharacteristicTable(LatticeSpec.lorentz(3, 1, 3), budget, workers=2)
    table.prefetch([(1, 1), (2,), (1, 1, 1)])
    assert len(table) == 3


def test_char_bounds_dominate_on_random_pairs(budget):
    rng = np.random.default_rng(20)
    for _ in range(12):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(1, 6))
        alpha = MultiIndex(tuple(int(k) for k in rng.multinomial(m, np.full(n, 1.0 / n))))
        p = float(rng.uniform(1.2, 4.0))
        if rng.random() < 0.5:
            X = LatticeSpec.lp(p, n)
        else:
            X = LatticeSpec.lorentz(p, float(rng.uniform(1.0, p)), n)
        result = characteristic(alpha, X, budget)
        for name, value in result.bounds.items():
            assert value >= result.bracket.lo * (1 - 1e-9), (name, alpha, X.label)
