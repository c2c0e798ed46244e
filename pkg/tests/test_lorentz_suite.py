import math

import pytest

from src.core.config import CapsConfig
from src.core.exceptions import ArgumentError, CapacityError
from src.core.lattice import LatticeSpec
from src.estimators.lorentz_suite import (bohr_reference, elementary_ratio, even_part_check, growth_table,
                                          lorentz_bound_suite, rhs_growth)


def test_rhs_growth():
    assert rhs_growth(2, 8, 2) == pytest.approx(4.0)
    # 1/r' = 1/3 < 1/2 for r = 1.5
    assert rhs_growth(3, 6, 1.5) == pytest.approx(2.0)


def test_growth_table_cases():
    assert growth_table(3, 1, 16)["value"] == pytest.approx(16 ** (1 / 3))
    assert growth_table(2, 4, 16)["value"] == pytest.approx(4.0)
    assert growth_table(2, 1, 16)["case"] == "r = 2, s = 1"
    assert "lower_bounds" in growth_table(2, 1.5, 16)


def test_bohr_reference_switches_at_two():
    assert bohr_reference(3, 1, 16) == pytest.approx(math.sqrt(math.log(16) / 16))
    assert bohr_reference(1.5, 1, 16) == pytest.approx(1.0 / 16 ** (1 / 3))


def test_even_part_inequality_holds_for_r_up_to_two():
    for r in (1.5, 2.0):
        check = even_part_check(4, 6, r, seed=3, samples=500)
        assert check.applicable
        assert check.ok
        assert check.max_ratio <= 1.0 + 1e-9


def test_even_part_check_skips_large_r():
    check = even_part_check(4, 6, 3.0)
    assert not check.applicable
    assert check.ok


def test_even_part_check_at_unit_vector():
    # At e_1 the left side is 1 and the right side is 2^(m/2r)
    check = even_part_check(2, 1, 2.0, samples=1)
    assert check.max_ratio == pytest.approx(2 ** -0.5)


def test_elementary_ratio_is_positive():
    assert 0 < elementary_ratio(2, LatticeSpec.lp(2, 4), seed=1, samples=200) < math.inf


def test_suite_on_l2(budget):
    report = lorentz_bound_suite(2, 4, 2.0, 2.0, budget)
    assert report.ok
    assert set(report.reports) == {"tetra", "full", "level_1", "level_2"}
    assert set(report.c_implied) == set(report.reports)
    assert all(0 < c <= 4 for c in report.c_implied.values())
    assert report.slice_consistent
    assert report.level_lo_sum >= report.reports["full"].bracket.lo * (1 - 1e-6)
    assert report.to_dict()["level_lo_sum"] == report.level_lo_sum
    assert report.banach_mazur == pytest.approx(1.0)
    assert len(report.rows()) == 4
    assert report.to_dict()["estimate2"]["violations"] == 0


def test_suite_on_lorentz(budget):
    report = lorentz_bound_suite(2, 4, 3.0, 1.0, budget)
    assert report.ok
    assert report.estimate2.applicable is False
    assert report.growth["case"] == "r != 2"
    chain_names = [e.name for e in report.reports["tetra"].chain]
    assert "C_implied" in chain_names


def test_suite_argument_checks(budget):
    with pytest.raises(ArgumentError):
        lorentz_bound_suite(2, 4, 1.0, 2.0, budget)
    with pytest.raises(ArgumentError):
        lorentz_bound_suite(5, 4, 2.0, 2.0, budget)
    with pytest.raises(CapacityError):
        lorentz_bound_suite(3, 4, 2.0, 2.0, budget, CapsConfig(desk_degree=2))
