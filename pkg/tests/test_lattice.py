import math

import numpy as np
import pytest

from src.core.exceptions import DimensionMismatchError, LatticeError
from src.core.lattice import (LatticeFamily, LatticeSpec, banach_mazur_upper, decreasing_rearrangement, dual,
                              dual_fundamental_function, embedding_norm, fundamental_function,
                              lorentz_two_s_lower_bounds, lozanovskii_factor_lp, norm, star_norm,
                              support_function_upper)
from src.core.utils import dual_exponent


def test_lp_norms():
    z = np.array([3.0, -4.0])
    assert norm(LatticeSpec.lp(1, 2), z) == pytest.approx(7.0)
    assert norm(LatticeSpec.lp(2, 2), z) == pytest.approx(5.0)
    assert norm(LatticeSpec.lp(math.inf, 2), z) == pytest.approx(4.0)


def test_lorentz_norm_uses_rearrangement():
    X = LatticeSpec.lorentz(2, 1, 2)
    # sorted (2, 1) weighted by j^(1/2 - 1)
    assert norm(X, [1.0, 2.0]) == pytest.approx(2.0 + 2 ** -0.5)
    assert norm(X, np.array([[1.0, 2.0], [2.0, 1.0]])) == pytest.approx([2.0 + 2 ** -0.5] * 2)


def test_lorentz_with_equal_exponents_is_lp():
    X = LatticeSpec.lorentz(3, 3, 4)
    assert X.is_lp_like
    z = np.array([1.0, -2.0, 0.5, 3.0])
    assert norm(X, z) == pytest.approx(np.linalg.norm(z, 3))


def test_norm_rejects_wrong_length():
    with pytest.raises(DimensionMismatchError):
        norm(LatticeSpec.lp(2, 3), [1.0, 2.0])


def test_lattice_validation():
    with pytest.raises(LatticeError):
        LatticeSpec.lp(0.5, 2)
    with pytest.raises(LatticeError):
        LatticeSpec.lorentz(2, 0.5, 2)
    with pytest.raises(LatticeError):
        LatticeSpec.lp(2, 0)


def test_lattice_flags():
    assert LatticeSpec.lorentz(2, 4, 3).is_quasi_norm
    assert LatticeSpec.lorentz(2, 1, 3).is_banach
    assert LatticeSpec.lorentz(3, 2, 3).is_two_convex
    assert LatticeSpec.lorentz(1.5, 1, 3).is_two_concave
    assert LatticeSpec.lp(math.inf, 3).label == "l_inf^3"


def test_dict_round_trip():
    for X in (LatticeSpec.lp(math.inf, 3), LatticeSpec.lorentz(2, 1, 5)):
        assert LatticeSpec.from_dict(X.to_dict()) == X
    assert LatticeSpec.lp(2, 3).to_dict() == {"family": "lp", "p": 2.0, "n": 3}


def test_star_norm_sandwich():
    rng = np.random.default_rng(0)
    for p, q in ((2, 1), (3, 2), (1.5, 4), (4, 4)):
        X = LatticeSpec.lorentz(p, q, 6)
        Z = rng.standard_normal((500, 6))
        plain, starred = norm(X, Z), star_norm(X, Z)
        assert np.all(plain <= starred * (1 + 1e-12))
        assert np.all(starred <= dual_exponent(p) * plain * (1 + 1e-12))


def test_star_norm_needs_lorentz():
    with pytest.raises(LatticeError):
        star_norm(LatticeSpec.lp(2, 2), [1.0, 1.0])


def test_decreasing_rearrangement():
    assert decreasing_rearrangement([1.0, -3.0, 2.0]).tolist() == [3.0, 2.0, 1.0]


def test_fundamental_functions():
    assert fundamental_function(LatticeSpec.lp(2, 4), 4) == pytest.approx(2.0)
    X = LatticeSpec.lorentz(2, 1, 4)
    assert fundamental_function(X, 2) == pytest.approx(1.0 + 2 ** -0.5)
    for k in range(1, 5):
        assert fundamental_function(X, k) * dual_fundamental_function(X, k) == pytest.approx(k)
    with pytest.raises(LatticeError):
        fundamental_function(X, 5)


def test_duals():
    assert dual(LatticeSpec.lp(3, 2)).spec == LatticeSpec.lp(1.5, 2)
    lorentz = dual(LatticeSpec.lorentz(2, 1, 3))
    assert lorentz.spec == LatticeSpec.lorentz(2, math.inf, 3)
    assert not lorentz.exact
    with pytest.raises(LatticeError):
        dual(LatticeSpec.lorentz(1, 2, 3))


def test_embedding_into_lp_is_contractive_for_small_q():
    for n in (2, 16, 64):
        bracket = embedding_norm(LatticeSpec.lorentz(2, 1, n), LatticeSpec.lp(2, n))
        assert bracket.lo == bracket.hi == 1.0


def test_embedding_lp_closed_form():
    bracket = embedding_norm(LatticeSpec.lp(1, 4), LatticeSpec.lp(math.inf, 4))
    assert bracket.hi == 1.0
    bracket = embedding_norm(LatticeSpec.lp(math.inf, 4), LatticeSpec.lp(2, 4))
    assert bracket.hi == pytest.approx(2.0)


def test_embedding_bracket_is_ordered_for_lorentz_targets():
    bracket = embedding_norm(LatticeSpec.lorentz(2, 4, 6), LatticeSpec.lp(2, 6), seed=3)
    assert 1.0 <= bracket.lo <= bracket.hi
    assert banach_mazur_upper(LatticeSpec.lorentz(2, 1, 6), LatticeSpec.lp(2, 6)) >= 1.0


def test_support_function_on_lp_is_dual_norm():
    g = np.array([1.0, 2.0, 2.0])
    assert support_function_upper(LatticeSpec.lp(2, 3), g) == pytest.approx(3.0)
    assert support_function_upper(LatticeSpec.lp(1, 3), g) == pytest.approx(2.0)


def test_support_function_dominates_sampled_points():
    X = LatticeSpec.lorentz(3, 1.5, 4)
    g = np.array([0.5, 2.0, 1.0, 0.1])
    bound = support_function_upper(X, g)
    rng = np.random.default_rng(1)
    Z = np.abs(rng.standard_normal((2000, 4)))
    Z = Z / norm(X, Z)[:, None]
    assert (Z @ g).max() <= bound + 1e-9


def test_support_function_rejects_negative_weights():
    with pytest.raises(LatticeError):
        support_function_upper(LatticeSpec.lp(2, 2), [1.0, -1.0])


def test_lozanovskii_factorization():
    f = np.array([0.2, 1.5, 3.0])
    g, h = lozanovskii_factor_lp(3.0, f)
    assert g * h == pytest.approx(f)
    assert np.linalg.norm(g, 3) * np.linalg.norm(h, 1.5) == pytest.approx(f.sum())
    with pytest.raises(LatticeError):
        lozanovskii_factor_lp(1.0, f)


def test_two_s_lower_bounds():
    bounds = lorentz_two_s_lower_bounds(64, 1.2)
    assert bounds["applicable"] == "s_below_4_3"
    assert bounds["s_below_4_3"] > 0 and bounds["s_from_4_3"] > 0
    with pytest.raises(LatticeError):
        lorentz_two_s_lower_bounds(64, 2.5)


def test_family_enum_values():
    assert LatticeFamily("lorentz") is LatticeFamily.LORENTZ
