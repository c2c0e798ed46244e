import math
import itertools

import pytest

from src.core.exceptions import CapacityError, DimensionMismatchError, IndexSetError
from src.core.multiindex import (Generator, IndexSetSpec, MultiIndex, class_size, is_permutation_symmetric,
                                 is_phase_free, jmode, jmode_inverse, parity_split, reduce_set, reduce_set_jmode,
                                 order_slices, support_level_bounds, support_level_cardinality, tetra_part)


def test_multiindex_basics():
    alpha = MultiIndex.of(2, 0, 1)
    assert alpha.order == 3
    assert alpha.support == (0, 2)
    assert alpha.pattern == (2, 1)
    assert not alpha.is_tetrahedral
    assert MultiIndex.of(2, 0, 4).is_even
    assert str(alpha) == "(2,0,1)"
    assert MultiIndex.unit(3, 1, 2) == MultiIndex.of(0, 2, 0)


def test_multiindex_rejects_negative_exponents():
    with pytest.raises(IndexSetError):
        MultiIndex.of(1, -1)


def test_multiindex_arithmetic_checks_dimension():
    assert MultiIndex.of(1, 1) + MultiIndex.of(0, 2) == MultiIndex.of(1, 3)
    with pytest.raises(DimensionMismatchError):
        MultiIndex.of(1, 1) + MultiIndex.of(1, 1, 1)


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("m", range(0, 6))
def test_enumeration_matches_cardinality(n, m):
    for generator in (Generator.FULL, Generator.FULL_UPTO, Generator.TETRA, Generator.TETRA_UPTO, Generator.EVEN):
        spec = IndexSetSpec(n, generator, m)
        members = spec.enumerate()
        assert len(members) == spec.cardinality()
        assert list(members) == sorted(set(members))
        assert all(spec.contains(alpha) for alpha in members)


def test_full_and_tetra_counts():
    assert IndexSetSpec.full(3, 2).cardinality() == math.comb(4, 2)
    assert IndexSetSpec.tetra(5, 3).cardinality() == math.comb(5, 3)
    assert IndexSetSpec.tetra(2, 3).cardinality() == 0
    assert IndexSetSpec.even(3, 3).cardinality() == 0


def test_class_size_counts_permutations():
    for alpha in IndexSetSpec.full(3, 4).enumerate():
        assert class_size(alpha) == len(set(itertools.permutations(jmode(alpha))))


def test_support_level_cardinality_and_bounds():
    for n in range(1, 6):
        for m in range(1, 6):
            for level in range(1, min(m, n) + 1):
                exact = len(IndexSetSpec.support_level(n, m, level).enumerate())
                assert exact == support_level_cardinality(m, n, level)
                lower, count, upper = support_level_bounds(m, n, level)
                assert lower <= count == exact <= upper
    with pytest.raises(IndexSetError):
        support_level_bounds(2, 3, 3)


def test_reduce_full_is_full_of_lower_degree():
    listed = IndexSetSpec.explicit(3, IndexSetSpec.full(3, 3).enumerate())
    assert reduce_set(listed).enumerate() == IndexSetSpec.full(3, 2).enumerate()
    assert reduce_set(IndexSetSpec.full(3, 3)) == IndexSetSpec.full(3, 2)


def test_reduce_agrees_with_jmode_reduction():
    spec = IndexSetSpec.explicit(3, [(2, 0, 1), (0, 1, 2), (1, 1, 1)])
    assert reduce_set(spec).enumerate() == reduce_set_jmode(spec).enumerate()


def test_reduce_needs_homogeneous_set():
    with pytest.raises(IndexSetError):
        reduce_set(IndexSetSpec.full_upto(2, 2))


def test_jmode_inverse_and_validation():
    alpha = MultiIndex.of(2, 0, 1)
    assert jmode(alpha) == (1, 1, 3)
    assert jmode_inverse((1, 1, 3), 3) == alpha
    with pytest.raises(IndexSetError):
        jmode_inverse((3, 1), 3)
    with pytest.raises(IndexSetError):
        jmode_inverse((1, 4), 3)


def test_parity_split_bounds_class_size():
    for alpha in IndexSetSpec.full(4, 5).enumerate():
        tetra, even = parity_split(alpha)
        assert tetra + even == alpha
        assert tetra.is_tetrahedral and even.is_even
        assert class_size(alpha) <= 2 ** alpha.order * class_size(tetra) * class_size(even)


def test_homogeneous_slices_keep_generators():
    spec = IndexSetSpec.full_upto(3, 3)
    assert spec.orders() == [0, 1, 2, 3]
    assert spec.homogeneous_slice(2) == IndexSetSpec.full(3, 2)
    assert IndexSetSpec.tetra_upto(2, 4).orders() == [0, 1, 2]
    assert IndexSetSpec.full(2, 2).homogeneous_slice(1).cardinality() == 0


def test_order_slices():
    slices = order_slices(IndexSetSpec.full_upto(2, 2))
    assert list(slices) == [0, 1, 2]
    assert slices[1] == IndexSetSpec.full(2, 1)
    explicit = IndexSetSpec.explicit(2, [(2, 0), (1, 0), (0, 1)])
    parts = order_slices(explicit)
    assert {k: part.cardinality() for k, part in parts.items()} == {1: 2, 2: 1}
    assert sum(part.cardinality() for part in parts.values()) == explicit.cardinality()
    assert order_slices(IndexSetSpec.tetra(2, 3)) == {}


def test_tetra_part():
    assert tetra_part(IndexSetSpec.full(4, 2)) == IndexSetSpec.tetra(4, 2)
    explicit = IndexSetSpec.explicit(2, [(2, 0), (1, 1)])
    assert tetra_part(explicit).enumerate() == (MultiIndex.of(1, 1),)


def test_phase_free_sets():
    assert is_phase_free(IndexSetSpec.full(3, 1).enumerate())
    assert is_phase_free([MultiIndex.of(2, 0)])
    # z1^2, z1 z2, z2^2 satisfy 2 (1,1) = (2,0) + (0,2)
    assert not is_phase_free(IndexSetSpec.full(2, 2).enumerate())


def test_permutation_symmetry():
    assert is_permutation_symmetric(IndexSetSpec.full(3, 2).enumerate())
    assert not is_permutation_symmetric([MultiIndex.of(2, 0), MultiIndex.of(1, 1)])


def test_explicit_sets_are_deduplicated_and_checked():
    spec = IndexSetSpec.explicit(2, [(1, 1), (2, 0), (1, 1)])
    assert spec.cardinality() == 2
    assert spec.orders() == [2]
    with pytest.raises(DimensionMismatchError):
        IndexSetSpec.explicit(2, [(1, 1, 0)])


def test_enumeration_cap():
    with pytest.raises(CapacityError):
        IndexSetSpec.full(10, 6).enumerate(cap=100)


def test_dict_round_trip():
    for spec in (IndexSetSpec.full(3, 2), IndexSetSpec.support_level(4, 3, 2),
                 IndexSetSpec.explicit(2, [(1, 0), (0, 3)])):
        assert IndexSetSpec.from_dict(spec.to_dict()) == spec
    with pytest.raises(IndexSetError):
        IndexSetSpec.from_dict({"n": 2, "generator": "bogus", "params": [1]})
