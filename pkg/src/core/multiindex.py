"""Multi-indices and finite index sets"""

import math
import logging
import itertools
from enum import Enum
from functools import lru_cache
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import CapacityError, DimensionMismatchError, IndexSetError

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 10**7


@dataclass(frozen=True, order=True)
class MultiIndex:
    """Exponent vector alpha of the monomial z^alpha"""
    exponents: Tuple[int, ...]

    def __post_init__(self):
        exponents = tuple(int(a) for a in self.exponents)
        if any(a < 0 for a in exponents):
            raise IndexSetError(f"negative exponent in {exponents}")
        object.__setattr__(self, "exponents", exponents)

    @classmethod
    def of(cls, *exponents: int) -> "MultiIndex":
        return cls(tuple(exponents))

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, i: int, power: int = 1) -> "MultiIndex":
        exponents = [0] * n
        exponents[i] = power
        return cls(tuple(exponents))

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    @property
    def order(self) -> int:
        return sum(self.exponents)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.exponents) if a)

    @property
    def support_size(self) -> int:
        return sum(1 for a in self.exponents if a)

    @property
    def is_tetrahedral(self) -> bool:
        return all(a in (0, 1) for a in self.exponents)

    @property
    def is_even(self) -> bool:
        return all(a % 2 == 0 for a in self.exponents)

    @property
    def pattern(self) -> Tuple[int, ...]:
        """Nonzero exponents in decreasing order (the orbit under permutations)"""
        return tuple(sorted((a for a in self.exponents if a), reverse=True))

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        _check_same_dimension(self, other)
        return MultiIndex(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        _check_same_dimension(self, other)
        return MultiIndex(tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def to_list(self) -> List[int]:
        return list(self.exponents)

    @classmethod
    def from_list(cls, data: Sequence[int]) -> "MultiIndex":
        return cls(tuple(data))

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.exponents) + ")"


def _check_same_dimension(a: MultiIndex, b: MultiIndex):
    if a.dimension != b.dimension:
        raise DimensionMismatchError(f"multi-indices of length {a.dimension} and {b.dimension}")


class Generator(Enum):
    FULL = "full"
    FULL_UPTO = "full_upto"
    TETRA = "tetra"
    TETRA_UPTO = "tetra_upto"
    EVEN = "even"
    SUPPORT_LEVEL = "support_level"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class IndexSetSpec:
    """A finite index set J in N_0^n given by a named generator or a list"""
    dimension: int
    generator: Generator
    m: int = 0
    level: int = 0
    members: Tuple[MultiIndex, ...] = ()

    def __post_init__(self):
        if self.dimension < 1:
            raise IndexSetError(f"dimension must be >= 1, got {self.dimension}")
        if self.m < 0:
            raise IndexSetError(f"degree must be >= 0, got {self.m}")
        if self.generator == Generator.SUPPORT_LEVEL and not 0 <= self.level <= self.dimension:
            raise IndexSetError(f"support level {self.level} outside 0..{self.dimension}")
        if self.generator == Generator.EXPLICIT:
            for alpha in self.members:
                if alpha.dimension != self.dimension:
                    raise DimensionMismatchError(f"member {alpha} does not have length {self.dimension}")
            object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    # Constructors

    @classmethod
    def full(cls, n: int, m: int) -> "IndexSetSpec":
        return cls(n, Generator.FULL, m)

    @classmethod
    def full_upto(cls, n: int, m: int) -> "IndexSetSpec":
        return cls(n, Generator.FULL_UPTO, m)

    @classmethod
    def tetra(cls, n: int, m: int) -> "IndexSetSpec":
        return cls(n, Generator.TETRA, m)

    @classmethod
    def tetra_upto(cls, n: int, m: int) -> "IndexSetSpec":
        return cls(n, Generator.TETRA_UPTO, m)

    @classmethod
    def even(cls, n: int, m: int) -> "IndexSetSpec":
        return cls(n, Generator.EVEN, m)

    @classmethod
    def support_level(cls, n: int, m: int, level: int) -> "IndexSetSpec":
        return cls(n, Generator.SUPPORT_LEVEL, m, level)

    @classmethod
    def explicit(cls, n: int, members: Sequence) -> "IndexSetSpec":
        items = tuple(a if isinstance(a, MultiIndex) else MultiIndex(tuple(a)) for a in members)
        return cls(n, Generator.EXPLICIT, members=items)

    # Queries

    def enumerate(self, cap: int = DEFAULT_ENUMERATION_CAP) -> Tuple[MultiIndex, ...]:
        """All members exactly once, lexicographically sorted"""
        size = self.cardinality()
        if size > cap:
            raise CapacityError(f"index set {self.label} has {size} members, cap is {cap}")
        return _enumerate_cached(self)

    def cardinality(self) -> int:
        n, m = self.dimension, self.m
        gen = self.generator
        if gen == Generator.FULL:
            return math.comb(n + m - 1, m)
        if gen == Generator.FULL_UPTO:
            return math.comb(n + m, m)
        if gen == Generator.TETRA:
            return math.comb(n, m)
        if gen == Generator.TETRA_UPTO:
            return sum(math.comb(n, k) for k in range(m + 1))
        if gen == Generator.EVEN:
            return math.comb(n + m // 2 - 1, m // 2) if m % 2 == 0 else 0
        if gen == Generator.SUPPORT_LEVEL:
            return support_level_cardinality(m, n, self.level)
        return len(self.members)

    def degree(self) -> int:
        """Largest order of a member (0 for the empty set)"""
        orders = self.orders()
        return max(orders) if orders else 0

    def orders(self) -> List[int]:
        """Orders k for which the slice J(k) is nonempty"""
        gen = self.generator
        if gen in (Generator.FULL, Generator.EVEN, Generator.SUPPORT_LEVEL, Generator.TETRA):
            return [self.m] if self.cardinality() else []
        if gen == Generator.FULL_UPTO:
            return list(range(self.m + 1))
        if gen == Generator.TETRA_UPTO:
            return list(range(min(self.m, self.dimension) + 1))
        return sorted({alpha.order for alpha in self.members})

    def homogeneous_slice(self, k: int) -> "IndexSetSpec":
        """The order-k slice J(k), kept as a named generator when possible"""
        gen, n = self.generator, self.dimension
        if gen == Generator.FULL_UPTO and k <= self.m:
            return IndexSetSpec.full(n, k)
        if gen == Generator.TETRA_UPTO and k <= self.m:
            return IndexSetSpec.tetra(n, k)
        if gen in (Generator.FULL, Generator.TETRA, Generator.EVEN, Generator.SUPPORT_LEVEL) and k == self.m:
            return self
        if gen == Generator.EXPLICIT:
            return IndexSetSpec.explicit(n, [a for a in self.members if a.order == k])
        return IndexSetSpec.explicit(n, [])

    def is_homogeneous(self) -> bool:
        return len(self.orders()) <= 1

    def contains(self, alpha: MultiIndex) -> bool:
        if alpha.dimension != self.dimension:
            return False
        gen = self.generator
        if gen == Generator.FULL:
            return alpha.order == self.m
        if gen == Generator.FULL_UPTO:
            return alpha.order <= self.m
        if gen == Generator.TETRA:
            return alpha.is_tetrahedral and alpha.order == self.m
        if gen == Generator.TETRA_UPTO:
            return alpha.is_tetrahedral and alpha.order <= self.m
        if gen == Generator.EVEN:
            return alpha.is_even and alpha.order == self.m
        if gen == Generator.SUPPORT_LEVEL:
            return alpha.order == self.m and alpha.support_size == self.level
        return alpha in set(self.members)

    @property
    def label(self) -> str:
        gen = self.generator
        if gen == Generator.SUPPORT_LEVEL:
            return f"support_level(m={self.m},L={self.level})"
        if gen == Generator.EXPLICIT:
            return f"explicit[{len(self.members)}]"
        return f"{gen.value}(m={self.m})"

    def to_dict(self) -> dict:
        if self.generator == Generator.EXPLICIT:
            params = [a.to_list() for a in self.members]
        elif self.generator == Generator.SUPPORT_LEVEL:
            params = [self.m, self.level]
        else:
            params = [self.m]
        return {"n": self.dimension, "generator": self.generator.value, "params": params}

    @classmethod
    def from_dict(cls, data: dict) -> "IndexSetSpec":
        try:
            generator = Generator(data["generator"])
            n = int(data["n"])
            params = data.get("params", [])
        except (KeyError, ValueError) as e:
            raise IndexSetError(f"invalid index set description {data!r}") from e
        if generator == Generator.EXPLICIT:
            return cls.explicit(n, [tuple(p) for p in params])
        if generator == Generator.SUPPORT_LEVEL:
            return cls.support_level(n, int(params[0]), int(params[1]))
        return cls(n, generator, int(params[0]))


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Nonnegative integer vectors of length `parts` summing to `total`, lex ascending"""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=256)
def _enumerate_cached(spec: IndexSetSpec) -> Tuple[MultiIndex, ...]:
    n, m, gen = spec.dimension, spec.m, spec.generator
    vectors: List[Tuple[int, ...]]

    if gen == Generator.FULL:
        vectors = list(_compositions(m, n))
    elif gen == Generator.FULL_UPTO:
        vectors = sorted(v for k in range(m + 1) for v in _compositions(k, n))
    elif gen in (Generator.TETRA, Generator.TETRA_UPTO):
        orders = [m] if gen == Generator.TETRA else range(min(m, n) + 1)
        vectors = []
        for k in orders:
            for positions in itertools.combinations(range(n), k):
                vec = [0] * n
                for i in positions:
                    vec[i] = 1
                vectors.append(tuple(vec))
        vectors.sort()
    elif gen == Generator.EVEN:
        vectors = [] if m % 2 else [tuple(2 * a for a in v) for v in _compositions(m // 2, n)]
    elif gen == Generator.SUPPORT_LEVEL:
        vectors = []
        level = spec.level
        if level == 0:
            vectors = [(0,) * n] if m == 0 else []
        elif level <= m:
            for positions in itertools.combinations(range(n), level):
                for parts in _compositions(m - level, level):
                    vec = [0] * n
                    for i, extra in zip(positions, parts):
                        vec[i] = 1 + extra
                    vectors.append(tuple(vec))
        vectors.sort()
    else:
        return spec.members

    logger.debug(f"Enumerated {spec.label} in dimension {n}: {len(vectors)} members")
    return tuple(MultiIndex(v) for v in vectors)


def support_level_cardinality(m: int, n: int, level: int) -> int:
    """Exact |Lambda^L(m,n)|: choose the L variables, then a positive composition of m"""
    if level == 0:
        return 1 if m == 0 else 0
    if level > m or level > n:
        return 0
    return math.comb(n, level) * math.comb(m - 1, level - 1)


def support_level_bounds(m: int, n: int, level: int) -> Tuple[int, int, int]:
    """(lower, exact, upper) with C(n,L) <= |Lambda^L(m,n)| <= 2^(m-1) C(n,L)"""
    if not 1 <= level <= min(m, n):
        raise IndexSetError(f"support level {level} outside 1..min({m},{n})")
    base = math.comb(n, level)
    return base, support_level_cardinality(m, n, level), base * 2 ** (m - 1)


def class_size(alpha: MultiIndex) -> int:
    """|[alpha]| = m!/alpha!, the number of j-tuples representing z^alpha"""
    size = math.factorial(alpha.order)
    for a in alpha.exponents:
        size //= math.factorial(a)
    return size


def reduce_set(spec: IndexSetSpec, cap: int = DEFAULT_ENUMERATION_CAP) -> IndexSetSpec:
    """J-flat: decrement one positive coordinate of each member (order m -> m-1)"""
    orders = spec.orders()
    if len(orders) != 1:
        raise IndexSetError(f"reduce needs an m-homogeneous set, {spec.label} has orders {orders}")
    m = orders[0]
    if m < 1:
        raise IndexSetError("reduce needs order m >= 1")
    if spec.generator == Generator.FULL:
        return IndexSetSpec.full(spec.dimension, m - 1)

    reduced = set()
    for beta in spec.enumerate(cap):
        exps = beta.exponents
        for i, a in enumerate(exps):
            if a:
                reduced.add(exps[:i] + (a - 1,) + exps[i + 1:])
    return IndexSetSpec.explicit(spec.dimension, sorted(reduced))


def reduce_set_jmode(spec: IndexSetSpec, cap: int = DEFAULT_ENUMERATION_CAP) -> IndexSetSpec:
    """J-flat computed in j-mode: j of length m-1 with (j, k) sorted in J for some k"""
    members = spec.enumerate(cap)
    if not members:
        return IndexSetSpec.explicit(spec.dimension, [])
    n = spec.dimension
    m = members[0].order
    targets = {jmode(alpha) for alpha in members}
    reduced = []
    for j in itertools.combinations_with_replacement(range(1, n + 1), m - 1):
        if any(tuple(sorted(j + (k,))) in targets for k in range(1, n + 1)):
            reduced.append(jmode_inverse(j, n))
    return IndexSetSpec.explicit(n, reduced)


def parity_split(alpha: MultiIndex) -> Tuple[MultiIndex, MultiIndex]:
    """(tetrahedral part, even part): odd entries contribute a 1 to the first"""
    tetra = tuple(a % 2 for a in alpha.exponents)
    even = tuple(a - t for a, t in zip(alpha.exponents, tetra))
    return MultiIndex(tetra), MultiIndex(even)


def jmode(alpha: MultiIndex) -> Tuple[int, ...]:
    """Nondecreasing tuple in 1..n listing each variable alpha_i times"""
    return tuple(i + 1 for i, a in enumerate(alpha.exponents) for _ in range(a))


def jmode_inverse(j: Sequence[int], n: int) -> MultiIndex:
    j = tuple(int(v) for v in j)
    if any(not 1 <= v <= n for v in j):
        raise IndexSetError(f"j-mode entries must lie in 1..{n}: {j}")
    if any(a > b for a, b in zip(j, j[1:])):
        raise IndexSetError(f"j-mode tuple must be nondecreasing: {j}")
    counts = Counter(j)
    return MultiIndex(tuple(counts.get(i + 1, 0) for i in range(n)))


def tetra_part(spec: IndexSetSpec, cap: int = DEFAULT_ENUMERATION_CAP) -> IndexSetSpec:
    """J_T = J intersected with the tetrahedral indices"""
    if spec.generator in (Generator.TETRA, Generator.TETRA_UPTO):
        return spec
    if spec.generator == Generator.FULL:
        return IndexSetSpec.tetra(spec.dimension, spec.m)
    if spec.generator == Generator.FULL_UPTO:
        return IndexSetSpec.tetra_upto(spec.dimension, spec.m)
    return IndexSetSpec.explicit(spec.dimension, [a for a in spec.enumerate(cap) if a.is_tetrahedral])


def order_slices(spec: IndexSetSpec) -> Dict[int, IndexSetSpec]:
    """Nonempty homogeneous slices J(k), keyed by order"""
    return {k: spec.homogeneous_slice(k) for k in spec.orders()}


def exponent_matrix(members: Sequence[MultiIndex], n: Optional[int] = None) -> np.ndarray:
    """Members stacked as an integer array of shape (len, n)"""
    if not members:
        return np.zeros((0, n or 0), dtype=np.int64)
    return np.array([a.exponents for a in members], dtype=np.int64)


def log_class_sizes(exponents: np.ndarray) -> np.ndarray:
    """Vectorized log(m!/alpha!) for the rows of an exponent matrix"""
    from scipy.special import gammaln

    orders = exponents.sum(axis=1)
    return gammaln(orders + 1.0) - gammaln(exponents + 1.0).sum(axis=1)


def is_phase_free(members: Sequence[MultiIndex]) -> bool:
    """True when the differences alpha - alpha_0 are linearly independent

    Then every choice of coefficient phases is realized by rotating the
    variables, so sign changes never change the sup norm.
    """
    if len(members) <= 1:
        return True
    matrix = exponent_matrix(members)
    diffs = (matrix[1:] - matrix[0]).astype(float)
    return int(np.linalg.matrix_rank(diffs)) == len(members) - 1


def is_permutation_symmetric(members: Sequence[MultiIndex]) -> bool:
    """True when the set is closed under permuting coordinates"""
    if not members:
        return True
    n = members[0].dimension
    by_pattern: Dict[Tuple[int, ...], int] = Counter(tuple(sorted(a.exponents)) for a in members)
    for pattern, count in by_pattern.items():
        arrangements = math.factorial(n)
        for multiplicity in Counter(pattern).values():
            arrangements //= math.factorial(multiplicity)
        if count != arrangements:
            return False
    return True
