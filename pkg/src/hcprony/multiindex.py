"""Multiindices, graded-lex ordering and the index sets built from them.

A multiindex is a plain tuple of nonnegative ints.  :class:`IndexSet` is an
immutable, duplicate-free collection kept in graded-lex ascending order, so
"smallest element" is always ``members[0]``.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Iterator, Sequence

MultiIndex = tuple[int, ...]


def as_multiindex(a: Iterable[int]) -> MultiIndex:
    alpha = tuple(int(x) for x in a)
    if any(x < 0 for x in alpha):
        raise ValueError(f"multiindex entries must be nonnegative: {alpha}")
    return alpha


def degree(a: MultiIndex) -> int:
    return sum(a)


def unit(s: int, j: int) -> MultiIndex:
    """The unit multiindex with a one in coordinate ``j`` (0-based)."""
    return tuple(1 if i == j else 0 for i in range(s))


def add(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x - y for x, y in zip(a, b))


def divides(a: MultiIndex, b: MultiIndex) -> bool:
    """True if ``a <= b`` componentwise, i.e. x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))


def grlex_key(a: MultiIndex) -> tuple[int, MultiIndex]:
    # Within one degree the first differing coordinate decides, smaller first;
    # that is plain tuple comparison.
    return (sum(a), a)


def graded_lex_cmp(a: MultiIndex, b: MultiIndex) -> int:
    """Compare two multiindices in graded-lex order.

    Returns -1, 0 or 1.  ``a`` precedes ``b`` if it has smaller total degree,
    or equal degree and a smaller entry at the first coordinate where they
    differ; so ``(0, 1)`` precedes ``(1, 0)``.
    """
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    ka, kb = grlex_key(a), grlex_key(b)
    return (ka > kb) - (ka < kb)


def pi_weight(a: MultiIndex) -> int:
    """Product of ``a_j + 1`` over all coordinates."""
    return math.prod(x + 1 for x in a)


class IndexSet:
    """Finite set of multiindices of a fixed dimension, graded-lex sorted."""

    __slots__ = ("dimension", "members", "_lookup")

    def __init__(self, dimension: int, members: Iterable[Sequence[int]] = ()):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        uniq = {as_multiindex(m) for m in members}
        for m in uniq:
            if len(m) != dimension:
                raise ValueError(f"multiindex {m} does not have dimension {dimension}")
        self.dimension = dimension
        self.members: tuple[MultiIndex, ...] = tuple(sorted(uniq, key=grlex_key))
        self._lookup = frozenset(uniq)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, a: object) -> bool:
        return a in self._lookup

    def __getitem__(self, i: int) -> MultiIndex:
        return self.members[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IndexSet):
            return NotImplemented
        return self.dimension == other.dimension and self._lookup == other._lookup

    def __hash__(self) -> int:
        return hash((self.dimension, self._lookup))

    def __repr__(self) -> str:
        return f"IndexSet({self.dimension}, {list(self.members)})"

    def _check(self, other: IndexSet) -> None:
        if self.dimension != other.dimension:
            raise ValueError(f"dimension mismatch: {self.dimension} vs {other.dimension}")

    def __or__(self, other: IndexSet) -> IndexSet:
        self._check(other)
        return IndexSet(self.dimension, self._lookup | other._lookup)

    def __and__(self, other: IndexSet) -> IndexSet:
        self._check(other)
        return IndexSet(self.dimension, self._lookup & other._lookup)

    def __sub__(self, other: IndexSet) -> IndexSet:
        self._check(other)
        return IndexSet(self.dimension, self._lookup - other._lookup)

    def issubset(self, other: IndexSet) -> bool:
        return self._lookup <= other._lookup

    def as_frozenset(self) -> frozenset[MultiIndex]:
        return self._lookup

    def shift(self, a: MultiIndex) -> IndexSet:
        return IndexSet(self.dimension, (add(m, a) for m in self.members))

    def minkowski_sum(self, other: IndexSet) -> IndexSet:
        self._check(other)
        return IndexSet(self.dimension, (add(a, b) for a in self.members for b in other.members))

    def max_degree(self) -> int:
        return sum(self.members[-1]) if self.members else -1

    def to_list(self) -> list[list[int]]:
        return [list(m) for m in self.members]


def _compositions(s: int, n: int) -> Iterator[MultiIndex]:
    # all a in N_0^s with |a| = n
    for bars in itertools.combinations(range(n + s - 1), s - 1):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(n + s - 1 - prev - 1)
        yield tuple(parts)


def homogeneous_slice(s: int, n: int) -> IndexSet:
    """All multiindices of total degree exactly ``n``."""
    if s < 1 or n < 0:
        raise ValueError("need s >= 1 and n >= 0")
    return IndexSet(s, _compositions(s, n))


def total_degree_simplex(s: int, n: int) -> IndexSet:
    """All multiindices of total degree at most ``n``."""
    if s < 1 or n < 0:
        raise ValueError("need s >= 1 and n >= 0")
    return IndexSet(s, (a for k in range(n + 1) for a in _compositions(s, k)))


def hyperbolic_cross(s: int, N: int) -> IndexSet:
    """Multiindices ``a`` with ``prod(a_j + 1) <= N``."""
    if s < 1 or N < 1:
        raise ValueError("need s >= 1 and N >= 1")

    def rec(dim: int, budget: int) -> Iterator[MultiIndex]:
        if dim == 0:
            yield ()
            return
        for a in range(budget):
            for rest in rec(dim - 1, budget // (a + 1)):
                yield (a,) + rest

    return IndexSet(s, rec(s, N))


def border(A: IndexSet) -> IndexSet:
    if len(A) == 0:
        raise ValueError("border of an empty set")
    s = A.dimension
    shifted = {add(a, unit(s, j)) for a in A for j in range(s)}
    return IndexSet(s, shifted - A.as_frozenset())


def corona(A: IndexSet) -> IndexSet:
    return A | border(A)


def is_lower_set(A: IndexSet) -> bool:
    s = A.dimension
    for a in A:
        for j in range(s):
            if a[j] > 0 and sub(a, unit(s, j)) not in A:
                return False
    return True


def enumerate_lower_sets(s: int, max_card: int) -> list[IndexSet]:
    """Every lower set in ``N_0^s`` with 1 to ``max_card`` elements.

    Brute force by extending smaller lower sets with admissible border
    elements; meant as a test oracle for small ``max_card``.
    """
    if max_card < 1:
        return []
    origin = (0,) * s
    layer = {frozenset([origin])}
    found: list[IndexSet] = [IndexSet(s, [origin])]
    for _ in range(max_card - 1):
        nxt: set[frozenset[MultiIndex]] = set()
        for members in layer:
            A = IndexSet(s, members)
            for b in border(A):
                if all(b[j] == 0 or sub(b, unit(s, j)) in members for j in range(s)):
                    nxt.add(members | {b})
        found.extend(IndexSet(s, m) for m in sorted(nxt, key=lambda m: sorted(map(grlex_key, m))))
        layer = nxt
    return found
