"""Sparse multivariate polynomials keyed by multiindex."""

from __future__ import annotations

from typing import Any, Iterable, Iterator, Mapping, Sequence

from .multiindex import MultiIndex, add, as_multiindex, grlex_key
from .scalars import EXACT, Field, Scalar, deserialize_scalar, serialize_scalar


class SparsePolynomial:
    """Immutable map from exponent to nonzero coefficient."""

    __slots__ = ("dimension", "field", "_terms")

    def __init__(self, dimension: int, terms: Mapping[Sequence[int], Any] | Iterable[tuple[Sequence[int], Any]] = (), field: Field = EXACT):
        self.dimension = dimension
        self.field = field
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[MultiIndex, Scalar] = {}
        for a, c in items:
            a = as_multiindex(a)
            if len(a) != dimension:
                raise ValueError(f"exponent {a} does not have dimension {dimension}")
            c = field.coerce(c)
            acc[a] = acc[a] + c if a in acc else c
        self._terms = {a: c for a, c in acc.items() if c}

    @classmethod
    def _raw(cls, dimension: int, terms: dict[MultiIndex, Scalar], field: Field) -> SparsePolynomial:
        p = object.__new__(cls)
        p.dimension, p.field, p._terms = dimension, field, terms
        return p

    @classmethod
    def monomial(cls, alpha: Sequence[int], coeff: Any = 1, field: Field = EXACT) -> SparsePolynomial:
        alpha = as_multiindex(alpha)
        return cls(len(alpha), {alpha: coeff}, field)

    @classmethod
    def constant(cls, dimension: int, c: Any, field: Field = EXACT) -> SparsePolynomial:
        return cls(dimension, {(0,) * dimension: c}, field)

    @classmethod
    def zero(cls, dimension: int, field: Field = EXACT) -> SparsePolynomial:
        return cls._raw(dimension, {}, field)

    @property
    def terms(self) -> dict[MultiIndex, Scalar]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[MultiIndex, Scalar]]:
        """Terms in graded-lex ascending order."""
        for a in sorted(self._terms, key=grlex_key):
            yield a, self._terms[a]

    def support(self) -> list[MultiIndex]:
        return sorted(self._terms, key=grlex_key)

    def coefficient(self, alpha: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(alpha), self.field.zero)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(a) for a in self._terms), default=-1)

    def leading_exponent(self) -> MultiIndex:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self._terms, key=grlex_key)

    def leading_coefficient(self) -> Scalar:
        return self._terms[self.leading_exponent()]

    def _check(self, other: SparsePolynomial) -> None:
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")

    def __add__(self, other: SparsePolynomial) -> SparsePolynomial:
        self._check(other)
        out = dict(self._terms)
        for a, c in other._terms.items():
            v = out[a] + c if a in out else c
            if v:
                out[a] = v
            else:
                out.pop(a, None)
        return SparsePolynomial._raw(self.dimension, out, self.field)

    def __neg__(self) -> SparsePolynomial:
        return SparsePolynomial._raw(self.dimension, {a: -c for a, c in self._terms.items()}, self.field)

    def __sub__(self, other: SparsePolynomial) -> SparsePolynomial:
        return self + (-other)

    def scale(self, c: Any) -> SparsePolynomial:
        c = self.field.coerce(c)
        if not c:
            return SparsePolynomial.zero(self.dimension, self.field)
        return SparsePolynomial._raw(self.dimension, {a: c * v for a, v in self._terms.items()}, self.field)

    def shift(self, gamma: Sequence[int]) -> SparsePolynomial:
        """Multiply by the monomial ``x^gamma``."""
        g = tuple(gamma)
        return SparsePolynomial._raw(self.dimension, {add(a, g): c for a, c in self._terms.items()}, self.field)

    def __mul__(self, other: Any) -> SparsePolynomial:
        if not isinstance(other, SparsePolynomial):
            return self.scale(other)
        self._check(other)
        out: dict[MultiIndex, Scalar] = {}
        for a, c in self._terms.items():
            for b, d in other._terms.items():
                k = add(a, b)
                out[k] = out[k] + c * d if k in out else c * d
        return SparsePolynomial._raw(self.dimension, {k: v for k, v in out.items() if v}, self.field)

    def __rmul__(self, other: Any) -> SparsePolynomial:
        return self.scale(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.dimension == other.dimension and self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def with_field(self, field: Field) -> SparsePolynomial:
        return SparsePolynomial(self.dimension, {a: field.coerce(c) for a, c in self._terms.items()}, field)

    def max_coefficient(self) -> float:
        return max((abs(complex(c)) for c in self._terms.values()), default=0.0)

    def evaluate(self, x: Sequence[Any]) -> Scalar:
        return evaluate(self, x)

    def __call__(self, x: Sequence[Any]) -> Scalar:
        return evaluate(self, x)

    def __repr__(self) -> str:
        if not self._terms:
            return "SparsePolynomial(0)"
        parts = []
        for a, c in sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True):
            mono = "*".join(f"x{j + 1}^{e}" if e > 1 else f"x{j + 1}" for j, e in enumerate(a) if e)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return "SparsePolynomial(" + " + ".join(parts) + ")"

    def to_json(self) -> list[list[Any]]:
        return [[list(a), serialize_scalar(c)] for a, c in self.items()]

    @classmethod
    def from_json(cls, dimension: int, data: Sequence[Sequence[Any]], field: Field = EXACT) -> SparsePolynomial:
        return cls(dimension, [(a, deserialize_scalar(c, field)) for a, c in data], field)


def evaluate(p: SparsePolynomial, x: Sequence[Any]) -> Scalar:
    """Value of ``p`` at the point ``x``; exact when ``p`` and ``x`` are."""
    if len(x) != p.dimension:
        raise ValueError(f"point of dimension {len(x)} for polynomial in {p.dimension} variables")
    f = p.field
    xs = [f.coerce(v) if f.exact else complex(v) for v in x]
    powers: list[dict[int, Scalar]] = [{0: f.one} for _ in xs]

    def pw(j: int, e: int) -> Scalar:
        d = powers[j]
        if e not in d:
            d[e] = xs[j] ** e
        return d[e]

    total = f.zero
    for a, c in p._terms.items():
        term = c
        for j, e in enumerate(a):
            if e:
                term = term * pw(j, e)
        total = total + term
    return total
