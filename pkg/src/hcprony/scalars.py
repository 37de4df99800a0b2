"""Scalar fields: exact Gaussian rationals and tolerance-aware complex doubles.

Linear algebra and the Prony algorithms are written against a small field
interface (:class:`ExactField`, :class:`FloatField`) so one code path serves
both realizations.  Exact decisions compare against zero; floating ones
compare magnitudes against ``pivot_tolerance * scale``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Any, Union


class GaussianRational:
    """``re + im*i`` with ``re``, ``im`` rational.  Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re: Any = 0, im: Any = 0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, x: Any) -> GaussianRational:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Rational)):
            return cls(x)
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, float):
            return cls(Fraction(x))
        if isinstance(x, str):
            return parse_gaussian(x)
        raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return self.im == 0 and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.re) if not self.im else hash((self.re, self.im))

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other: Any) -> GaussianRational:
        o = other if isinstance(other, GaussianRational) else GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: Any) -> GaussianRational:
        o = other if isinstance(other, GaussianRational) else GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Any) -> GaussianRational:
        return GaussianRational.coerce(other) - self

    def __mul__(self, other: Any) -> GaussianRational:
        o = other if isinstance(other, GaussianRational) else GaussianRational.coerce(other)
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return GaussianRational(a * c)
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> GaussianRational:
        o = other if isinstance(other, GaussianRational) else GaussianRational.coerce(other)
        c, d = o.re, o.im
        if not c and not d:
            raise ZeroDivisionError("division by zero Gaussian rational")
        a, b = self.re, self.im
        if not d:
            return GaussianRational(a / c, b / c)
        n = c * c + d * d
        return GaussianRational((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other: Any) -> GaussianRational:
        return GaussianRational.coerce(other) / self

    def __pow__(self, k: int) -> GaussianRational:
        if not isinstance(k, int):
            raise TypeError("only integer powers")
        if k < 0:
            return GaussianRational(1) / (self ** -k)
        if not self.im:
            return GaussianRational(self.re ** k)
        result = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return abs(complex(self))

    def bit_length(self) -> int:
        """Largest numerator/denominator bit length over both parts."""
        return max(
            self.re.numerator.bit_length(),
            self.re.denominator.bit_length(),
            self.im.numerator.bit_length(),
            self.im.denominator.bit_length(),
        )

    def __repr__(self) -> str:
        return f"GaussianRational({format_gaussian(self)!r})"

    def __str__(self) -> str:
        return format_gaussian(self)


Scalar = Union[GaussianRational, complex]


def format_gaussian(x: GaussianRational) -> str:
    re_part = f"{x.re.numerator}/{x.re.denominator}"
    if not x.im:
        return re_part
    sign = "-" if x.im < 0 else "+"
    im = abs(x.im)
    return f"{re_part}{sign}{im.numerator}/{im.denominator}*i"


_GAUSS_RE = re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:/\d+)?)?\s*(?:(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*i)?\s*$"
)


def parse_gaussian(text: str) -> GaussianRational:
    """Parse ``"p/q"``, ``"p/q+r/t*i"``, ``"p/q-r/t*i"`` (``/q`` optional)."""
    m = _GAUSS_RE.match(text)
    if not m or (m.group("re") is None and m.group("sign") is None):
        raise ValueError(f"not a Gaussian rational: {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_part = Fraction(0)
    if m.group("sign"):
        im_part = Fraction(m.group("im")) if m.group("im") else Fraction(1)
        if m.group("sign") == "-":
            im_part = -im_part
    return GaussianRational(re_part, im_part)


class ExactField:
    """Gaussian rationals; zero tests are exact."""

    name = "exact"
    exact = True
    zero = GaussianRational(0)
    one = GaussianRational(1)

    def coerce(self, x: Any) -> GaussianRational:
        return GaussianRational.coerce(x)

    def is_negligible(self, x: GaussianRational, scale: float = 1.0) -> bool:
        return x.is_zero()

    def magnitude(self, x: GaussianRational) -> float:
        # Used only to rank pivot candidates; exact code takes the first nonzero.
        return 0.0 if x.is_zero() else 1.0

    def to_complex(self, x: GaussianRational) -> complex:
        return complex(x)

    def __repr__(self) -> str:
        return "ExactField()"


class FloatField:
    """Complex doubles with a relative pivot tolerance."""

    name = "float"
    exact = False
    zero = 0j
    one = 1 + 0j

    def __init__(self, pivot_tolerance: float = 1e-10):
        if not pivot_tolerance > 0:
            raise ValueError("pivot_tolerance must be positive")
        self.pivot_tolerance = pivot_tolerance

    def coerce(self, x: Any) -> complex:
        return complex(x)

    def is_negligible(self, x: complex, scale: float = 1.0) -> bool:
        return abs(x) <= self.pivot_tolerance * scale

    def magnitude(self, x: complex) -> float:
        return abs(x)

    def to_complex(self, x: complex) -> complex:
        return complex(x)

    def __repr__(self) -> str:
        return f"FloatField(pivot_tolerance={self.pivot_tolerance!r})"


Field = Union[ExactField, FloatField]

EXACT = ExactField()


def make_field(mode: str, tolerance: float = 1e-10) -> Field:
    if mode == "exact":
        return EXACT
    if mode == "float":
        return FloatField(tolerance)
    raise ValueError(f"unknown scalar mode {mode!r}")


def serialize_scalar(x: Scalar) -> str | list[float]:
    """Exact values become strings, floating values ``[re, im]`` pairs."""
    if isinstance(x, GaussianRational):
        return format_gaussian(x)
    z = complex(x)
    return [z.real, z.imag]


def deserialize_scalar(obj: Any, field: Field | None = None) -> Scalar:
    if isinstance(obj, str):
        value: Scalar = parse_gaussian(obj)
    elif isinstance(obj, (list, tuple)) and len(obj) == 2:
        value = complex(float(obj[0]), float(obj[1]))
    elif isinstance(obj, (int, float)):
        value = complex(obj)
    else:
        raise ValueError(f"cannot read scalar from {obj!r}")
    return field.coerce(value) if field is not None else value


def rationalize(z: complex, max_denominator: int = 10**9, rel_tol: float = 1e-12) -> GaussianRational:
    """Closest Gaussian rational with bounded denominators, if it is close.

    Raises ``ValueError`` when ``z`` is not within ``rel_tol`` of such a value.
    """
    re_part = Fraction(z.real).limit_denominator(max_denominator)
    im_part = Fraction(z.imag).limit_denominator(max_denominator)
    approx = complex(float(re_part), float(im_part))
    if abs(approx - z) > rel_tol * max(1.0, abs(z)):
        raise ValueError(f"{z!r} is not (close to) a Gaussian rational")
    return GaussianRational(re_part, im_part)


def is_gaussian_integer(x: GaussianRational) -> bool:
    return x.re.denominator == 1 and x.im.denominator == 1


def round_gaussian(z: complex) -> tuple[int, int, float]:
    """Nearest Gaussian integer and the distance to it."""
    r, i = round(z.real), round(z.imag)
    return r, i, math.hypot(z.real - r, z.imag - i)
