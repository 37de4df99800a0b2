"""Exponential sums and memoizing sample oracles on the integer grid."""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .multiindex import IndexSet, MultiIndex
from .scalars import EXACT, Field, GaussianRational, Scalar, make_field, rationalize


# float data is accepted as exact only if it is a small-denominator rational
EXACT_DENOMINATOR_LIMIT = 10**4


class ExactnessError(ValueError):
    """An exact oracle was requested for data that is not Gaussian rational."""


def wrap_imag(y: float) -> float:
    """Representative of ``y`` modulo 2*pi in ``(-pi, pi]``."""
    w = y - 2 * math.pi * math.ceil((y - math.pi) / (2 * math.pi))
    if w <= -math.pi:
        w += 2 * math.pi
    return w


def principal_log(z: complex) -> complex:
    if z == 0:
        raise ValueError("logarithm of zero")
    arg = math.atan2(z.imag, z.real)
    if arg == -math.pi:
        arg = math.pi
    return complex(math.log(abs(z)), arg)


@dataclass(frozen=True)
class ExponentialSumSpec:
    """``f(x) = sum_w c_w exp(w . x)`` with distinct ``w`` and nonzero ``c_w``.

    ``points`` and ``exact_coefficients`` optionally carry exact values of
    ``exp(w)`` and ``c_w``; they are what an exact oracle samples.
    """

    frequencies: tuple[tuple[complex, ...], ...]
    coefficients: tuple[complex, ...]
    points: tuple[tuple[GaussianRational, ...], ...] | None = None
    exact_coefficients: tuple[GaussianRational, ...] | None = None

    def __post_init__(self) -> None:
        freqs = tuple(tuple(complex(w.real, wrap_imag(w.imag)) for w in map(complex, om)) for om in self.frequencies)
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "coefficients", tuple(complex(c) for c in self.coefficients))
        if not freqs:
            raise ValueError("need at least one frequency")
        s = len(freqs[0])
        if s < 1 or any(len(om) != s for om in freqs):
            raise ValueError("frequencies must share a positive dimension")
        if len(self.coefficients) != len(freqs):
            raise ValueError("one coefficient per frequency required")
        if any(c == 0 for c in self.coefficients):
            raise ValueError("coefficients must be nonzero")
        if len(set(freqs)) != len(freqs):
            raise ValueError("frequencies must be pairwise distinct")
        if self.exact_coefficients is not None and any(c.is_zero() for c in self.exact_coefficients):
            raise ValueError("coefficients must be nonzero")

    @classmethod
    def from_points(cls, points: Sequence[Sequence[Any]], coefficients: Sequence[Any]) -> ExponentialSumSpec:
        """Build from the points ``exp(w)``; exact inputs are kept exact."""
        exact_pts = None
        exact_coef = None
        if all(isinstance(x, (int, GaussianRational)) or hasattr(x, "denominator") for p in points for x in p):
            exact_pts = tuple(tuple(GaussianRational.coerce(x) for x in p) for p in points)
        if all(isinstance(c, (int, GaussianRational)) or hasattr(c, "denominator") for c in coefficients):
            exact_coef = tuple(GaussianRational.coerce(c) for c in coefficients)
        freqs = tuple(tuple(principal_log(complex(x)) for x in p) for p in points)
        return cls(freqs, tuple(complex(c) for c in coefficients), exact_pts, exact_coef)

    @property
    def dimension(self) -> int:
        return len(self.frequencies[0])

    @property
    def size(self) -> int:
        return len(self.frequencies)

    def complex_points(self) -> list[tuple[complex, ...]]:
        if self.points is not None:
            return [tuple(complex(x) for x in p) for p in self.points]
        return [tuple(cmath.exp(w) for w in om) for om in self.frequencies]

    def exact_points(self) -> tuple[tuple[GaussianRational, ...], ...]:
        if self.points is not None:
            return self.points
        try:
            return tuple(tuple(rationalize(cmath.exp(w), EXACT_DENOMINATOR_LIMIT) for w in om) for om in self.frequencies)
        except ValueError as exc:
            raise ExactnessError(f"exp(frequency) is not Gaussian rational: {exc}") from None

    def exact_coeffs(self) -> tuple[GaussianRational, ...]:
        if self.exact_coefficients is not None:
            return self.exact_coefficients
        try:
            return tuple(rationalize(c, EXACT_DENOMINATOR_LIMIT) for c in self.coefficients)
        except ValueError as exc:
            raise ExactnessError(f"coefficient is not Gaussian rational: {exc}") from None

    def evaluate(self, alpha: Sequence[int]) -> complex:
        return sum(
            (c * cmath.exp(sum(w * a for w, a in zip(om, alpha))) for c, om in zip(self.coefficients, self.frequencies)),
            0j,
        )


class SampleOracle:
    """Memoized access to ``f`` on the grid, counting distinct sample points."""

    def __init__(self, dimension: int, func: Callable[[MultiIndex], Any], field: Field = EXACT, name: str = "oracle"):
        self.dimension = dimension
        self.field = field
        self.name = name
        self._func = func
        self._memo: dict[MultiIndex, Scalar] = {}
        self._lock = threading.Lock()

    def __call__(self, alpha: Sequence[int]) -> Scalar:
        alpha = tuple(alpha)
        if len(alpha) != self.dimension:
            raise ValueError(f"sample index {alpha} does not have dimension {self.dimension}")
        with self._lock:
            hit = self._memo.get(alpha)
            if hit is not None:
                return hit
        value = self.field.coerce(self._func(alpha))
        with self._lock:
            self._memo.setdefault(alpha, value)
        return value

    @property
    def call_counter(self) -> int:
        return len(self._memo)

    def sampled(self) -> IndexSet:
        return IndexSet(self.dimension, list(self._memo))

    def samples(self) -> dict[MultiIndex, Scalar]:
        return dict(self._memo)

    def reset(self) -> None:
        with self._lock:
            self._memo.clear()

    def __repr__(self) -> str:
        return f"SampleOracle({self.name}, s={self.dimension}, {self.field!r}, evaluations={self.call_counter})"


def _exact_power_evaluator(points, coeffs) -> Callable[[MultiIndex], GaussianRational]:
    cache: dict[tuple[int, int, int], GaussianRational] = {}

    def power(k: int, j: int, e: int) -> GaussianRational:
        key = (k, j, e)
        v = cache.get(key)
        if v is None:
            v = points[k][j] ** e
            cache[key] = v
        return v

    def f(alpha: MultiIndex) -> GaussianRational:
        total = GaussianRational(0)
        for k, c in enumerate(coeffs):
            term = c
            for j, e in enumerate(alpha):
                if e:
                    term = term * power(k, j, e)
            total = total + term
        return total

    return f


def make_oracle_from_spec(spec: ExponentialSumSpec, realization: str | Field = "float") -> SampleOracle:
    """Oracle sampling ``spec`` at integer points.

    ``realization`` is ``"exact"``, ``"float"`` or a field instance.  The exact
    realization needs every ``exp(w_j)`` and every coefficient to be Gaussian
    rational and raises :class:`ExactnessError` otherwise.
    """
    field = make_field(realization) if isinstance(realization, str) else realization
    if field.exact:
        fn = _exact_power_evaluator(spec.exact_points(), spec.exact_coeffs())
        return SampleOracle(spec.dimension, fn, field, name="expsum-exact")
    return SampleOracle(spec.dimension, spec.evaluate, field, name="expsum-float")


def oracle_from_table(dimension: int, table: dict[MultiIndex, Any], field: Field = EXACT) -> SampleOracle:
    """Oracle backed by a fixed sample table; missing points raise ``KeyError``."""
    data = {tuple(k): v for k, v in table.items()}

    def f(alpha: MultiIndex) -> Any:
        try:
            return data[alpha]
        except KeyError:
            raise KeyError(f"no sample at {alpha}") from None

    return SampleOracle(dimension, f, field, name="table")
