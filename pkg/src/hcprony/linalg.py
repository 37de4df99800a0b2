"""Dense linear algebra over a scalar field with explicit rank decisions.

Everything is plain Gaussian elimination; no orthogonal factorizations, so
the exact realization never leaves the Gaussian rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any, Iterable, Sequence

import numpy as np

from .scalars import EXACT, Field, FloatField, Scalar


class RankDeficiencyError(ValueError):
    pass


class DenseMatrix:
    """Immutable row-major matrix of field scalars."""

    __slots__ = ("rows", "cols", "field", "_data")

    def __init__(self, data: Iterable[Iterable[Any]], field: Field = EXACT, cols: int | None = None):
        rows = tuple(tuple(field.coerce(x) for x in row) for row in data)
        ncols = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix rows")
        self.rows = len(rows)
        self.cols = ncols
        self.field = field
        self._data = rows

    @classmethod
    def _raw(cls, rows: tuple[tuple[Scalar, ...], ...], cols: int, field: Field) -> DenseMatrix:
        m = object.__new__(cls)
        m.rows, m.cols, m.field, m._data = len(rows), cols, field, rows
        return m

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], field: Field = EXACT, rows: int | None = None) -> DenseMatrix:
        if not columns:
            return cls._raw(tuple(() for _ in range(rows or 0)), 0, field)
        return cls(zip(*columns), field)

    @classmethod
    def identity(cls, n: int, field: Field = EXACT) -> DenseMatrix:
        return cls._raw(
            tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)), n, field
        )

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = EXACT) -> DenseMatrix:
        return cls._raw(tuple((field.zero,) * cols for _ in range(rows)), cols, field)

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[Scalar, ...]:
        return self._data[i]

    def column(self, j: int) -> list[Scalar]:
        return [r[j] for r in self._data]

    def columns(self) -> list[list[Scalar]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[Scalar]]:
        return [list(r) for r in self._data]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def transpose(self) -> DenseMatrix:
        return DenseMatrix._raw(tuple(zip(*self._data)) if self.rows else (), self.rows, self.field)

    def __matmul__(self, other: DenseMatrix) -> DenseMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        zero = self.field.zero
        ocols = other.columns()
        out = []
        for r in self._data:
            out.append(tuple(_dot(r, c, zero) for c in ocols))
        return DenseMatrix._raw(tuple(out), other.cols, self.field)

    def __sub__(self, other: DenseMatrix) -> DenseMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return DenseMatrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols, self.field
        )

    def __add__(self, other: DenseMatrix) -> DenseMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return DenseMatrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols, self.field
        )

    def scale(self, c: Any) -> DenseMatrix:
        c = self.field.coerce(c)
        return DenseMatrix._raw(tuple(tuple(c * a for a in r) for r in self._data), self.cols, self.field)

    def apply(self, v: Sequence[Scalar]) -> list[Scalar]:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        zero = self.field.zero
        return [_dot(r, v, zero) for r in self._data]

    def hstack(self, other: DenseMatrix) -> DenseMatrix:
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return DenseMatrix._raw(
            tuple(a + b for a, b in zip(self._data, other._data)), self.cols + other.cols, self.field
        )

    def select_columns(self, idx: Sequence[int]) -> DenseMatrix:
        return DenseMatrix._raw(tuple(tuple(r[j] for j in idx) for r in self._data), len(idx), self.field)

    def max_abs(self) -> float:
        return max((abs(complex(x)) for r in self._data for x in r), default=0.0)

    def is_zero(self) -> bool:
        return all(self.field.is_negligible(x, 1.0) for r in self._data for x in r)

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=complex)
        for i, r in enumerate(self._data):
            for j, x in enumerate(r):
                out[i, j] = complex(x)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"DenseMatrix({self.rows}x{self.cols}, {self.field!r})"


def _dot(a: Sequence[Scalar], b: Sequence[Scalar], zero: Scalar) -> Scalar:
    acc = zero
    for x, y in zip(a, b):
        if x and y:
            acc = acc + x * y
    return acc


def _vec_max_abs(v: Sequence[Scalar]) -> float:
    return max((abs(complex(x)) for x in v), default=0.0)


@dataclass
class _Pivot:
    row: int
    reduced: list[Scalar]  # column after elimination against earlier pivots
    combo: list[Scalar]  # reduced == sum(combo[i] * accepted[i])


@dataclass
class AppendResult:
    independent: bool
    kernel_vector: list[Scalar] | None = None  # over accepted columns + the new one

    def __bool__(self) -> bool:
        return self.independent


@dataclass
class IncrementalReducer:
    """Column-by-column echelon reduction with rank tracking.

    ``append_column`` either accepts a column (rank grows) or reports the
    kernel vector that expresses it through the accepted columns.  Accepted
    columns are numbered in acceptance order; ``pivot_columns`` holds their
    positions among all appended columns.
    """

    row_count: int
    field: Field = EXACT
    pivot_columns: list[int] = dc_field(default_factory=list)
    appended: int = 0
    _pivots: list[_Pivot] = dc_field(default_factory=list, repr=False)
    _scale: float = dc_field(default=0.0, repr=False)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def _reduce(self, col: Sequence[Scalar]) -> tuple[list[Scalar], list[Scalar]]:
        f = self.field
        w = list(col)
        combo = [f.zero] * len(self._pivots)
        for k, p in enumerate(self._pivots):
            x = w[p.row]
            if not x:
                continue
            factor = x / p.reduced[p.row]
            for i, y in enumerate(p.reduced):
                if y:
                    w[i] = w[i] - factor * y
            for i, y in enumerate(p.combo):
                if y:
                    combo[i] = combo[i] - factor * y
            w[p.row] = f.zero
        return w, combo

    def append_column(self, col: Sequence[Any]) -> AppendResult:
        if len(col) != self.row_count:
            raise ValueError(f"column length {len(col)} != row count {self.row_count}")
        f = self.field
        col = [f.coerce(x) for x in col]
        exact = f.exact
        if not exact:
            self._scale = max(self._scale, _vec_max_abs(col))
        w, combo = self._reduce(col)
        self.appended += 1

        if exact:
            pivot_row = next((i for i, x in enumerate(w) if x), None)
        else:
            pivot_row, best = None, 0.0
            for i, x in enumerate(w):
                a = abs(x)
                if a > best:
                    pivot_row, best = i, a
            if pivot_row is not None and f.is_negligible(w[pivot_row], self._scale):
                pivot_row = None

        if pivot_row is None:
            return AppendResult(False, combo + [f.one])
        self._pivots.append(_Pivot(pivot_row, w, combo + [f.one]))
        self.pivot_columns.append(self.appended - 1)
        return AppendResult(True)


def append_column(state: IncrementalReducer, col: Sequence[Any]) -> AppendResult:
    return state.append_column(col)


def _reducer_for(M: DenseMatrix, scale: float | None = None) -> IncrementalReducer:
    red = IncrementalReducer(M.rows, M.field)
    if not M.field.exact:
        red._scale = M.max_abs() if scale is None else scale
    return red


def rank(M: DenseMatrix, scale: float | None = None) -> int:
    red = _reducer_for(M, scale)
    for c in M.columns():
        red.append_column(c)
    return red.rank


def kernel(M: DenseMatrix, scale: float | None = None) -> list[list[Scalar]]:
    """Basis of the right null space; one vector per non-pivot column.

    Each vector carries a one at its own non-pivot column and zeros at all
    other non-pivot columns.  ``scale`` overrides the magnitude that floating
    negligibility is measured against (default: largest entry of ``M``).
    """
    f = M.field
    red = _reducer_for(M, scale)
    basis = []
    for j, c in enumerate(M.columns()):
        res = red.append_column(c)
        if not res.independent:
            v = [f.zero] * M.cols
            for coeff, pc in zip(res.kernel_vector[:-1], red.pivot_columns):
                v[pc] = coeff
            v[j] = f.one
            basis.append(v)
    return basis


def rref(M: DenseMatrix, column_order: Sequence[int] | None = None) -> tuple[DenseMatrix, list[int]]:
    """Reduced row echelon form; pivots are searched in ``column_order``.

    Returns the reduced matrix (rows beyond the rank are dropped) and the
    pivot column indices in the order they were found.
    """
    f = M.field
    order = list(column_order) if column_order is not None else list(range(M.cols))
    rows = [list(r) for r in M.tolist()]
    scale = M.max_abs()
    pivots: list[int] = []
    r = 0
    for c in order:
        if r == len(rows):
            break
        if f.exact:
            piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        else:
            piv = max(range(r, len(rows)), key=lambda i: abs(rows[i][c]))
            if f.is_negligible(rows[piv][c], scale):
                piv = None
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = f.one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
            if not f.exact and i != r:
                rows[i][c] = f.zero
        pivots.append(c)
        r += 1
    return DenseMatrix(rows[:r], f, cols=M.cols), pivots


def left_inverse(M: DenseMatrix) -> DenseMatrix:
    """Some ``L`` with ``L @ M == I`` for a full column rank ``M``.

    Obtained by row reducing ``[M | I]``; this is generally not the
    Moore-Penrose inverse.
    """
    f = M.field
    m, n = M.shape
    aug = M.hstack(DenseMatrix.identity(m, f))
    R, pivots = rref(aug, column_order=range(n))
    if len(pivots) < n or any(p >= n for p in pivots):
        raise RankDeficiencyError(f"matrix of shape {M.shape} does not have full column rank")
    return DenseMatrix([R.row(i)[n:] for i in range(n)], f)


def solve(M: DenseMatrix, b: Sequence[Any]) -> list[Scalar]:
    """Solve a square nonsingular system ``M x = b``."""
    if M.rows != M.cols:
        raise ValueError("solve needs a square matrix")
    f = M.field
    aug = M.hstack(DenseMatrix([[x] for x in b], f))
    R, pivots = rref(aug, column_order=range(M.cols))
    if len(pivots) < M.cols:
        raise RankDeficiencyError("singular system")
    return [R[i, M.cols] for i in range(M.cols)]


def float_field_like(M: DenseMatrix, tolerance: float = 1e-10) -> DenseMatrix:
    """Copy of ``M`` converted to complex doubles."""
    return DenseMatrix(([complex(x) for x in r] for r in M.tolist()), FloatField(tolerance), cols=M.cols)
