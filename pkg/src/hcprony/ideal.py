"""Normal forms modulo a computed ideal basis, multiplication tables, checks."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field
from typing import Any

from .linalg import DenseMatrix
from .multiindex import MultiIndex, add, border, divides, grlex_key, sub, total_degree_simplex, unit
from .oracle import ExponentialSumSpec
from .polynomial import SparsePolynomial, evaluate
from .prony import Decomposition


class ReductionError(ValueError):
    """A term is neither in ``A`` nor divisible by a leading exponent."""


class IncompleteDecompositionError(ValueError):
    pass


def reduce(p: SparsePolynomial, d: Decomposition) -> SparsePolynomial:
    """Normal form of ``p`` with support in ``d.A``.

    Division always cancels the graded-lex largest term outside ``A``.  The
    result agrees with ``p`` on the points of the decomposed signal.
    """
    if p.dimension != d.dimension:
        raise ValueError("polynomial and decomposition differ in dimension")
    field = d.field
    A = d.A.as_frozenset()
    leads = list(d.I)
    terms: dict[MultiIndex, Any] = {a: field.coerce(c) for a, c in p.terms.items()}
    # max-heap of exponents by graded-lex key
    heap = [(_neg_key(a), a) for a in terms]
    heapq.heapify(heap)
    out: dict[MultiIndex, Any] = {}
    while heap:
        _, g = heapq.heappop(heap)
        c = terms.pop(g, None)
        if c is None or not c:
            continue
        if g in A:
            out[g] = c
            continue
        lead = next((a for a in leads if divides(a, g)), None)
        if lead is None:
            raise ReductionError(f"term x^{g} is outside A and not divisible by any leading exponent")
        q = d.basis[lead]
        factor = c / q.coefficient(lead)
        shift = sub(g, lead)
        for a, qc in q.terms.items():
            if a == lead:
                continue
            key = add(a, shift)
            if key in terms:
                terms[key] = terms[key] - factor * qc
            else:
                terms[key] = -factor * qc
                heapq.heappush(heap, (_neg_key(key), key))
    return SparsePolynomial(d.dimension, out, field)


def _neg_key(a: MultiIndex) -> tuple[int, tuple[int, ...]]:
    k = grlex_key(a)
    return (-k[0], tuple(-x for x in k[1]))


def multiplication_matrix(j: int, d: Decomposition) -> DenseMatrix:
    """Matrix of ``p -> x_j * p`` on polynomials supported in ``A``.

    ``j`` is 1-based.  Column ``a`` holds the coefficients of the normal form
    of ``x_j * x^a`` in the graded-lex order of ``A``.
    """
    if not 1 <= j <= d.dimension:
        raise ValueError(f"coordinate index {j} outside 1..{d.dimension}")
    if not d.saturated or len(d.I) == 0:
        raise IncompleteDecompositionError("decomposition is not rank saturated")
    e = unit(d.dimension, j - 1)
    A = d.A.members
    cols = []
    for a in A:
        try:
            r = reduce(SparsePolynomial.monomial(add(a, e), 1, d.field), d)
        except ReductionError as exc:
            raise IncompleteDecompositionError(str(exc)) from None
        cols.append([r.coefficient(b) for b in A])
    return DenseMatrix.from_columns(cols, d.field)


def multiplication_matrices(d: Decomposition) -> list[DenseMatrix]:
    return [multiplication_matrix(j, d) for j in range(1, d.dimension + 1)]


def border_polynomials(d: Decomposition) -> dict[MultiIndex, SparsePolynomial]:
    """``x^a - reduce(x^a)`` for every ``a`` on the border of ``A``."""
    out = {}
    for a in border(d.A):
        mono = SparsePolynomial.monomial(a, 1, d.field)
        out[a] = mono - reduce(mono, d)
    return out


@dataclass
class HBasisReport:
    vanishing: bool
    cardinality: bool
    staircase: bool
    max_residual: float
    residuals: dict[MultiIndex, float] = dc_field(default_factory=dict)
    expected_terms: int = 0
    found_terms: int = 0

    @property
    def ok(self) -> bool:
        return self.vanishing and self.cardinality and self.staircase

    def lines(self) -> list[str]:
        def tag(b: bool) -> str:
            return "PASS" if b else "FAIL"

        return [
            f"{tag(self.vanishing)} vanishing: max residual {self.max_residual:.3e}",
            f"{tag(self.cardinality)} cardinality: #A = {self.found_terms}, #Omega = {self.expected_terms}",
            f"{tag(self.staircase)} staircase: A and the upper set of I partition the grid",
        ]


def _upper_set_member(g: MultiIndex, leads: list[MultiIndex]) -> bool:
    return any(divides(a, g) for a in leads)


def verify_hbasis(d: Decomposition, spec: ExponentialSumSpec, tol: float = 0.0) -> HBasisReport:
    """Check the basis against a known signal.

    Vanishing is exact for exact decompositions; otherwise residuals are
    measured relative to the coefficient size of each generator.
    """
    if d.field.exact:
        points: list[Any] = list(spec.exact_points())
    else:
        points = spec.complex_points()
    residuals: dict[MultiIndex, float] = {}
    vanishing = True
    for a in d.I:
        q = d.basis[a]
        worst = 0.0
        for x in points:
            v = evaluate(q, x)
            if d.field.exact:
                if v:
                    vanishing = False
                    worst = max(worst, abs(complex(v)))
            else:
                xs = max(1.0, max(abs(complex(c)) for c in x))
                r = abs(complex(v)) / (q.max_coefficient() * xs ** max(q.degree, 0))
                worst = max(worst, r)
        residuals[a] = worst
        if not d.field.exact and worst > tol:
            vanishing = False

    leads = list(d.I)
    staircase = not any(_upper_set_member(a, leads) for a in d.A)
    top = max((sum(a) for a in list(d.I) + list(d.A)), default=0)
    for g in total_degree_simplex(d.dimension, top):
        if g not in d.A and not _upper_set_member(g, leads):
            staircase = False
            break

    return HBasisReport(
        vanishing=vanishing,
        cardinality=len(d.A) == spec.size,
        staircase=staircase,
        max_residual=max(residuals.values(), default=0.0),
        residuals=residuals,
        expected_terms=spec.size,
        found_terms=len(d.A),
    )

