"""Hankel slices of grid samples and the two ideal decomposition algorithms.

Both algorithms sample ``f`` on ``U + Gamma_{N+1}`` with ``U`` the hyperbolic
cross of order ``N``, and return the monomial quotient support ``A`` with
monic ideal generators ``q_a`` (``a`` in ``I``) whose graded-lex leading
exponent is ``a``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from typing import Any, Sequence

from .linalg import DenseMatrix, IncrementalReducer, kernel, left_inverse, rref
from .multiindex import (
    IndexSet,
    MultiIndex,
    add,
    divides,
    grlex_key,
    homogeneous_slice,
    hyperbolic_cross,
    total_degree_simplex,
    unit,
)
from .oracle import SampleOracle
from .polynomial import SparsePolynomial
from .scalars import EXACT, Field, GaussianRational, deserialize_scalar, make_field

log = logging.getLogger(__name__)

SMILE = "smile"
DEGREEWISE = "degreewise"


class DecompositionError(RuntimeError):
    pass


@dataclass
class Decomposition:
    """Quotient support ``A``, leading exponents ``I`` and the ideal basis."""

    dimension: int
    A: IndexSet
    I: IndexSet
    basis: dict[MultiIndex, SparsePolynomial]
    evaluations: int
    algorithm: str
    N: int
    field: Field = EXACT
    rank_history: list[int] = dc_field(default_factory=list)
    sampled: IndexSet | None = None
    max_bit_length: int | None = None

    @property
    def detected_terms(self) -> int:
        return len(self.A)

    @property
    def saturated(self) -> bool:
        # With N >= #Omega the rank settles at #Omega <= N.
        return len(self.A) <= self.N

    def generators(self) -> list[SparsePolynomial]:
        return [self.basis[a] for a in self.I]

    def evaluation_bound(self) -> int:
        return self.dimension * self.N * len(hyperbolic_cross(self.dimension, self.N))

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "A": self.A.to_list(),
            "I": self.I.to_list(),
            "basis": [{"leading": list(a), "coeffs": self.basis[a].to_json()} for a in self.I],
            "evaluations": self.evaluations,
            "algorithm": self.algorithm,
            "N": self.N,
            "dimension": self.dimension,
            "mode": self.field.name,
            "rank_history": list(self.rank_history),
            "detected_terms": self.detected_terms,
        }
        if self.max_bit_length is not None:
            out["max_bit_length"] = self.max_bit_length
        return out

    @classmethod
    def from_json(cls, data: dict[str, Any], tolerance: float = 1e-10) -> Decomposition:
        s = int(data["dimension"]) if "dimension" in data else len(data["A"][0])
        field = make_field(data.get("mode", "exact"), tolerance)
        basis = {
            tuple(b["leading"]): SparsePolynomial(s, [(a, deserialize_scalar(c, field)) for a, c in b["coeffs"]], field)
            for b in data["basis"]
        }
        return cls(
            dimension=s,
            A=IndexSet(s, data["A"]),
            I=IndexSet(s, data["I"]),
            basis=basis,
            evaluations=int(data.get("evaluations", 0)),
            algorithm=data.get("algorithm", SMILE),
            N=int(data.get("N", len(data["A"]))),
            field=field,
            rank_history=list(data.get("rank_history", [])),
        )


class _Sampler:
    """Records which grid points one algorithm run touches."""

    def __init__(self, oracle: SampleOracle):
        self.oracle = oracle
        self.touched: set[MultiIndex] = set()
        self.max_bits = 0

    def column(self, rows: Sequence[MultiIndex], beta: MultiIndex) -> list[Any]:
        col = []
        for a in rows:
            g = add(a, beta)
            self.touched.add(g)
            v = self.oracle(g)
            if isinstance(v, GaussianRational):
                self.max_bits = max(self.max_bits, v.bit_length())
            col.append(v)
        return col

    def sampled(self) -> IndexSet:
        return IndexSet(self.oracle.dimension, self.touched)


def assemble_hankel(oracle: SampleOracle, A: IndexSet, B: IndexSet) -> DenseMatrix:
    """Matrix ``[f(a + b)]`` with rows indexed by ``A`` and columns by ``B``."""
    if len(A) == 0 or len(B) == 0:
        raise ValueError("row and column index sets must be nonempty")
    if A.dimension != oracle.dimension or B.dimension != oracle.dimension:
        raise ValueError("index sets and oracle differ in dimension")
    return DenseMatrix([[oracle(add(a, b)) for b in B] for a in A], oracle.field)


def _check_inputs(oracle: SampleOracle, N: int) -> None:
    if N < 1:
        raise ValueError("term bound N must be at least 1")
    if oracle.dimension < 1:
        raise ValueError("oracle dimension must be positive")


def smile(oracle: SampleOracle, N: int) -> Decomposition:
    """Term-by-term decomposition with least elements in graded-lex order.

    Candidates ``b`` run through ``Gamma_{N+1}`` in ascending order.  The
    column ``[f(a + b) : a in U_N]`` either raises the rank (``b`` joins
    ``A``) or is dependent, in which case the kernel vector normalized to one
    at ``b`` gives ``q_b`` and every multiple of ``b`` leaves the queue.
    """
    _check_inputs(oracle, N)
    s = oracle.dimension
    field = oracle.field
    rows = hyperbolic_cross(s, N).members
    sampler = _Sampler(oracle)
    red = IncrementalReducer(len(rows), field)

    A: list[MultiIndex] = []
    I: list[MultiIndex] = []
    basis: dict[MultiIndex, SparsePolynomial] = {}
    ranks: list[int] = []
    for beta in total_degree_simplex(s, N + 1):
        if any(divides(g, beta) for g in I):
            continue
        res = red.append_column(sampler.column(rows, beta))
        if res.independent:
            A.append(beta)
        else:
            q = SparsePolynomial(s, zip(A + [beta], res.kernel_vector), field)
            basis[beta] = q
            I.append(beta)
        ranks.append(red.rank)

    dec = Decomposition(
        dimension=s,
        A=IndexSet(s, A),
        I=IndexSet(s, I),
        basis=basis,
        evaluations=len(sampler.touched),
        algorithm=SMILE,
        N=N,
        field=field,
        rank_history=ranks,
        sampled=sampler.sampled(),
        max_bit_length=sampler.max_bits if field.exact else None,
    )
    if not dec.saturated:
        log.warning("rank %d exceeds term bound N=%d; N is too small", len(A), N)
    return dec


def symbolic_decomposition(oracle: SampleOracle, N: int) -> Decomposition:
    """Degree-by-degree decomposition via Schur complements.

    At degree ``k + 1`` the candidates are the degree ``k + 1`` multiindices
    that are not a unit shift of a degree ``k`` exponent outside ``A``.  The
    kernel of ``(I - F L) G``, with ``L`` a left inverse of the current
    ``F = F_{U_N, A}``, is brought to reduced echelon form with pivots taken
    from the graded-lex largest candidate down; pivots go to ``I``, the rest
    to ``A``.  Stops once a degree adds nothing to ``A``.
    """
    _check_inputs(oracle, N)
    s = oracle.dimension
    field = oracle.field
    rows = hyperbolic_cross(s, N).members
    sampler = _Sampler(oracle)

    zero = (0,) * s
    A: list[MultiIndex] = [zero]
    I: list[MultiIndex] = []
    basis: dict[MultiIndex, SparsePolynomial] = {}
    F_cols = [sampler.column(rows, zero)]
    rank_red = IncrementalReducer(len(rows), field)
    if not rank_red.append_column(F_cols[0]).independent:
        raise DecompositionError("f vanishes on the hyperbolic cross; nothing to decompose")
    ranks = [rank_red.rank]
    scale_seen = max(abs(complex(x)) for x in F_cols[0])

    k = 0
    while True:
        a_set = set(A)
        excluded = {add(g, unit(s, j)) for g in homogeneous_slice(s, k) if g not in a_set for j in range(s)}
        cand = [g for g in homogeneous_slice(s, k + 1) if g not in excluded]
        if not cand:
            break

        F = DenseMatrix.from_columns(F_cols, field)
        L = left_inverse(F)
        G = DenseMatrix.from_columns([sampler.column(rows, g) for g in cand], field)
        LG = L @ G
        schur = G - F @ LG
        scale_seen = max(scale_seen, G.max_abs())
        ker = kernel(schur, scale=None if field.exact else scale_seen)

        pivots: list[int] = []
        Y: DenseMatrix | None = None
        if ker:
            order = sorted(range(len(cand)), key=lambda j: grlex_key(cand[j]), reverse=True)
            Y, pivots = rref(DenseMatrix(ker, field), column_order=order)

        piv_set = set(pivots)
        new_A = [cand[j] for j in range(len(cand)) if j not in piv_set]
        for r, p in enumerate(pivots):
            y_new = list(Y.row(r))
            y_old = [-v for v in LG.apply(y_new)]
            terms = list(zip(A, y_old)) + [(cand[j], y_new[j]) for j in range(len(cand)) if j not in piv_set]
            terms.append((cand[p], field.one))
            basis[cand[p]] = SparsePolynomial(s, terms, field)
            I.append(cand[p])

        for j in range(len(cand)):
            if j not in piv_set:
                col = G.column(j)
                F_cols.append(col)
                rank_red.append_column(col)
        A.extend(new_A)
        ranks.append(rank_red.rank)
        if rank_red.rank != len(A):
            log.warning("rank %d of F_%d differs from #A = %d", rank_red.rank, k + 1, len(A))
        if not new_A:
            break
        k += 1
        if k > N + 1:
            raise DecompositionError(f"no termination by degree {k}; is N >= number of terms?")

    dec = Decomposition(
        dimension=s,
        A=IndexSet(s, A),
        I=IndexSet(s, I),
        basis=basis,
        evaluations=len(sampler.touched),
        algorithm=DEGREEWISE,
        N=N,
        field=field,
        rank_history=ranks,
        sampled=sampler.sampled(),
        max_bit_length=sampler.max_bits if field.exact else None,
    )
    if not dec.saturated:
        log.warning("rank %d exceeds term bound N=%d; N is too small", len(A), N)
    return dec


def decompose(oracle: SampleOracle, N: int, algorithm: str = SMILE) -> Decomposition:
    if algorithm == SMILE:
        return smile(oracle, N)
    if algorithm == DEGREEWISE:
        return symbolic_decomposition(oracle, N)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def hilbert_function(oracle: SampleOracle, N: int, n: int) -> list[int]:
    """``rank F_{U_N, Gamma_k}`` for ``k = 0..n``."""
    _check_inputs(oracle, N)
    s = oracle.dimension
    rows = hyperbolic_cross(s, N).members
    sampler = _Sampler(oracle)
    red = IncrementalReducer(len(rows), oracle.field)
    out = []
    for k in range(n + 1):
        for beta in homogeneous_slice(s, k):
            red.append_column(sampler.column(rows, beta))
        out.append(red.rank)
    return out
