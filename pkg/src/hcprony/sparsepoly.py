"""Exact recovery of sparse polynomials with Gaussian-integer coefficients.

Sampling ``p`` at the points ``2^(Theta a)`` turns it into an exponential
sum with frequencies ``log(2) * Theta^T k``.  The ideal basis and
multiplication tables stay exact; only their joint eigenvalues are computed
in floating point, and those are rounded back to integer exponents before
the coefficients are re-solved exactly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np

from .ideal import multiplication_matrices
from .linalg import DenseMatrix, rank, solve
from .multiindex import MultiIndex, as_multiindex, grlex_key
from .oracle import SampleOracle, principal_log
from .prony import Decomposition, smile
from .recovery import _joint_eigen
from .scalars import EXACT, GaussianRational, is_gaussian_integer

log = logging.getLogger(__name__)

EXPONENT_ROUNDING_LIMIT = 0.25
COEFFICIENT_ROUNDING_LIMIT = 1e-6


class RoundingError(RuntimeError):
    pass


@dataclass(frozen=True)
class SparseIntPolynomial:
    dimension: int
    terms: Mapping[MultiIndex, GaussianRational]

    def __post_init__(self) -> None:
        clean: dict[MultiIndex, GaussianRational] = {}
        for k, c in dict(self.terms).items():
            k = as_multiindex(k)
            c = GaussianRational.coerce(c)
            if len(k) != self.dimension:
                raise ValueError(f"exponent {k} does not have dimension {self.dimension}")
            if not is_gaussian_integer(c):
                raise ValueError(f"coefficient {c} is not a Gaussian integer")
            if c:
                clean[k] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda t: grlex_key(t[0]))))

    @classmethod
    def from_pairs(cls, dimension: int, pairs: Sequence[tuple[Sequence[int], Any]]) -> SparseIntPolynomial:
        """``pairs`` of exponent and coefficient; a coefficient may be an int,
        a complex with integer parts or a ``[re, im]`` pair."""
        terms = {}
        for k, c in pairs:
            if isinstance(c, (list, tuple)):
                c = GaussianRational(int(c[0]), int(c[1]))
            elif isinstance(c, complex):
                c = GaussianRational(int(c.real), int(c.imag))
            terms[tuple(k)] = c
        return cls(dimension, terms)

    def __len__(self) -> int:
        return len(self.terms)

    def evaluate(self, x: Sequence[Any]) -> GaussianRational:
        total = GaussianRational(0)
        for k, c in self.terms.items():
            term = c
            for xj, e in zip(x, k):
                if e:
                    term = term * GaussianRational.coerce(xj) ** e
            total = total + term
        return total

    def to_json(self) -> list[dict[str, Any]]:
        return [{"exp": list(k), "coeff": [int(c.re), int(c.im)]} for k, c in self.terms.items()]

    @classmethod
    def from_json(cls, dimension: int, data: Sequence[Mapping[str, Any]]) -> SparseIntPolynomial:
        return cls.from_pairs(dimension, [(t["exp"], t["coeff"]) for t in data])


def check_theta(theta: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Validate a square nonsingular integer matrix."""
    rows = tuple(tuple(int(x) for x in r) for r in theta)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("theta must be a nonempty square matrix")
    for r, orig in zip(rows, theta):
        if any(int(x) != x for x in orig):
            raise ValueError("theta must have integer entries")
    if rank(DenseMatrix(rows, EXACT)) < n:
        raise ValueError("theta must be nonsingular")
    return rows


def identity_theta(s: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(s)) for i in range(s))


def shear_theta(s: int) -> tuple[tuple[int, ...], ...]:
    """Unimodular upper bidiagonal matrix with ones on both diagonals."""
    return tuple(tuple(int(j == i or j == i + 1) for j in range(s)) for i in range(s))


def _pow2(e: int) -> Fraction:
    return Fraction(1 << e) if e >= 0 else Fraction(1, 1 << -e)


def _theta_apply(theta: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(t * x for t, x in zip(row, v)) for row in theta)


def geometric_oracle(p: SparseIntPolynomial, theta: Sequence[Sequence[int]]) -> SampleOracle:
    """Exact oracle ``a -> p(2^(Theta a))``."""
    theta = check_theta(theta)
    if len(theta) != p.dimension:
        raise ValueError("theta and polynomial differ in dimension")
    # (Theta a) . k = a . (Theta^T k): precompute Theta^T k per term
    shifted = [(tuple(sum(theta[i][j] * k[i] for i in range(len(k))) for j in range(len(k))), c) for k, c in p.terms.items()]

    def f(alpha: MultiIndex) -> GaussianRational:
        total = GaussianRational(0)
        for w, c in shifted:
            total = total + c * _pow2(sum(a * x for a, x in zip(alpha, w)))
        return total

    return SampleOracle(p.dimension, f, EXACT, name="geometric")


@dataclass
class SparseRecovery:
    polynomial: SparseIntPolynomial
    exponent_rounding_distance: float
    coefficient_rounding_distance: float
    decomposition: Decomposition
    max_bit_length: int

    @property
    def evaluations(self) -> int:
        return self.decomposition.evaluations

    def to_json(self) -> dict[str, Any]:
        return {
            "type": "sparsepoly",
            "dimension": self.polynomial.dimension,
            "terms": self.polynomial.to_json(),
            "exponent_rounding_distance": self.exponent_rounding_distance,
            "coefficient_rounding_distance": self.coefficient_rounding_distance,
            "evaluations": self.evaluations,
            "max_bit_length": self.max_bit_length,
            "A": self.decomposition.A.to_list(),
        }


def recover_sparse_polynomial(
    oracle: SampleOracle, N: int, theta: Sequence[Sequence[int]], seed: int = 0
) -> SparseRecovery:
    """Recover ``p`` from an exact geometric oracle with at most ``N`` terms."""
    theta = check_theta(theta)
    s = oracle.dimension
    if len(theta) != s:
        raise ValueError("theta and oracle differ in dimension")
    if not oracle.field.exact:
        raise ValueError("sparse polynomial recovery needs an exact oracle")

    d = smile(oracle, N)
    if not d.saturated:
        raise RoundingError(f"rank {len(d.A)} exceeds the term bound {N}")
    mats = [M.to_numpy() for M in multiplication_matrices(d)]
    points, _ = _joint_eigen(mats, seed)

    # sampling at 2^(Theta a) gives frequencies log(2) * Theta^T k
    theta_inv = np.linalg.inv(np.array(theta, dtype=float).T)
    exps: list[MultiIndex] = []
    worst = 0.0
    for x in points:
        w = np.array([principal_log(complex(c)) for c in x]) / math.log(2)
        v = theta_inv @ w
        k = np.rint(v.real).astype(int)
        worst = max(worst, float(np.abs(v - k).max()))
        exps.append(tuple(int(e) for e in k))
    if worst > EXPONENT_ROUNDING_LIMIT:
        raise RoundingError(f"exponent rounding distance {worst:.3f} exceeds {EXPONENT_ROUNDING_LIMIT}")
    if any(e < 0 for k in exps for e in k):
        raise RoundingError(f"negative exponents recovered: {exps}")
    if len(set(exps)) != len(exps):
        raise RoundingError(f"exponents collide after rounding: {exps}")

    # exact square system over A: sum_k c_k 2^((Theta^T k) . a) = f(a)
    theta_t = tuple(zip(*theta))
    images = [_theta_apply(theta_t, k) for k in exps]
    V = DenseMatrix([[_pow2(sum(a * t for a, t in zip(alpha, img))) for img in images] for alpha in d.A], EXACT)
    coeffs = solve(V, [oracle(alpha) for alpha in d.A])

    terms = {}
    cworst = 0.0
    for k, c in zip(exps, coeffs):
        r, i = round(c.re), round(c.im)
        dist = float(abs(GaussianRational(c.re - r, c.im - i)))
        cworst = max(cworst, dist)
        if r or i:
            terms[k] = GaussianRational(r, i)
    if cworst > COEFFICIENT_ROUNDING_LIMIT:
        raise RoundingError(f"coefficient rounding distance {cworst:.3e} exceeds {COEFFICIENT_ROUNDING_LIMIT}")
    return SparseRecovery(
        SparseIntPolynomial(s, terms), worst, cworst, d, d.max_bit_length or 0
    )


def random_sparse_polynomial(
    rng: np.random.Generator, s: int, terms: int, max_exp: int = 10, max_coeff: int = 10
) -> SparseIntPolynomial:
    """Distinct random exponents in ``[0, max_exp]^s`` and nonzero Gaussian
    integer coefficients of magnitude at most ``max_coeff``."""
    if terms > (max_exp + 1) ** s:
        raise ValueError("more terms than available exponents")
    exps: set[MultiIndex] = set()
    while len(exps) < terms:
        exps.add(tuple(int(x) for x in rng.integers(0, max_exp + 1, size=s)))
    out = {}
    for k in sorted(exps):
        while True:
            re_, im_ = (int(x) for x in rng.integers(-max_coeff, max_coeff + 1, size=2))
            if (re_ or im_) and re_ * re_ + im_ * im_ <= max_coeff * max_coeff:
                break
        out[k] = GaussianRational(re_, im_)
    return SparseIntPolynomial(s, out)
