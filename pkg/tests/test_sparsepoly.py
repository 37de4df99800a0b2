import numpy as np
import pytest

from hcprony.scalars import GaussianRational as G
from hcprony.sparsepoly import (
    RoundingError,
    SparseIntPolynomial,
    check_theta,
    geometric_oracle,
    identity_theta,
    random_sparse_polynomial,
    recover_sparse_polynomial,
    shear_theta,
)

SHEAR2 = ((1, 1), (0, 1))


def poly(s, pairs):
    return SparseIntPolynomial.from_pairs(s, pairs)


class TestGeometricOracle:
    def test_examples(self):
        assert geometric_oracle(poly(2, [((0, 0), 3)]), SHEAR2)((4, 5)) == 3
        assert geometric_oracle(poly(2, [((1, 1), 1)]), identity_theta(2))((2, 1)) == 8
        p = poly(2, [((2, 0), (1, 1)), ((0, 1), 2)])
        assert geometric_oracle(p, identity_theta(2))((1, 1)) == G(8, 4)

    def test_matches_direct_evaluation(self):
        """f(a) = p(2^(Theta a)) evaluated directly at the exact point."""
        rng = np.random.default_rng(0)
        for s in (1, 2, 3):
            p = random_sparse_polynomial(rng, s, 4, 6)
            theta = shear_theta(s)
            o = geometric_oracle(p, theta)
            for a in [(0,) * s, (1,) * s, tuple(range(s))]:
                x = [G(2) ** sum(theta[i][j] * a[j] for j in range(s)) for i in range(s)]
                assert o(a) == p.evaluate(x)

    def test_power_of_two_denominators_and_bits(self):
        p = poly(2, [((3, 1), 5), ((0, 0), (2, -1))])
        o = geometric_oracle(p, SHEAR2)
        bits = []
        for k in range(1, 8):
            v = o((k, k))
            for part in (v.re, v.im):
                d = part.denominator
                assert d & (d - 1) == 0
            bits.append(v.bit_length())
        # linear growth in |a|
        steps = np.diff(bits)
        assert steps.min() > 0 and steps.max() <= 2 * steps.min() + 2

    def test_theta_validation(self):
        with pytest.raises(ValueError):
            check_theta([[1, 1], [1, 1]])
        with pytest.raises(ValueError):
            check_theta([[1, 0.5], [0, 1]])
        with pytest.raises(ValueError):
            geometric_oracle(poly(2, [((1, 0), 1)]), identity_theta(3))


class TestRecover:
    def test_two_terms(self):
        p = poly(2, [((3, 1), 5), ((0, 0), (2, -1))])
        res = recover_sparse_polynomial(geometric_oracle(p, identity_theta(2)), 2, identity_theta(2))
        assert res.polynomial.terms == p.terms

    def test_single_monomial(self):
        p = poly(2, [((1, 0), 1)])
        res = recover_sparse_polynomial(geometric_oracle(p, identity_theta(2)), 1, identity_theta(2))
        assert res.polynomial.terms == {(1, 0): G(1)}

    @pytest.mark.parametrize("seed", range(10))
    def test_random_six_terms(self, seed):
        p = random_sparse_polynomial(np.random.default_rng(seed), 2, 6, 10)
        res = recover_sparse_polynomial(geometric_oracle(p, identity_theta(2)), 6, identity_theta(2))
        assert res.polynomial.terms == p.terms
        assert res.exponent_rounding_distance < 0.25

    @pytest.mark.parametrize("seed", range(8))
    def test_exactness_wider(self, seed):
        rng = np.random.default_rng(1000 + seed)
        s = 1 + seed % 3
        p = random_sparse_polynomial(rng, s, 1 + seed % 8, 12)
        res = recover_sparse_polynomial(geometric_oracle(p, identity_theta(s)), len(p), identity_theta(s))
        assert res.polynomial.terms == p.terms

    @pytest.mark.parametrize("seed", range(5))
    def test_theta_invariance(self, seed):
        p = random_sparse_polynomial(np.random.default_rng(50 + seed), 2, 5, 8)
        a = recover_sparse_polynomial(geometric_oracle(p, identity_theta(2)), 5, identity_theta(2))
        b = recover_sparse_polynomial(geometric_oracle(p, SHEAR2), 5, SHEAR2)
        assert a.polynomial.terms == b.polynomial.terms == p.terms

    def test_nonsymmetric_theta_three(self):
        theta = ((2, 1, 0), (0, 1, 0), (1, 0, 1))
        p = random_sparse_polynomial(np.random.default_rng(9), 3, 4, 5)
        res = recover_sparse_polynomial(geometric_oracle(p, theta), 4, theta)
        assert res.polynomial.terms == p.terms

    def test_N_too_small(self):
        p = random_sparse_polynomial(np.random.default_rng(3), 2, 5, 8)
        with pytest.raises(RoundingError):
            recover_sparse_polynomial(geometric_oracle(p, identity_theta(2)), 2, identity_theta(2))


class TestPolynomialType:
    def test_validation(self):
        with pytest.raises(ValueError):
            SparseIntPolynomial(2, {(1, 0): G(1, 0) / 2})
        with pytest.raises(ValueError):
            SparseIntPolynomial(2, {(1,): 1})

    def test_json_roundtrip(self):
        p = random_sparse_polynomial(np.random.default_rng(1), 3, 5)
        assert SparseIntPolynomial.from_json(3, p.to_json()) == p

    def test_random_shape(self):
        p = random_sparse_polynomial(np.random.default_rng(2), 2, 6, 10, 10)
        assert len(p) == 6
        assert all(max(k) <= 10 and abs(complex(c)) <= 10 for k, c in p.terms.items())
        with pytest.raises(ValueError):
            random_sparse_polynomial(np.random.default_rng(2), 1, 5, 2)
