import numpy as np
import pytest
import sympy

from hcprony.instances import random_rational_spec
from hcprony.linalg import rank
from hcprony.multiindex import IndexSet, divides, hyperbolic_cross, total_degree_simplex
from hcprony.oracle import ExponentialSumSpec, SampleOracle, make_oracle_from_spec
from hcprony.polynomial import SparsePolynomial as P
from hcprony.prony import (
    SMILE,
    Decomposition,
    DecompositionError,
    assemble_hankel,
    decompose,
    hilbert_function,
    smile,
    symbolic_decomposition,
)
from hcprony.scalars import FloatField

ALGOS = [smile, symbolic_decomposition]


def exact_oracle(spec):
    return make_oracle_from_spec(spec, "exact")


def vandermonde_rank(points, exps):
    return sympy.Matrix([[sympy.prod([sympy.Rational(x.re.numerator, x.re.denominator) ** e for x, e in zip(p, a)]) for p in points] for a in exps]).rank()


class TestHankel:
    def test_constant(self):
        o = SampleOracle(2, lambda a: 1)
        A = IndexSet(2, [(0, 0)])
        assert assemble_hankel(o, A, A).tolist() == [[1]]

    def test_two_term(self, two_term_oracle):
        A = IndexSet(2, [(0, 0), (1, 0)])
        assert assemble_hankel(two_term_oracle, A, A).tolist() == [[2, 3], [3, 5]]

    @pytest.mark.parametrize("seed", range(5))
    def test_rank_on_cross(self, seed):
        rng = np.random.default_rng(seed)
        n = 2 + seed % 4
        spec = random_rational_spec(rng, 2, n)
        U = hyperbolic_cross(2, n)
        assert rank(assemble_hankel(exact_oracle(spec), U, U)) == n

    def test_empty_rejected(self, two_term_oracle):
        with pytest.raises(ValueError):
            assemble_hankel(two_term_oracle, IndexSet(2, []), IndexSet(2, [(0, 0)]))


@pytest.mark.parametrize("algo", ALGOS)
class TestExamples:
    def test_single_point(self, algo):
        d = algo(SampleOracle(2, lambda a: 1), 1)
        assert list(d.A) == [(0, 0)]
        assert set(d.I) == {(1, 0), (0, 1)}
        assert d.basis[(1, 0)] == P(2, {(1, 0): 1, (0, 0): -1})
        assert d.basis[(0, 1)] == P(2, {(0, 1): 1, (0, 0): -1})

    def test_two_term(self, algo, two_term_oracle):
        d = algo(two_term_oracle, 2)
        assert set(d.A) == {(0, 0), (1, 0)}
        assert set(d.I) == {(0, 1), (2, 0)}
        assert d.basis[(0, 1)] == P(2, {(0, 1): 1, (0, 0): -1})
        assert d.basis[(2, 0)] == P(2, {(2, 0): 1, (1, 0): -3, (0, 0): 2})

    def test_overestimated_N(self, algo, two_term_spec):
        d = algo(exact_oracle(two_term_spec), 4)
        assert len(d.A) == 2 and d.saturated

    def test_hyperbola(self, algo, hyperbola):
        d = algo(exact_oracle(hyperbola), 7)
        assert d.A.as_frozenset() == {(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (0, 2), (0, 3)}
        assert d.basis[(1, 1)] == P(2, {(1, 1): 1, (0, 0): -1})


class TestSmileProperties:
    @pytest.mark.parametrize("seed", range(12))
    def test_basis_is_kernel_of_full_hankel(self, seed):
        """Each generator's coefficient vector is in ker F_{U_N, Gamma_{N+1}} and vanishes on X."""
        rng = np.random.default_rng(100 + seed)
        s, n = 1 + seed % 3, 1 + seed % 5
        spec = random_rational_spec(rng, s, n)
        o = exact_oracle(spec)
        d = smile(o, n)
        U = hyperbolic_cross(s, n)
        B = total_degree_simplex(s, n + 1)
        F = assemble_hankel(o, U, B)
        for q in d.generators():
            v = [q.coefficient(b) for b in B]
            assert all(x == 0 for x in F.apply(v))
            for x in spec.exact_points():
                assert q(x) == 0

    @pytest.mark.parametrize("seed", range(8))
    def test_reduced_groebner_shape(self, seed):
        rng = np.random.default_rng(200 + seed)
        s, n = 2 + seed % 2, 2 + seed % 5
        d = smile(exact_oracle(random_rational_spec(rng, s, n)), n)
        leads = list(d.I)
        for a, q in d.basis.items():
            assert q.leading_exponent() == a and q.leading_coefficient() == 1
            # tails live in A: reduced basis
            assert all(g in d.A for g in q.support() if g != a)
        # I is the set of minimal elements outside A
        for a in leads:
            assert not any(divides(b, a) for b in leads if b != a)

    def test_sampled_grid(self):
        spec = random_rational_spec(np.random.default_rng(3), 2, 5)
        o = exact_oracle(spec)
        d = smile(o, 5)
        allowed = hyperbolic_cross(2, 5).minkowski_sum(total_degree_simplex(2, 6))
        assert d.sampled.issubset(allowed)
        assert d.evaluations == o.call_counter

    def test_underestimated_N_not_saturated(self):
        spec = random_rational_spec(np.random.default_rng(4), 2, 5)
        d = smile(exact_oracle(spec), 2)
        assert not d.saturated

    def test_invalid_N(self, two_term_oracle):
        with pytest.raises(ValueError):
            smile(two_term_oracle, 0)


class TestDegreewise:
    @pytest.mark.parametrize("seed", range(10))
    def test_agrees_with_smile(self, seed):
        rng = np.random.default_rng(300 + seed)
        s, n = 1 + seed % 3, 1 + seed % 6
        spec = random_rational_spec(rng, s, n)
        d1 = smile(exact_oracle(spec), n)
        d2 = symbolic_decomposition(exact_oracle(spec), n)
        assert d1.A == d2.A and d1.I == d2.I
        assert all(d1.basis[a] == d2.basis[a] for a in d1.I)

    def test_zero_signal(self):
        with pytest.raises(DecompositionError):
            symbolic_decomposition(SampleOracle(2, lambda a: 0), 2)

    def test_float_mode(self):
        spec = random_rational_spec(np.random.default_rng(5), 2, 4)
        d = symbolic_decomposition(make_oracle_from_spec(spec, FloatField()), 4)
        de = symbolic_decomposition(exact_oracle(spec), 4)
        assert d.A == de.A


class TestHilbert:
    def test_single_point(self):
        assert hilbert_function(SampleOracle(2, lambda a: 1), 1, 4) == [1] * 5

    def test_hyperbola(self, hyperbola):
        assert hilbert_function(exact_oracle(hyperbola), 7, 5) == [1, 3, 5, 7, 7, 7]

    def test_generic_six(self):
        spec = random_rational_spec(np.random.default_rng(11), 2, 6)
        pts = spec.exact_points()
        # genericity oracle: V(X, Gamma_2) has full rank 6
        assert vandermonde_rank(pts, total_degree_simplex(2, 2)) == 6
        assert hilbert_function(exact_oracle(spec), 6, 4) == [1, 3, 6, 6, 6]

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_vandermonde_rank(self, seed):
        spec = random_rational_spec(np.random.default_rng(400 + seed), 2, 4)
        hf = hilbert_function(exact_oracle(spec), 4, 3)
        ref = [vandermonde_rank(spec.exact_points(), total_degree_simplex(2, k)) for k in range(4)]
        assert hf == ref


class TestSerialization:
    @pytest.mark.parametrize("mode", ["exact", "float"])
    def test_roundtrip(self, mode, two_term_spec):
        d = decompose(make_oracle_from_spec(two_term_spec, mode), 2, SMILE)
        back = Decomposition.from_json(d.to_json())
        assert back.A == d.A and back.I == d.I
        for a in d.I:
            for g in d.basis[a].support():
                assert abs(complex(back.basis[a].coefficient(g)) - complex(d.basis[a].coefficient(g))) < 1e-15

    def test_unknown_algorithm(self, two_term_oracle):
        with pytest.raises(ValueError):
            decompose(two_term_oracle, 2, "buchberger")


class TestEvaluationCount:
    SUITE = [(1 + i % 3, 1 + (i // 3) % 6, 1000 + i) for i in range(50)]

    @pytest.mark.parametrize("s,n,seed", SUITE)
    def test_within_s_plus_one_bound(self, s, n, seed):
        # columns are indexed by A and I, and I lies in the border of A, so #I <= s #A
        o = exact_oracle(random_rational_spec(np.random.default_rng(seed), s, n))
        d = smile(o, n)
        assert o.call_counter <= (s + 1) * n * len(hyperbolic_cross(s, n))
        assert d.evaluations == o.call_counter

    @pytest.mark.parametrize("s,n,seed", [c for c in SUITE if c[1] >= 2])
    def test_within_s_bound_for_two_or_more_terms(self, s, n, seed):
        o = exact_oracle(random_rational_spec(np.random.default_rng(seed), s, n))
        d = smile(o, n)
        assert o.call_counter <= d.evaluation_bound()

    @pytest.mark.parametrize("s", [1, 2, 3])
    def test_single_term_needs_s_plus_one(self, s):
        spec = ExponentialSumSpec.from_points([tuple(range(2, 2 + s))], [3])
        o = exact_oracle(spec)
        smile(o, 1)
        assert o.call_counter == s + 1
