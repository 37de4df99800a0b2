from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hcprony.scalars import (
    EXACT,
    FloatField,
    GaussianRational as G,
    deserialize_scalar,
    format_gaussian,
    make_field,
    parse_gaussian,
    rationalize,
    round_gaussian,
    serialize_scalar,
)

fractions = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 1000)
gauss = st.builds(G, fractions, fractions)


@given(gauss, gauss)
def test_field_axioms_against_complex(a, b):
    # complex() is the reference; exact results must round to it
    for got, ref in ((a + b, complex(a) + complex(b)), (a * b, complex(a) * complex(b)), (a - b, complex(a) - complex(b))):
        assert abs(complex(got) - ref) <= 1e-9 * max(1.0, abs(ref))
    if b:
        assert (a / b) * b == a


@given(gauss, st.integers(-4, 4))
def test_power(a, k):
    if not a and k < 0:
        with pytest.raises(ZeroDivisionError):
            a**k
        return
    ref = G(1)
    for _ in range(abs(k)):
        ref = ref * a
    assert a**k == (ref if k >= 0 else G(1) / ref)


@given(gauss)
def test_format_roundtrip(a):
    assert parse_gaussian(format_gaussian(a)) == a


def test_format_examples():
    assert format_gaussian(G(Fraction(1, 2))) == "1/2"
    assert parse_gaussian("3") == G(3)
    assert parse_gaussian("1/2-3/4*i") == G(Fraction(1, 2), Fraction(-3, 4))
    with pytest.raises(ValueError):
        parse_gaussian("x+1")


def test_equality_with_numbers():
    assert G(3) == 3
    assert G(Fraction(1, 2)) == Fraction(1, 2)
    assert G(1, 1) != 1
    assert not G(0)


def test_fields():
    assert EXACT.exact and EXACT.is_negligible(G(0)) and not EXACT.is_negligible(G(0, Fraction(1, 10**30)))
    f = FloatField(1e-8)
    assert f.is_negligible(1e-9) and not f.is_negligible(1e-7)
    assert f.is_negligible(1e-5, scale=1e4)
    assert make_field("exact") is EXACT
    assert isinstance(make_field("float", 1e-6), FloatField)
    with pytest.raises(ValueError):
        make_field("interval")
    with pytest.raises(ValueError):
        FloatField(0.0)


def test_serialization():
    assert serialize_scalar(G(1, -2)) == "1/1-2/1*i"
    assert serialize_scalar(1 + 2j) == [1.0, 2.0]
    assert deserialize_scalar("1/3") == G(Fraction(1, 3))
    assert deserialize_scalar([1.0, 2.0]) == 1 + 2j
    assert deserialize_scalar("1/4", FloatField()) == 0.25
    with pytest.raises(ValueError):
        deserialize_scalar({"re": 1})


def test_rationalize_and_round():
    assert rationalize(0.5 - 0.25j) == G(Fraction(1, 2), Fraction(-1, 4))
    with pytest.raises(ValueError):
        rationalize(3.141592653589793, max_denominator=100)
    assert round_gaussian(2.1 - 2.9j)[:2] == (2, -3)


def test_bit_length_grows():
    assert G(Fraction(1, 1024)).bit_length() > G(Fraction(1, 2)).bit_length()
