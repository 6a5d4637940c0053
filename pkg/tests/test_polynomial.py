from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wilsonloops.polynomial import BetaPolynomial

polys = st.dictionaries(st.integers(0, 12), st.fractions(max_denominator=7), max_size=5).map(BetaPolynomial)


def test_construction_drops_zeros():
    p = BetaPolynomial({3: 1, 5: 0})
    assert p.coeffs() == {3: 1}
    assert BetaPolynomial().is_zero and BetaPolynomial().degree == -1
    with pytest.raises(ValueError):
        BetaPolynomial({-1: 1})


def test_str():
    assert str(BetaPolynomial({1: 1})) == "β"
    assert str(BetaPolynomial({3: 1, 5: -1})) == "β^3 - β^5"
    assert str(BetaPolynomial({9: 3})) == "3*β^9"
    assert str(BetaPolynomial({0: Fraction(1, 2), 2: -2})) == "1/2 - 2*β^2"
    assert str(BetaPolynomial()) == "0"


def test_evaluation_exact():
    p = BetaPolynomial({3: 1, 5: -1})
    assert p(Fraction(1, 2)) == Fraction(3, 32)
    assert abs(p(0.5) - 3 / 32) < 1e-15


def test_json_roundtrip():
    p = BetaPolynomial({2: Fraction(-3, 4), 7: 11})
    js = p.to_json()
    assert js == [{"exp": 2, "num": "-3", "den": "4"}, {"exp": 7, "num": "11", "den": "1"}]
    assert BetaPolynomial.from_json(js) == p
    assert not p.is_integral() and BetaPolynomial({1: 5}).is_integral()


@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a - a == BetaPolynomial()
    assert (a * b).degree == (-1 if a.is_zero or b.is_zero else a.degree + b.degree)


@given(polys, polys, st.fractions(max_denominator=5))
def test_evaluation_is_a_homomorphism(a, b, x):
    assert (a * b)(x) == a(x) * b(x)
    assert (a + b)(x) == a(x) + b(x)
