from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given

from danielewski.gaussian import GaussianRational, I, ONE, ZERO, gr

from conftest import nonzero_scalars, scalars


def test_basic_arithmetic():
    a = gr(Fraction(1, 2), 3)
    b = gr(2, Fraction(-1, 2))
    assert a + b == gr(Fraction(5, 2), Fraction(5, 2))
    assert a - b == gr(Fraction(-3, 2), Fraction(7, 2))
    assert a * b == gr(Fraction(5, 2), Fraction(23, 4))
    assert -a == gr(Fraction(-1, 2), -3)


def test_i_squares_to_minus_one():
    assert I * I == gr(-1)
    assert I ** 4 == ONE
    assert I ** -1 == -I


def test_zero_and_equality():
    assert not ZERO
    assert gr(0, 0).is_zero()
    assert gr(1) == 1
    assert gr(Fraction(1, 2)) == Fraction(1, 2)
    assert gr(1, 1) != gr(1)


def test_inverse_and_division():
    a = gr(1, 2)
    assert a * a.inverse() == ONE
    assert (a / a) == ONE
    assert ONE / I == -I
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_conjugate_norm():
    a = gr(Fraction(3, 4), Fraction(-2, 5))
    n = a * a.conjugate()
    assert n.im == 0 and n.re == Fraction(3, 4) ** 2 + Fraction(2, 5) ** 2


def test_str_forms():
    assert str(gr(Fraction(1, 2))) == "1/2"
    assert str(I) == "i"
    assert str(-I) == "-i"
    assert str(gr(1, -2)) == "1-2*i"


def test_coerce_rejects_floats():
    with pytest.raises(TypeError):
        GaussianRational.coerce(0.5)


def test_immutable():
    a = gr(1, 1)
    with pytest.raises(AttributeError):
        a.re = Fraction(2)


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@given(nonzero_scalars)
def test_multiplicative_inverse(a):
    assert a * a.inverse() == ONE


@given(scalars, st.integers(min_value=0, max_value=5))
def test_power_matches_repeated_multiplication(a, k):
    expected = ONE
    for _ in range(k):
        expected = expected * a
    assert a ** k == expected
