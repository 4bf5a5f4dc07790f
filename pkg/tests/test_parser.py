import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from danielewski.errors import ParseError
from danielewski.gaussian import gr
from danielewski.parser import parse_poly
from danielewski.polynomials import MultiPoly
from danielewski.render import laurent_str, poly_str, poly_tex
from danielewski.polynomials import XLaurent

from conftest import polys


def test_simple():
    assert parse_poly("z^2 - 1") == MultiPoly(("z",), {(2,): gr(1), (0,): gr(-1)})


def test_complex_coefficient():
    p = parse_poly("(1-i)/2*z^3")
    assert p == MultiPoly(("z",), {(3,): gr(1, -1) / 2})


def test_double_caret_is_error():
    with pytest.raises(ParseError) as err:
        parse_poly("z^^2")
    assert err.value.line == 1 and err.value.column == 3


def test_error_positions():
    with pytest.raises(ParseError) as err:
        parse_poly("z +\n* 2")
    assert err.value.line == 2 and err.value.column == 1
    with pytest.raises(ParseError) as err:
        parse_poly("(z + 1")
    assert err.value.column == 7


def test_unknown_variable():
    with pytest.raises(ParseError):
        parse_poly("q + 1")
    with pytest.raises(ParseError):
        parse_poly("u0")  # chart variables are 1-based


def test_division_rules():
    assert parse_poly("1/2") == MultiPoly.const(gr(1) / 2)
    assert parse_poly("z/2") == parse_poly("1/2*z")
    with pytest.raises(ParseError):
        parse_poly("z/x")
    with pytest.raises(ParseError):
        parse_poly("1/0")
    with pytest.raises(ParseError):
        parse_poly("1/(z - z)")


def test_unary_minus_and_precedence():
    assert parse_poly("-x^2") == -parse_poly("x^2")
    assert parse_poly("-x*y") == parse_poly("(-x)*y")
    assert parse_poly("2*z^3") == parse_poly("2*(z^3)")


def test_imaginary_unit():
    assert parse_poly("i^2") == MultiPoly.const(gr(-1))
    assert parse_poly("i*z - i*z").is_zero()


def test_chart_variables():
    p = parse_poly("u1*u12")
    assert p.vars == ("u1", "u12")


def test_whitespace_and_newlines():
    assert parse_poly(" z \n+ 1 ") == parse_poly("z+1")


def test_print_is_canonical_order():
    # descending lexicographic in the global order x < y < z < t < w < u1...
    assert poly_str(parse_poly("w + z + y + x")) == "x + y + z + w"
    assert (
        poly_str(parse_poly("1/2*(y*z+3*z*w^2+3*x*y*w+x*w^3)"))
        == "3/2*x*y*w + 1/2*x*w^3 + 1/2*y*z + 3/2*z*w^2"
    )


def test_laurent_rendering():
    q = XLaurent(parse_poly("z^2 - 1"), -2)
    assert laurent_str(q) == "(z^2 - 1)/x^2"
    assert laurent_str(XLaurent(parse_poly("z"), 1)) == "x*z"


def test_tex_rendering():
    assert poly_tex(parse_poly("1/2*z^2 - 1")) == "\\frac{1}{2}z^{2}-1"
    assert poly_tex(parse_poly("u1")) == "u_{1}"


@settings(max_examples=80)
@given(polys(vars=("x", "y", "z", "t", "w", "u1", "u2"), max_terms=5, max_exp=4))
def test_parse_print_round_trip(p):
    assert parse_poly(poly_str(p)) == p


@settings(max_examples=40)
@given(polys())
def test_print_is_fixed_point(p):
    once = poly_str(p)
    assert poly_str(parse_poly(once)) == once
