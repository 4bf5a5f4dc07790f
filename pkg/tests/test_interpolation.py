from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from danielewski.errors import (
    NotSimpleRootError,
    NotSquarefreeError,
    PreconditionError,
)
from danielewski.gaussian import GaussianRational, gr
from danielewski.interpolation import (
    HermiteSpec,
    bezout_pair,
    hensel_sections,
    hermite_interpolate,
    inverse_interpolants,
    lagrange,
    slice_interpolant,
    solve_rectangular,
    solve_square,
)
from danielewski.parser import parse_poly as pp
from danielewski.polynomials import (
    MultiPoly,
    eval_univariate,
    formal_derivative,
    substitute_poly,
    truncate_x,
)

from conftest import scalars

I = gr(0, 1)
FOURTH_ROOTS = (I, I ** 2, I ** 3, I ** 4)  # i, -1, -i, 1


def eval_derivatives(p, var, node, order):
    """Oracle: p(node) and derivatives up to `order` by repeated formal
    differentiation and Horner evaluation."""
    values = []
    current = p
    for _ in range(order + 1):
        values.append(eval_univariate(current, node))
        current = formal_derivative(current, var)
    return values


# -- exact linear algebra ------------------------------------------------------


def test_solve_square():
    a = [[gr(2), gr(1)], [gr(1), gr(-1)]]
    b = [gr(4), gr(-1)]
    x = solve_square(a, b)
    assert x == [gr(1), gr(2)]


def test_solve_rectangular_inconsistent():
    a = [[gr(1)], [gr(1)]]
    assert solve_rectangular(a, [gr(1), gr(2)]) is None


def test_solve_rectangular_free_vars_zeroed():
    a = [[gr(1), gr(1)]]
    assert solve_rectangular(a, [gr(3)]) == [gr(3), gr(0)]


# -- Hermite interpolation -----------------------------------------------------


def test_flat_interpolant_two_nodes():
    spec = HermiteSpec((gr(1), gr(-1)), (gr(1), gr(-1)), (1, 1))
    assert hermite_interpolate(spec) == pp("3/2*t - 1/2*t^3")


def test_plain_lagrange_identity():
    spec = HermiteSpec((gr(1), gr(-1)), (gr(1), gr(-1)), (0, 0))
    assert hermite_interpolate(spec) == pp("t")


def test_degree_seven_flat_interpolant():
    # values (1, i, -i, -1) at nodes (1, i, -i, -1) with one flat derivative:
    # cross-checked by evaluating the result and its derivative at each node
    nodes = (gr(1), I, -I, gr(-1))
    values = (gr(1), I, -I, gr(-1))
    g0 = hermite_interpolate(HermiteSpec(nodes, values, (1, 1, 1, 1)))
    assert g0.degree("t") < 8
    for node, value in zip(nodes, values):
        got = eval_derivatives(g0, "t", node, 1)
        assert got[0] == value and got[1].is_zero()


def test_duplicate_nodes_rejected():
    with pytest.raises(PreconditionError):
        HermiteSpec((gr(1), gr(1)), (gr(0), gr(0)), (0, 0))


@settings(max_examples=30)
@given(
    st.lists(
        st.sampled_from([gr(0), gr(1), gr(-1), I, -I, gr(2)]),
        min_size=1,
        max_size=3,
        unique=True,
    ),
    st.data(),
)
def test_hermite_matches_all_constraints(nodes, data):
    values = tuple(data.draw(scalars) for _ in nodes)
    orders = tuple(
        data.draw(st.integers(min_value=0, max_value=2)) for _ in nodes
    )
    g = hermite_interpolate(HermiteSpec(tuple(nodes), values, orders))
    assert g.degree("t") < sum(o + 1 for o in orders) or g.is_zero()
    for node, value, order in zip(nodes, values, orders):
        got = eval_derivatives(g, "t", node, order)
        assert got[0] == value
        assert all(v.is_zero() for v in got[1:])


# -- the layered slice interpolant ----------------------------------------------


def test_slice_interpolant_lagrange_case():
    sigmas = [MultiPoly.const(gr(1)), MultiPoly.const(gr(-1))]
    g = slice_interpolant(sigmas, [gr(1), gr(-1)], 1)
    assert g == pp("t")


def test_slice_interpolant_iterated_data():
    # frozen from the printed interpolant for the weight-2 surface over the
    # fourth roots of unity
    sigmas = [
        MultiPoly.const(e ** 2) + pp("x") * MultiPoly.const(e ** -1 / 2)
        for e in FOURTH_ROOTS
    ]
    g = slice_interpolant(sigmas, list(FOURTH_ROOTS), 2)
    expected = substitute_poly(
        pp("z^2 - 1/2*z^2*(z^4-1) + x*1/2*z^3"), {"z": pp("t")}
    )
    assert g == expected


def test_slice_interpolant_double_data():
    sigmas = [
        pp("1 + 1/2*x"),
        pp("-1 - 1/2*x"),
        pp("1 - 1/2*x"),
        pp("-1 + 1/2*x"),
    ]
    roots = [gr(1), I, -I, gr(-1)]
    g = slice_interpolant(sigmas, roots, 2)
    expected = substitute_poly(
        pp(
            "(1-i)/2*z^3 + (1+i)/2*z - (z^4-1)*z/4*(3*(1-i)/2*z^2 + (1+i)/2)"
            " + x*1/2*z^2"
        ),
        {"z": pp("t")},
    )
    assert g == expected


def test_slice_interpolant_congruence_oracle():
    # independent check of the defining congruence by direct substitution
    sigmas = [pp("1 + x"), pp("-1 + 1/2*x"), pp("i")]
    roots = [gr(2), gr(0), gr(-1)]
    g = slice_interpolant(sigmas, roots, 2)
    for sigma, root in zip(sigmas, roots):
        shifted = substitute_poly(g, {"t": MultiPoly.const(root) + pp("x*t")})
        assert truncate_x(shifted, 2) == sigma


def test_slice_interpolant_preconditions():
    with pytest.raises(PreconditionError):
        slice_interpolant([pp("x^2")], [gr(1)], 2)  # degree >= n
    with pytest.raises(PreconditionError):
        slice_interpolant([pp("1"), pp("1")], [gr(1), gr(-1)], 2)  # equal sigmas


# -- Hensel lifting --------------------------------------------------------------


def test_hensel_stationary_when_x_free():
    sections = hensel_sections(pp("z^2 - 1"), 3, [gr(1), gr(-1)])
    assert sections == [MultiPoly.const(gr(1)), MultiPoly.const(gr(-1))]


def test_hensel_one_newton_step():
    (sigma,) = hensel_sections(pp("z^2 - 1 - x*z"), 2, [gr(1)])
    assert sigma == pp("1 + 1/2*x")


def test_hensel_double_root_rejected():
    with pytest.raises(NotSimpleRootError):
        hensel_sections(pp("z^2"), 2, [gr(0)])
    with pytest.raises(NotSimpleRootError):
        hensel_sections(pp("z^2 - 1"), 2, [gr(2)])  # not a root at all


def test_hensel_congruence_and_uniqueness():
    q = pp("z^2 - 1 - x*z - x^2")
    (sigma,) = hensel_sections(q, 4, [gr(1)])
    assert sigma.degree("x") < 4
    assert truncate_x(substitute_poly(q, {"z": sigma}), 4).is_zero()
    # perturbing any coefficient breaks the congruence (uniqueness spot check)
    for k in range(4):
        perturbed = sigma + pp("x") ** k * MultiPoly.const(gr(Fraction(1, 7)))
        assert not truncate_x(
            substitute_poly(q, {"z": perturbed}), 4
        ).is_zero()


# -- Bezout pairs -----------------------------------------------------------------


def test_bezout_classic():
    data = bezout_pair(pp("z^2 - 1"))
    assert data.u == pp("1/2*z")
    assert data.v == pp("-1")
    assert data.g == pp("z - (z^2-1)*z/2")


def test_bezout_linear():
    data = bezout_pair(pp("z"))
    assert data.u == pp("1") and data.v == pp("0")


def test_bezout_square_rejected():
    with pytest.raises(NotSquarefreeError):
        bezout_pair(pp("z^2"))


def test_bezout_fixes_roots_flatly():
    # g(a) = a and g'(a) = 0 at every root of P
    roots = [gr(1), gr(-1), gr(2), I]
    p = MultiPoly.const(1)
    for r in roots:
        p = p * (pp("z") - MultiPoly.const(r))
    data = bezout_pair(p)
    dp = formal_derivative(p, "z")
    assert data.u * dp + data.v * p == MultiPoly.const(1)
    dg = formal_derivative(data.g, "z")
    for r in roots:
        assert eval_univariate(data.g, r) == r
        assert eval_univariate(dg, r).is_zero()


# -- mutually flat pairs -----------------------------------------------------------


def test_inverse_interpolants_russell_case():
    f, g = inverse_interpolants([gr(1), gr(-1)], [gr(1), gr(-1)], 1, 2)
    assert f == pp("z")
    assert g == pp("3/2*z - 1/2*z^3")


def test_inverse_interpolants_identity_case():
    f, g = inverse_interpolants([gr(1), gr(-1), gr(0)], [gr(1), gr(-1), gr(0)], 1, 1)
    assert f == pp("z") and g == pp("z")


def test_inverse_interpolants_two_point_lagrange():
    # frozen two-point Lagrange values: f(1)=0, f(-1)=1 and g(0)=1, g(1)=-1
    f, g = inverse_interpolants([gr(0), gr(1)], [gr(1), gr(-1)], 1, 1)
    assert f == pp("(1-z)/2")
    assert g == pp("1 - 2*z")


def test_inverse_interpolants_preconditions():
    with pytest.raises(PreconditionError):
        inverse_interpolants([gr(1)], [gr(1), gr(2)], 1, 1)
    with pytest.raises(PreconditionError):
        inverse_interpolants([gr(1), gr(1)], [gr(1), gr(2)], 1, 1)
