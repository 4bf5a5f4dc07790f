"""Exact univariate interpolation and lifting over Q(i).

Provides Lagrange/Hermite interpolation with prescribed vanishing
derivatives (solved by exact Gaussian elimination on the confluent
Vandermonde system), the layered two-variable interpolant used to build
slices on cylinders, Hensel lifting of simple roots to truncated power
series, Bezout cofactor pairs, and the mutually-flat interpolant pair for
classical surface cylinders.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    NotSimpleRootError,
    NotSquarefreeError,
    PreconditionError,
    SingularSystemError,
)
from .gaussian import GaussianRational, ONE, ZERO
from .polynomials import (
    MultiPoly,
    eval_univariate,
    formal_derivative,
    from_dense,
    mul_x_power,
    poly_divmod,
    substitute_poly,
    truncate_x,
)

# -- exact linear algebra -------------------------------------------------


def solve_square(
    matrix: list[list[GaussianRational]], rhs: list[GaussianRational]
) -> list[GaussianRational]:
    """Solve a regular square system exactly; SingularSystemError otherwise."""
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            raise SingularSystemError(f"no pivot in column {col}")
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col].inverse()
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def solve_rectangular(
    matrix: list[list[GaussianRational]], rhs: list[GaussianRational]
) -> list[GaussianRational] | None:
    """Any exact solution of a (possibly over/under-determined) system,
    with free variables set to zero; None when inconsistent.

    Deterministic: pivots are chosen column-first, so the result depends
    only on the input ordering.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    a = [matrix[i][:] + [rhs[i]] for i in range(rows)]
    pivot_of_col: dict[int, int] = {}
    r = 0
    for col in range(cols):
        pivot = next((k for k in range(r, rows) if a[k][col]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = a[r][col].inverse()
        a[r] = [v * inv for v in a[r]]
        for k in range(rows):
            if k != r and a[k][col]:
                f = a[k][col]
                a[k] = [v - f * w for v, w in zip(a[k], a[r])]
        pivot_of_col[col] = r
        r += 1
        if r == rows:
            break
    for k in range(r, rows):
        if a[k][cols]:
            return None
    solution = [ZERO] * cols
    for col, row in pivot_of_col.items():
        solution[col] = a[row][cols]
    # Rows beyond the pivot block were checked; with free variables at zero
    # the pivot equations hold by construction, but re-verify to be safe.
    for k in range(rows):
        total = ZERO
        for col in range(cols):
            if a[k][col] and solution[col]:
                total = total + a[k][col] * solution[col]
        if total != a[k][cols]:
            return None
    return solution


# -- Hermite interpolation ------------------------------------------------


@dataclass(frozen=True)
class HermiteSpec:
    """Interpolation data: at node i, the value values[i] is prescribed and
    the first vanish_orders[i] derivatives must vanish."""

    nodes: tuple[GaussianRational, ...]
    values: tuple[GaussianRational, ...]
    vanish_orders: tuple[int, ...]

    def __post_init__(self):
        if not (len(self.nodes) == len(self.values) == len(self.vanish_orders)):
            raise PreconditionError("node/value/order lists must share a length")
        if len(set(self.nodes)) != len(self.nodes):
            raise PreconditionError("interpolation nodes must be pairwise distinct")
        if any(k < 0 for k in self.vanish_orders):
            raise PreconditionError("vanish orders must be non-negative")


def _falling_factorial(j: int, k: int) -> int:
    out = 1
    for step in range(k):
        out *= j - step
    return out


def hermite_interpolate(spec: HermiteSpec, var: str = "t") -> MultiPoly:
    """The unique polynomial of degree < sum(order_i + 1) matching the spec.

    The confluent Vandermonde system is solved exactly and the constraints
    are re-verified by evaluation before returning.
    """
    size = sum(k + 1 for k in spec.vanish_orders)
    matrix: list[list[GaussianRational]] = []
    rhs: list[GaussianRational] = []
    for node, value, order in zip(spec.nodes, spec.values, spec.vanish_orders):
        powers = [ONE]
        for _ in range(size):
            powers.append(powers[-1] * node)
        for k in range(order + 1):
            row = []
            for j in range(size):
                if j < k:
                    row.append(ZERO)
                else:
                    row.append(powers[j - k] * _falling_factorial(j, k))
            matrix.append(row)
            rhs.append(value if k == 0 else ZERO)
    coeffs = solve_square(matrix, rhs)
    result = from_dense(coeffs, var)
    d = result
    for node, value, order in zip(spec.nodes, spec.values, spec.vanish_orders):
        if eval_univariate(result, node) != value:
            raise SingularSystemError("interpolant fails a value constraint")
    for k in range(1, max(spec.vanish_orders, default=0) + 1):
        d = formal_derivative(d, var)
        for node, order in zip(spec.nodes, spec.vanish_orders):
            if k <= order and eval_univariate(d, node):
                raise SingularSystemError("interpolant fails a derivative constraint")
    return result


def lagrange(
    nodes: list[GaussianRational], values: list[GaussianRational], var: str = "t"
) -> MultiPoly:
    return hermite_interpolate(
        HermiteSpec(tuple(nodes), tuple(values), (0,) * len(nodes)), var
    )


# -- the layered slice interpolant ---------------------------------------


def slice_interpolant(
    sigmas: list[MultiPoly],
    roots: list[GaussianRational],
    n: int,
    t_name: str = "t",
) -> MultiPoly:
    """Build g(x, t) = sum_j g_j(t) x^j with g_j(r_i) = [x^j] sigma_i and
    g_j flat to order n-1-j at every r_i, so that g(x, r_i + x*t) is
    congruent to sigma_i(x) mod x^n.  The congruence is re-verified before
    returning.
    """
    from .verification import check_slice_congruence

    d = len(sigmas)
    if len(roots) != d:
        raise PreconditionError("sigma and root counts differ")
    if len(set(roots)) != d:
        raise PreconditionError("roots must be pairwise distinct")
    if len(set(sigmas)) != d:
        raise PreconditionError("sigma polynomials must be pairwise distinct")
    if n < 1:
        raise PreconditionError("n must be positive")
    for s in sigmas:
        if s.degree("x") >= n or not set(s.vars) <= {"x"}:
            raise PreconditionError("each sigma must be a polynomial in x of degree < n")
    total = MultiPoly.zero()
    for j in range(n):
        values = []
        for s in sigmas:
            coeff = s.coefficient("x", j)
            values.append(coeff.constant_value() if coeff.is_constant() else ZERO)
        layer = hermite_interpolate(
            HermiteSpec(tuple(roots), tuple(values), (n - 1 - j,) * d), t_name
        )
        total = total + mul_x_power(layer, j)
    report = check_slice_congruence(total, sigmas, roots, n, t_name=t_name)
    if not report.passed:
        raise SingularSystemError(f"slice interpolant congruence failed: {report}")
    return total


# -- Hensel lifting -------------------------------------------------------


def hensel_sections(
    q_poly: MultiPoly, n: int, roots: list[GaussianRational]
) -> list[MultiPoly]:
    """For each simple root r of q(0, z), the unique sigma(x) of degree < n
    with sigma(0) = r and q(x, sigma(x)) = 0 mod x^n, by Newton lifting one
    x-order per step.  Verified by substitution before returning.
    """
    if n < 1:
        raise PreconditionError("n must be positive")
    if not set(q_poly.vars) <= {"x", "z"}:
        raise PreconditionError("expected a polynomial in (x, z)")
    q0 = truncate_x(q_poly, 1)
    dq0 = formal_derivative(q0, "z")
    sections = []
    for r in roots:
        r = GaussianRational.coerce(r)
        if eval_univariate(q0, r):
            raise NotSimpleRootError(f"{r} is not a root of the x=0 fiber")
        slope = eval_univariate(dq0, r)
        if not slope:
            raise NotSimpleRootError(f"{r} is not a simple root of the x=0 fiber")
        inv_slope = slope.inverse()
        sigma = MultiPoly.const(r)
        for k in range(1, n):
            residue = truncate_x(substitute_poly(q_poly, {"z": sigma}), k + 1)
            c = residue.coefficient("x", k)
            if c.terms:
                delta = -c.constant_value() * inv_slope
                sigma = sigma + mul_x_power(MultiPoly.const(delta), k)
        if truncate_x(substitute_poly(q_poly, {"z": sigma}), n).terms:
            raise SingularSystemError("Hensel lifting failed to reach the congruence")
        sections.append(sigma)
    return sections


# -- Bezout pairs ---------------------------------------------------------


@dataclass(frozen=True)
class BezoutData:
    """u*P' + v*P = 1, together with the derived flat interpolant
    g = z - P*u, which fixes every root of P with vanishing derivative."""

    u: MultiPoly
    v: MultiPoly
    g: MultiPoly


def bezout_pair(p_poly: MultiPoly, var: str | None = None) -> BezoutData:
    """Extended Euclid on (P', P); requires P squarefree over Q(i)."""
    if var is None:
        if len(p_poly.vars) != 1:
            raise PreconditionError("expected a univariate polynomial")
        var = p_poly.vars[0]
    dp = formal_derivative(p_poly, var)
    one = MultiPoly.const(1)
    zero = MultiPoly.zero()
    # Iterative extended Euclid: r0 = P', r1 = P.
    r0, r1 = dp, p_poly
    s0, s1 = one, zero
    t0, t1 = zero, one
    while r1.terms:
        q, r = poly_divmod(r0, r1, var)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0.is_constant():
        raise NotSquarefreeError("gcd(P, P') is not constant")
    c = r0.constant_value()
    if not c:
        raise NotSquarefreeError("zero polynomial has no Bezout pair")
    inv = c.inverse()
    u, v = s0 * inv, t0 * inv
    if u * dp + v * p_poly != one:
        raise SingularSystemError("Bezout identity failed to verify")
    g = MultiPoly.variable(var) - p_poly * u
    return BezoutData(u=u, v=v, g=g)


# -- mutually flat interpolant pairs --------------------------------------


def inverse_interpolants(
    roots_p: list[GaussianRational],
    roots_q: list[GaussianRational],
    n: int,
    m: int,
    var: str = "z",
) -> tuple[MultiPoly, MultiPoly]:
    """The pair (f, g) with f(b_i) = a_i flat to order n-1 and
    g(a_i) = b_i flat to order m-1; both verified by evaluation."""
    d = len(roots_p)
    if d != len(roots_q) or d < 1:
        raise PreconditionError("root lists must have equal positive length")
    if len(set(roots_p)) != d or len(set(roots_q)) != d:
        raise PreconditionError("root lists must be pairwise distinct")
    if n < 1 or m < 1:
        raise PreconditionError("orders must be positive")
    f = hermite_interpolate(
        HermiteSpec(tuple(roots_q), tuple(roots_p), (n - 1,) * d), var
    )
    g = hermite_interpolate(
        HermiteSpec(tuple(roots_p), tuple(roots_q), (m - 1,) * d), var
    )
    return f, g
