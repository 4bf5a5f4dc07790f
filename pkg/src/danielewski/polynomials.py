"""Sparse multivariate polynomials over Q(i), and Laurent extension in x.

A MultiPoly stores an ordered tuple of variable names and a finite map from
exponent tuples to nonzero GaussianRational coefficients.  The canonical
form drops zero coefficients and unused variables and sorts variables in a
single fixed global order (x < y < z < t < w < u1 < u2 < ... < others), so
structural equality is semantic equality.  Arithmetic is order-independent.

XLaurent extends MultiPoly with integer powers of the single distinguished
variable x (the only variable ever inverted): it stores body * x**xshift,
normalized so the body has x-valuation zero.

All values are immutable and all operations pure, so everything here is
safe to share across threads.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import NotDivisibleError
from .gaussian import GaussianRational, ZERO, ONE

Expo = tuple[int, ...]

X_NAME = "x"

_BASE_ORDER = {"x": 0, "y": 1, "z": 2, "t": 3, "w": 4}
_U_PATTERN = _re.compile(r"u([1-9][0-9]*)\Z")


def var_key(name: str) -> tuple:
    """Sort key realizing the fixed global variable order."""
    if name in _BASE_ORDER:
        return (0, _BASE_ORDER[name], 0, "")
    m = _U_PATTERN.match(name)
    if m:
        return (1, 0, int(m.group(1)), "")
    return (2, 0, 0, name)


def sort_vars(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=var_key))


Scalar = GaussianRational | int | Fraction


def _as_coeff(value) -> GaussianRational:
    return GaussianRational.coerce(value)


class MultiPoly:
    """Immutable sparse polynomial in canonical form."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Iterable[str], terms: Mapping[Expo, Scalar]):
        cleaned = {}
        vtuple = tuple(vars)
        for expo, coeff in terms.items():
            c = _as_coeff(coeff)
            if not c:
                continue
            e = tuple(expo)
            if len(e) != len(vtuple):
                raise ValueError("exponent vector length does not match vars")
            if any(k < 0 for k in e):
                raise ValueError("negative exponent in MultiPoly")
            cleaned[e] = cleaned.get(e, ZERO) + c if e in cleaned else c
        cleaned = {e: c for e, c in cleaned.items() if c}
        used = [i for i in range(len(vtuple)) if any(e[i] for e in cleaned)]
        order = sorted(used, key=lambda i: var_key(vtuple[i]))
        if [vtuple[i] for i in order] != list(vtuple):
            new_vars = tuple(vtuple[i] for i in order)
            cleaned = {tuple(e[i] for i in order): c for e, c in cleaned.items()}
            vtuple = new_vars
        object.__setattr__(self, "vars", vtuple)
        object.__setattr__(self, "terms", cleaned)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "MultiPoly":
        return _ZERO_POLY

    @staticmethod
    def const(value: Scalar) -> "MultiPoly":
        c = _as_coeff(value)
        if not c:
            return _ZERO_POLY
        return MultiPoly((), {(): c})

    @staticmethod
    def variable(name: str) -> "MultiPoly":
        return MultiPoly((name,), {(1,): ONE})

    @staticmethod
    def coerce(value) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            return value
        if isinstance(value, XLaurent):
            return value.to_poly()
        return MultiPoly.const(value)

    # -- basic structure ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.vars

    def constant_value(self) -> GaussianRational:
        if self.vars:
            raise ValueError(f"not a constant: {self!r}")
        return self.terms.get((), ZERO)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial, 0 if absent."""
        if not self.terms:
            return -1
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def sorted_terms(self) -> list[tuple[Expo, GaussianRational]]:
        """Terms in canonical print order: lexicographically descending
        exponent vectors with respect to the global variable order."""
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = MultiPoly.const(other)
        if isinstance(other, XLaurent):
            return XLaurent.from_poly(self) == other
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.vars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- arithmetic ----------------------------------------------------

    def _aligned_with(self, other: "MultiPoly"):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        universe = sort_vars(self.vars + other.vars)
        return universe, _remap(self, universe), _remap(other, universe)

    def __add__(self, other):
        if isinstance(other, XLaurent):
            return XLaurent.from_poly(self) + other
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other)
        universe, a, b = self._aligned_with(other)
        out = dict(a)
        for e, c in b.items():
            cur = out.get(e)
            if cur is None:
                out[e] = c
            else:
                s = cur + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return _make(universe, out)

    __radd__ = __add__

    def __neg__(self):
        return _make(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, XLaurent):
            return XLaurent.from_poly(self) - other
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, XLaurent):
            return XLaurent.from_poly(self) * other
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = _as_coeff(other)
            if not c:
                return _ZERO_POLY
            return _make(self.vars, {e: k * c for e, k in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        universe, a, b = self._aligned_with(other)
        if len(a) > len(b):
            a, b = b, a
        out: dict[Expo, GaussianRational] = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                k = tuple(map(int.__add__, ea, eb))
                cur = get(k)
                out[k] = ca * cb if cur is None else cur + ca * cb
        return _make(universe, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "MultiPoly":
        if exponent < 0:
            raise ValueError("negative power of a MultiPoly")
        result = MultiPoly.const(1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            if n > 1:
                base = base * base
            n >>= 1
        return result

    # -- per-variable views ---------------------------------------------

    def by_powers(self, var: str) -> dict[int, "MultiPoly"]:
        """Split as a polynomial in `var`: degree -> coefficient poly."""
        if var not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(var)
        rest = self.vars[:i] + self.vars[i + 1:]
        buckets: dict[int, dict[Expo, GaussianRational]] = {}
        for e, c in self.terms.items():
            k = e[i]
            buckets.setdefault(k, {})[e[:i] + e[i + 1:]] = c
        return {k: _make(rest, t) for k, t in buckets.items()}

    def coefficient(self, var: str, power: int) -> "MultiPoly":
        return self.by_powers(var).get(power, _ZERO_POLY)

    def __repr__(self) -> str:
        from .render import poly_str

        return f"MultiPoly({poly_str(self)!r})"


def _remap(p: MultiPoly, universe: tuple[str, ...]) -> dict[Expo, GaussianRational]:
    pos = [universe.index(v) for v in p.vars]
    n = len(universe)
    out = {}
    for e, c in p.terms.items():
        new = [0] * n
        for i, k in enumerate(e):
            new[pos[i]] = k
        out[tuple(new)] = c
    return out


def _make(vars: tuple[str, ...], terms: dict[Expo, GaussianRational]) -> MultiPoly:
    """Internal fast path for arithmetic results: assumes vars are already
    canonically sorted and exponent tuples aligned; drops zero coefficients
    and projects away unused variables without re-validating."""
    cleaned = {e: c for e, c in terms.items() if c}
    if not cleaned:
        return _ZERO_POLY
    n = len(vars)
    if n:
        keep = [i for i in range(n) if any(e[i] for e in cleaned)]
        if len(keep) != n:
            vars = tuple(vars[i] for i in keep)
            cleaned = {tuple(e[i] for i in keep): c for e, c in cleaned.items()}
    obj = object.__new__(MultiPoly)
    object.__setattr__(obj, "vars", vars)
    object.__setattr__(obj, "terms", cleaned)
    object.__setattr__(obj, "_hash", None)
    return obj


_ZERO_POLY = MultiPoly((), {})


def variables(*names: str) -> tuple[MultiPoly, ...]:
    return tuple(MultiPoly.variable(n) for n in names)


def x_valuation(p: MultiPoly) -> int:
    """Largest k with x**k dividing p; 0 for the zero polynomial."""
    if not p.terms or X_NAME not in p.vars:
        return 0
    i = p.vars.index(X_NAME)
    return min(e[i] for e in p.terms)


def _min_x_witness(p: MultiPoly) -> str:
    from .render import monomial_str

    i = p.vars.index(X_NAME) if X_NAME in p.vars else None
    if i is None:
        e = min(p.terms)
    else:
        e = min(p.terms, key=lambda t: (t[i],) + t)
    return monomial_str(p.vars, e)


def div_exact_x_power(p: MultiPoly, k: int, chart: int | None = None) -> MultiPoly:
    """Exact division by x**k; raises NotDivisibleError with a witness
    monomial when some term has x-exponent below k."""
    if k < 0:
        raise ValueError("power must be non-negative")
    if k == 0 or not p.terms:
        return p
    if X_NAME not in p.vars or x_valuation(p) < k:
        raise NotDivisibleError(k, _min_x_witness(p), chart)
    i = p.vars.index(X_NAME)
    terms = {e[:i] + (e[i] - k,) + e[i + 1:]: c for e, c in p.terms.items()}
    return _make(p.vars, terms)


def mul_x_power(p: MultiPoly, k: int) -> MultiPoly:
    if k == 0 or not p.terms:
        return p
    if k < 0:
        return div_exact_x_power(p, -k)
    if X_NAME in p.vars:
        i = p.vars.index(X_NAME)
        return _make(p.vars, {e[:i] + (e[i] + k,) + e[i + 1:]: c for e, c in p.terms.items()})
    return p * MultiPoly((X_NAME,), {(k,): ONE})


def truncate_x(p: MultiPoly, n: int) -> MultiPoly:
    """Drop all terms of x-degree >= n (reduction mod x**n)."""
    if X_NAME not in p.vars:
        return p if n > 0 else _ZERO_POLY
    i = p.vars.index(X_NAME)
    return _make(p.vars, {e: c for e, c in p.terms.items() if e[i] < n})


def formal_derivative(p: MultiPoly, var: str) -> MultiPoly:
    """Exact partial derivative with respect to one variable."""
    if var not in p.vars:
        return _ZERO_POLY
    i = p.vars.index(var)
    out = {}
    for e, c in p.terms.items():
        k = e[i]
        if k:
            out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
    return _make(p.vars, out)


class XLaurent:
    """body * x**xshift with the body normalized to x-valuation zero.

    xshift may be negative; the value converts back to a MultiPoly exactly
    when the normalized shift is >= 0.
    """

    __slots__ = ("body", "xshift")

    def __init__(self, body: MultiPoly, xshift: int = 0):
        if not body.terms:
            body, xshift = _ZERO_POLY, 0
        else:
            v = x_valuation(body)
            if v:
                body = div_exact_x_power(body, v)
                xshift += v
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "xshift", xshift)

    def __setattr__(self, name, value):
        raise AttributeError("XLaurent is immutable")

    @staticmethod
    def from_poly(p: MultiPoly) -> "XLaurent":
        return XLaurent(p, 0)

    @staticmethod
    def coerce(value) -> "XLaurent":
        if isinstance(value, XLaurent):
            return value
        return XLaurent(MultiPoly.coerce(value), 0)

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def __bool__(self) -> bool:
        return bool(self.body)

    def to_poly(self) -> MultiPoly:
        if self.xshift < 0:
            raise NotDivisibleError(-self.xshift, _min_x_witness(self.body))
        return mul_x_power(self.body, self.xshift)

    def div_x(self, k: int) -> "XLaurent":
        return XLaurent(self.body, self.xshift - k)

    def __eq__(self, other) -> bool:
        if isinstance(other, (MultiPoly, int, Fraction, GaussianRational)):
            other = XLaurent.coerce(other)
        if not isinstance(other, XLaurent):
            return NotImplemented
        return self.xshift == other.xshift and self.body == other.body

    def __hash__(self) -> int:
        return hash((self.body, self.xshift))

    def __add__(self, other):
        other = XLaurent.coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        m = min(self.xshift, other.xshift)
        a = mul_x_power(self.body, self.xshift - m)
        b = mul_x_power(other.body, other.xshift - m)
        return XLaurent(a + b, m)

    __radd__ = __add__

    def __neg__(self):
        return XLaurent(-self.body, self.xshift)

    def __sub__(self, other):
        return self + (-XLaurent.coerce(other))

    def __rsub__(self, other):
        return XLaurent.coerce(other) + (-self)

    def __mul__(self, other):
        other = XLaurent.coerce(other)
        return XLaurent(self.body * other.body, self.xshift + other.xshift)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "XLaurent":
        if exponent < 0:
            raise ValueError("negative power of an XLaurent")
        return XLaurent(self.body ** exponent, self.xshift * exponent)

    def __repr__(self) -> str:
        from .render import laurent_str

        return f"XLaurent({laurent_str(self)!r})"


def substitute(p: MultiPoly, bindings: Mapping[str, object]) -> XLaurent:
    """Exact simultaneous substitution; unbound variables pass through.

    Binding values may be MultiPoly, XLaurent, or scalars.  Bindings for
    variables absent from p are ignored.  The result is Laurent in x
    whenever some binding is.  Evaluation is multivariate Horner: the
    polynomial is peeled one bound variable at a time, multiplying by the
    (small) binding at each step instead of assembling large powers.
    """
    relevant: dict[str, XLaurent] = {}
    for v, val in bindings.items():
        if v in p.vars:
            xl = XLaurent.coerce(val)
            if not (xl.xshift == 0 and xl.body == MultiPoly.variable(v)):
                relevant[v] = xl
    if not relevant or not p.terms:
        return XLaurent.from_poly(p)
    return _subst_horner(p, relevant)


def _subst_horner(p: MultiPoly, bound: Mapping[str, XLaurent]) -> XLaurent:
    var = next((v for v in p.vars if v in bound), None)
    if var is None:
        return XLaurent.from_poly(p)
    parts = p.by_powers(var)
    top = max(parts)
    value = bound[var]
    acc = _subst_horner(parts[top], bound)
    for k in range(top - 1, -1, -1):
        acc = acc * value
        if k in parts:
            acc = acc + _subst_horner(parts[k], bound)
    return acc


def substitute_poly(p: MultiPoly, bindings: Mapping[str, object]) -> MultiPoly:
    """substitute() for the common case where the result must be polynomial."""
    return substitute(p, bindings).to_poly()


def substitute_laurent(p: XLaurent, bindings: Mapping[str, object]) -> XLaurent:
    """Substitution through a Laurent element; x itself may not be bound."""
    if X_NAME in bindings and p.xshift != 0:
        raise ValueError("cannot rebind x through a Laurent shift")
    return substitute(p.body, bindings) * XLaurent(MultiPoly.const(1), p.xshift)


# -- univariate helpers -------------------------------------------------


def to_dense(p: MultiPoly, var: str) -> list[GaussianRational]:
    """Coefficient list (constant term first) of a univariate polynomial."""
    if p.vars not in ((), (var,)):
        raise ValueError(f"not univariate in {var}: vars {p.vars}")
    n = p.degree(var)
    out = [ZERO] * (max(n, 0) + 1)
    for e, c in p.terms.items():
        out[e[0] if p.vars else 0] = c
    return out


def from_dense(coeffs: list[GaussianRational], var: str) -> MultiPoly:
    return MultiPoly((var,), {(k,): c for k, c in enumerate(coeffs) if c})


def eval_univariate(p: MultiPoly, value: GaussianRational) -> GaussianRational:
    """Horner evaluation of a univariate polynomial at a field element."""
    if p.is_constant():
        return p.constant_value()
    coeffs = to_dense(p, p.vars[0])
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * value + c
    return acc


def poly_divmod(a: MultiPoly, b: MultiPoly, var: str) -> tuple[MultiPoly, MultiPoly]:
    """Exact univariate division with remainder over Q(i)."""
    db = to_dense(b, var)
    while db and not db[-1]:
        db.pop()
    if not db:
        raise ZeroDivisionError("division by zero polynomial")
    da = to_dense(a, var)
    lead = db[-1]
    q = [ZERO] * max(len(da) - len(db) + 1, 0)
    r = list(da)
    for k in range(len(da) - len(db), -1, -1):
        if len(r) > k + len(db) - 1 and r[k + len(db) - 1]:
            factor = r[k + len(db) - 1] / lead
            q[k] = factor
            for j, c in enumerate(db):
                r[k + j] = r[k + j] - factor * c
    return from_dense(q, var), from_dense(r, var)


def poly_div_exact(a: MultiPoly, b: MultiPoly, var: str) -> MultiPoly:
    q, r = poly_divmod(a, b, var)
    if r.terms:
        raise ValueError("division is not exact")
    return q


def taylor_shift(
    p: MultiPoly,
    center: GaussianRational,
    x_name: str = X_NAME,
    t_name: str | None = None,
) -> MultiPoly:
    """Expand p(center + x*t) exactly as a polynomial in (x, t).

    p must be univariate (in t_name when given).  Computed through
    derivatives divided by exact factorials; never truncated.
    """
    if t_name is None:
        if len(p.vars) > 1:
            raise ValueError("taylor_shift needs a univariate polynomial")
        t_name = p.vars[0] if p.vars else "t"
    elif not set(p.vars) <= {t_name}:
        raise ValueError(f"not univariate in {t_name}: vars {p.vars}")
    center = GaussianRational.coerce(center)
    out: dict[Expo, GaussianRational] = {}
    d = p
    factorial = Fraction(1)
    k = 0
    while d.terms:
        value = eval_univariate(d, center) / factorial
        if value:
            out[(k, k)] = value
        d = formal_derivative(d, t_name) if d.vars else _ZERO_POLY
        k += 1
        factorial *= k
    return MultiPoly(sort_vars((x_name, t_name)), out) if out else _ZERO_POLY
