"""Canonical text and LaTeX rendering.

The text form is valid input for danielewski.parser (parse-print-parse is a
fixed point); terms are emitted in the canonical order: exponent vectors
lexicographically descending in the fixed global variable order.  The LaTeX
form mirrors the same ordering and renders x-power denominators as
fractions so that emitted maps are visually comparable to hand-written
ones.
"""

from __future__ import annotations

from fractions import Fraction

from .gaussian import GaussianRational
from .polynomials import Expo, MultiPoly, XLaurent


def _frac_str(q: Fraction) -> str:
    return str(q)


def coeff_str(c: GaussianRational, *, wrap_mixed: bool = True) -> str:
    """Render a coefficient so that `coeff*monomial` re-parses correctly."""
    if not c.im:
        return _frac_str(c.re)
    if not c.re:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return f"{_frac_str(c.im)}*i"
    im = coeff_str(GaussianRational(0, c.im), wrap_mixed=False)
    sign = "" if im.startswith("-") else "+"
    body = f"{_frac_str(c.re)}{sign}{im}"
    return f"({body})" if wrap_mixed else body


def monomial_str(vars: tuple[str, ...], expo: Expo) -> str:
    parts = []
    for name, k in zip(vars, expo):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts) if parts else "1"


def _is_negative_lead(c: GaussianRational) -> bool:
    if c.re:
        return c.re < 0
    return c.im < 0


def _term_str(vars: tuple[str, ...], expo: Expo, c: GaussianRational) -> str:
    mon = monomial_str(vars, expo)
    if mon == "1":
        return coeff_str(c, wrap_mixed=False)
    if c == GaussianRational(1):
        return mon
    if c == GaussianRational(-1):
        return f"-{mon}"
    return f"{coeff_str(c)}*{mon}"


def poly_str(p: MultiPoly) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for expo, coeff in p.sorted_terms():
        if not pieces:
            pieces.append(_term_str(p.vars, expo, coeff))
        elif _is_negative_lead(coeff):
            pieces.append(" - " + _term_str(p.vars, expo, -coeff))
        else:
            pieces.append(" + " + _term_str(p.vars, expo, coeff))
    return "".join(pieces)


def laurent_str(q: XLaurent) -> str:
    if q.xshift >= 0:
        return poly_str(q.to_poly())
    denom = "x" if q.xshift == -1 else f"x^{-q.xshift}"
    return f"({poly_str(q.body)})/{denom}"


# -- LaTeX ---------------------------------------------------------------


def _frac_tex(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    sign = "-" if q < 0 else ""
    return f"{sign}\\frac{{{abs(q.numerator)}}}{{{q.denominator}}}"


def coeff_tex(c: GaussianRational, *, wrap_mixed: bool = True) -> str:
    if not c.im:
        return _frac_tex(c.re)
    if not c.re:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return f"{_frac_tex(c.im)}i"
    im = coeff_tex(GaussianRational(0, c.im), wrap_mixed=False)
    sign = "" if im.startswith("-") else "+"
    body = f"{_frac_tex(c.re)}{sign}{im}"
    return f"\\left({body}\\right)" if wrap_mixed else body


def _var_tex(name: str) -> str:
    if len(name) > 1 and name[1:].isdigit():
        return f"{name[0]}_{{{name[1:]}}}"
    return name


def monomial_tex(vars: tuple[str, ...], expo: Expo) -> str:
    parts = []
    for name, k in zip(vars, expo):
        if k == 1:
            parts.append(_var_tex(name))
        elif k > 1:
            parts.append(f"{_var_tex(name)}^{{{k}}}")
    return "".join(parts) if parts else "1"


def _term_tex(vars: tuple[str, ...], expo: Expo, c: GaussianRational) -> str:
    mon = monomial_tex(vars, expo)
    if mon == "1":
        return coeff_tex(c, wrap_mixed=False)
    if c == GaussianRational(1):
        return mon
    if c == GaussianRational(-1):
        return f"-{mon}"
    return f"{coeff_tex(c)}{mon}"


def poly_tex(p: MultiPoly) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for expo, coeff in p.sorted_terms():
        if not pieces:
            pieces.append(_term_tex(p.vars, expo, coeff))
        elif _is_negative_lead(coeff):
            pieces.append("-" + _term_tex(p.vars, expo, -coeff))
        else:
            pieces.append("+" + _term_tex(p.vars, expo, coeff))
    return "".join(pieces)


def laurent_tex(q: XLaurent) -> str:
    if q.xshift >= 0:
        return poly_tex(q.to_poly())
    denom = "x" if q.xshift == -1 else f"x^{{{-q.xshift}}}"
    return f"\\frac{{{poly_tex(q.body)}}}{{{denom}}}"
