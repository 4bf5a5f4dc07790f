"""Recursive-descent parser for polynomial expressions.

Grammar (LL(1)):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' nat)?
    base   := '(' expr ')' | name | nat
    name   := 'i' | 'x' | 'y' | 'z' | 't' | 'w' | 'u'<digits>

Literals are non-negative integers; rationals like 1/2 and coefficients
like (1-i)/2 come out of the '/' operator, whose right operand must reduce
to a nonzero constant.  '^' takes a non-negative integer exponent.
Errors carry a 1-based line and column.
"""

from __future__ import annotations

from .errors import ParseError
from .gaussian import GaussianRational
from .polynomials import MultiPoly, _U_PATTERN

_ALLOWED_NAMES = {"x", "y", "z", "t", "w"}


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(src):
        ch = src[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            tokens.append(_Token("num", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(_Token("name", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.cur
        self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.cur
        raise ParseError(message, tok.line, tok.col)

    def parse(self) -> MultiPoly:
        value = self.expr()
        if self.cur.kind != "eof":
            self.fail(f"unexpected {self.cur.text!r}")
        return value

    def expr(self) -> MultiPoly:
        value = self.term()
        while self.cur.kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> MultiPoly:
        value = self.factor()
        while self.cur.kind in ("*", "/"):
            tok = self.advance()
            rhs = self.factor()
            if tok.kind == "*":
                value = value * rhs
            else:
                if not rhs.is_constant():
                    self.fail("divisor must be a constant", tok)
                c = rhs.constant_value()
                if not c:
                    self.fail("division by zero", tok)
                value = value * c.inverse()
        return value

    def factor(self) -> MultiPoly:
        if self.cur.kind == "-":
            self.advance()
            return -self.factor()
        value = self.base()
        if self.cur.kind == "^":
            self.advance()
            if self.cur.kind != "num":
                self.fail("exponent must be a non-negative integer")
            value = value ** int(self.advance().text)
        return value

    def base(self) -> MultiPoly:
        tok = self.cur
        if tok.kind == "(":
            self.advance()
            value = self.expr()
            if self.cur.kind != ")":
                self.fail("expected ')'")
            self.advance()
            return value
        if tok.kind == "num":
            self.advance()
            return MultiPoly.const(int(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text == "i":
                return MultiPoly.const(GaussianRational(0, 1))
            if tok.text in _ALLOWED_NAMES or _U_PATTERN.match(tok.text):
                return MultiPoly.variable(tok.text)
            self.fail(f"unknown variable {tok.text!r}", tok)
        self.fail(f"unexpected {tok.text!r}" if tok.kind != "eof" else "unexpected end of input", tok)


def parse_poly(src: str) -> MultiPoly:
    """Parse a polynomial expression; raises ParseError with position."""
    return _Parser(_tokenize(src)).parse()
