"""Recursive-descent parser for polynomial and tensor literals.

Accepted forms: ``3/2*x^2*y - s``, ``d/dx`` (coordinate vector field),
``dx`` (coordinate 1-form), ``dx^dy`` (wedge), ``x*d/dy + d/dx``.
``^`` is a power when its right operand is an integer literal and a wedge
between tensors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exactpoly import FORM, MULTIVECTOR, Poly, PolyTensor, wedge


@dataclass
class ParseError(Exception):
    message: str
    line: int
    column: int
    expected: tuple = field(default_factory=tuple)

    def __str__(self) -> str:
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        return f"line {self.line}, column {self.column}: {self.message}{exp}"


_TOKEN = re.compile(
    r"\s*(?:(?P<partial>d/d[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<num>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)


@dataclass
class Tok:
    kind: str
    text: str
    col: int


def tokenize(text: str, line: int = 1, col0: int = 1) -> list[Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            stripped = rest.lstrip()
            if not stripped:
                break
            bad = pos + (len(rest) - len(stripped))
            raise ParseError(f"unexpected character {stripped[0]!r}", line, col0 + bad,
                             ("number", "identifier", "operator"))
        if m.end() == pos:
            break
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(Tok(kind, m.group(kind), col0 + start))
        pos = m.end()
    toks.append(Tok("end", "", col0 + len(text.rstrip())))
    return toks


class _Parser:
    def __init__(self, text: str, chart, line: int, col0: int):
        self.chart = tuple(chart)
        self.line = line
        self.toks = tokenize(text, line, col0)
        self.i = 0

    def peek(self) -> Tok:
        return self.toks[self.i]

    def take(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok: Tok, expected=()):
        raise ParseError(msg, self.line, tok.col, tuple(expected))

    def parse(self):
        v = self.expr()
        t = self.peek()
        if t.kind != "end":
            self.fail(f"unexpected {t.text!r}", t, ("+", "-", "*", "end of expression"))
        return v

    def expr(self):
        t = self.peek()
        neg = False
        if t.kind == "op" and t.text in "+-":
            self.take()
            neg = t.text == "-"
        v = self.term()
        if neg:
            v = _neg(v)
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.take()
                rhs = self.term()
                v = self._combine(v, rhs, t)
            else:
                return v

    def term(self):
        v = self.power()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text == "*":
                self.take()
                rhs = self.power()
                v = self._mul(v, rhs, t)
            elif t.kind == "op" and t.text == "/":
                self.take()
                nt = self.peek()
                if nt.kind != "num":
                    self.fail("division only by an integer literal", nt, ("integer",))
                self.take()
                d = int(nt.text)
                if d == 0:
                    self.fail("division by zero", nt)
                v = _scale(v, Fraction(1, d))
            else:
                return v

    def power(self):
        v = self.atom()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text == "^":
                self.take()
                nt = self.peek()
                if nt.kind == "num":
                    self.take()
                    if isinstance(v, PolyTensor):
                        self.fail("cannot raise a tensor to a power", nt)
                    v = v ** int(nt.text)
                else:
                    rhs = self.atom()
                    if not isinstance(v, PolyTensor) or not isinstance(rhs, PolyTensor):
                        self.fail("wedge needs tensors on both sides", t, ("integer exponent",))
                    if v.kind != rhs.kind:
                        self.fail("cannot wedge a form with a multivector", t)
                    v = wedge(v, rhs)
            else:
                return v

    def atom(self):
        t = self.peek()
        if t.kind == "num":
            self.take()
            return Fraction(int(t.text))
        if t.kind == "partial":
            self.take()
            name = t.text[3:]
            if name not in self.chart:
                self.fail(f"unknown coordinate {name!r} in {t.text}", t, self.chart)
            return PolyTensor.partial(self.chart, name)
        if t.kind == "ident":
            self.take()
            if t.text in self.chart:
                return Poly.var(self.chart, t.text)
            if t.text.startswith("d") and t.text[1:] in self.chart:
                return PolyTensor.d(self.chart, t.text[1:])
            self.fail(f"unknown identifier {t.text!r}", t, self.chart)
        if t.kind == "op" and t.text == "(":
            self.take()
            v = self.expr()
            c = self.peek()
            if not (c.kind == "op" and c.text == ")"):
                self.fail("missing closing parenthesis", c, (")",))
            self.take()
            return v
        self.fail(f"unexpected {t.text or 'end of expression'!r}", t,
                  ("number", "coordinate", "d/d<coordinate>", "d<coordinate>", "("))

    def _lift(self, v, like: PolyTensor) -> PolyTensor:
        if isinstance(v, PolyTensor):
            return v
        p = v if isinstance(v, Poly) else Poly.const(self.chart, v)
        return PolyTensor.scalar(p, like.kind)

    def _combine(self, a, b, tok):
        if isinstance(a, PolyTensor) or isinstance(b, PolyTensor):
            ta = self._lift(a, b if isinstance(b, PolyTensor) else a)
            tb = self._lift(b, ta)
            if ta.kind != tb.kind or ta.degree != tb.degree:
                self.fail("cannot add tensors of different kind or degree", tok)
            return ta + tb if tok.text == "+" else ta - tb
        return a + b if tok.text == "+" else a - b

    def _mul(self, a, b, tok):
        if isinstance(a, PolyTensor) and isinstance(b, PolyTensor):
            self.fail("use ^ to multiply tensors", tok, ("^",))
        if isinstance(a, PolyTensor):
            return a * b
        if isinstance(b, PolyTensor):
            return b * a
        return a * b


def _neg(v):
    return -v


def _scale(v, c: Fraction):
    return v * c


def parse_expression(text: str, chart, line: int = 1, col: int = 1):
    """Parse into a ``Fraction``, ``Poly`` or ``PolyTensor``."""
    return _Parser(text, chart, line, col).parse()


def parse_poly(text: str, chart, line: int = 1, col: int = 1) -> Poly:
    v = parse_expression(text, chart, line, col)
    if isinstance(v, PolyTensor):
        if v.degree == 0:
            return v.scalar_part()
        raise ParseError("expected a polynomial, found a tensor", line, col, ("polynomial",))
    if isinstance(v, Poly):
        return v
    return Poly.const(chart, v)


def parse_tensor(text: str, chart, kind: str | None = None, line: int = 1, col: int = 1) -> PolyTensor:
    v = parse_expression(text, chart, line, col)
    if not isinstance(v, PolyTensor):
        p = v if isinstance(v, Poly) else Poly.const(chart, v)
        v = PolyTensor.scalar(p, kind or MULTIVECTOR)
    if kind is not None and v.kind != kind and not (v.degree == 0):
        raise ParseError(f"expected a {kind}, found a {v.kind}", line, col, (kind,))
    if kind is not None and v.degree == 0 and v.kind != kind:
        v = PolyTensor(v.chart, kind, 0, v.comps)
    return v


__all__ = ["ParseError", "parse_expression", "parse_poly", "parse_tensor", "tokenize", "FORM", "MULTIVECTOR"]
