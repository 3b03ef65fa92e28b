"""Recursive-descent parser for the textual number and series syntax.

Grammar (whitespace ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := ['-'] atom ['^' ['-'] INT]
    atom   := INT ['/' INT] | 'z' INT | 't' | 'O(' expr ')' | '(' expr ')'

``zN`` is the primitive N-th root of unity exp(2*pi*i/N); ``O(t^N)`` marks
a series as known only below t^N.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .cyclo import ONE, root_of_unity
from .errors import ParseError
from .series import TruncatedSeries

_TOKEN = re.compile(r"\s*(?:(\d+)|(z\d+)|(t)|(O)|([-+*/^()]))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at {pos} in {text!r}")
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, allow_t: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_t = allow_t

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'a token'} in {self.text!r}, got {tok!r}")
        self.i += 1
        return tok

    def expr(self) -> TruncatedSeries:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> TruncatedSeries:
        acc = self.factor()
        while self.peek() == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> TruncatedSeries:
        if self.peek() == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            e = self._int()
            if neg:
                if base.exact and set(base.terms) <= {0} and base.terms:
                    return TruncatedSeries.constant(base.coefficient(0) ** (-e))
                raise ParseError(f"negative power of a non-constant in {self.text!r}")
            return base ** e
        return base

    def _int(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise ParseError(f"expected an integer in {self.text!r}, got {tok!r}")
        return int(tok)

    def atom(self) -> TruncatedSeries:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input in {self.text!r}")
        if tok.isdigit():
            num = self._int()
            if self.peek() == "/":
                self.take()
                den = self._int()
                if den == 0:
                    raise ParseError(f"zero denominator in {self.text!r}")
                return TruncatedSeries.constant(Fraction(num, den))
            return TruncatedSeries.constant(num)
        if tok.startswith("z"):
            self.take()
            n = int(tok[1:])
            if n < 1:
                raise ParseError(f"invalid root of unity {tok!r}")
            return TruncatedSeries.constant(root_of_unity(n, 1))
        if tok == "t":
            if not self.allow_t:
                raise ParseError(f"series variable t not allowed in a number: {self.text!r}")
            self.take()
            return TruncatedSeries({1: ONE})
        if tok == "O":
            if not self.allow_t:
                raise ParseError(f"O-term not allowed in a number: {self.text!r}")
            self.take()
            self.take("(")
            inner = self.expr()
            self.take(")")
            items = inner.items()
            if not inner.exact or len(items) != 1 or items[0][1] != ONE:
                raise ParseError(f"O(...) must contain a monomial t^N in {self.text!r}")
            return TruncatedSeries.zero(items[0][0])
        if tok == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {tok!r} in {self.text!r}")


def parse_expression(text: str, allow_t: bool = True) -> TruncatedSeries:
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    p = _Parser(text, allow_t)
    if not p.toks:
        raise ParseError("empty expression")
    try:
        out = p.expr()
    except ZeroDivisionError as exc:
        raise ParseError(f"division by zero in {text!r}") from exc
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r} in {text!r}")
    return out
