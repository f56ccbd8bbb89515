"""Recursive-descent parser for polynomial text.

Grammar::

    expr     := ['-'] term (('+' | '-') ['-'] term)*
    term     := factor ('*' factor)*
    factor   := base ('^' uint)?
    base     := rational | ident | '(' expr ')'
    rational := int ('/' uint)?

Multiplication must be written explicitly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .errors import ParseError
from .poly import Polynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch.isspace():
                pos = m.end()
                continue
            if ch not in "+-*/^().":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok[2], self.text)

    def expect_op(self, ch):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != ch:
            raise self.error(f"expected {ch!r}")
        self.advance()

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def signed_term(self) -> Polynomial:
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.advance()
            return -self.term()
        return self.term()

    def expr(self) -> Polynomial:
        p = self.signed_term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.advance()
                t = self.signed_term()
                p = p + t if tok[1] == "+" else p - t
            else:
                return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.advance()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        base = self.base()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.advance()
            etok = self.peek()
            if etok[0] == "op" and etok[1] == "-":
                raise self.error("negative exponent", etok)
            if etok[0] == "op" and etok[1] == "(":
                raise self.error("exponent must be a non-negative integer literal", etok)
            if etok[0] != "int":
                raise self.error("expected non-negative integer exponent", etok)
            self.advance()
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] in "/.":
                raise self.error("non-integer exponent", nxt)
            return base ** int(etok[1])
        return base

    def base(self) -> Polynomial:
        tok = self.peek()
        if tok[0] == "int":
            self.advance()
            value = Fraction(int(tok[1]))
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                self.advance()
                dtok = self.peek()
                if dtok[0] != "int":
                    raise self.error("expected unsigned integer denominator", dtok)
                self.advance()
                d = int(dtok[1])
                if d == 0:
                    raise self.error("zero denominator", dtok)
                value = value / d
            return Polynomial.constant(self.variables, value)
        if tok[0] == "ident":
            self.advance()
            if tok[1] not in self.variables:
                raise self.error(f"unknown identifier {tok[1]!r}", tok)
            return Polynomial.variable(self.variables, tok[1])
        if tok[0] == "op" and tok[1] == "(":
            self.advance()
            p = self.expr()
            self.expect_op(")")
            return p
        if tok[0] == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected token {tok[1]!r}", tok)


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` into a normalized polynomial over ``variables``.

    Raises :class:`ParseError` (with ``.pos``) on syntax errors, unknown
    identifiers and negative or non-integer exponents.
    """
    if len(set(variables)) != len(tuple(variables)):
        raise ParseError(f"duplicate variable names in {list(variables)}")
    return _Parser(text, variables).parse()
