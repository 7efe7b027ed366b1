"""A small recursive-descent evaluator for the data expressions used in
experiment files.

Grammar (whitespace-insensitive, '^' binds right):

    expr   := term  (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('+' | '-') factor | power
    power  := atom ('^' factor)?
    atom   := NUMBER | 'x' | 't' | 'pi' | ('sin' | 'cos') '(' expr ')'
              | '(' expr ')'

The paper-style data are all short trig/polynomial formulas, so nothing
heavier than this is warranted. Parsing compiles to nested closures; a
Unicode minus is accepted as '-'.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

from .errors import ExpressionError

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)|([a-zA-Z_]+)|([-+*/^()]))")

_FUNCTIONS = {"sin": math.sin, "cos": math.cos}
_CONSTANTS = {"pi": math.pi}


def _tokenize(text: str):
    text = text.replace("−", "-")
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise ExpressionError(
                f"unexpected character {rest[0]!r} at column {pos + 1}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", float(num), m.start(1)))
        elif name is not None:
            tokens.append(("name", name, m.start(2)))
        else:
            tokens.append(("op", op, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


@dataclass(frozen=True)
class Expression:
    """A compiled expression over the variables x and t."""

    source: str
    fn: Callable[[float, float], float] = field(compare=False)
    uses_x: bool
    uses_t: bool

    def __call__(self, x: float = 0.0, t: float = 0.0) -> float:
        return self.fn(x, t)

    def of_x(self) -> Callable[[float], float]:
        return lambda x: self.fn(x, 0.0)

    def of_t(self) -> Callable[[float], float]:
        return lambda t: self.fn(0.0, t)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.uses_x = False
        self.uses_t = False

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, col = self.peek()
        if kind != "op" or val != op:
            raise ExpressionError(f"expected {op!r} at column {col + 1} "
                                  f"in {self.text!r}")
        self.advance()

    def parse(self):
        fn = self.expr()
        kind, val, col = self.peek()
        if kind != "end":
            raise ExpressionError(f"trailing input {val!r} at column "
                                  f"{col + 1} in {self.text!r}")
        return fn

    def expr(self):
        fn = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.term()
                lhs = fn
                if val == "+":
                    fn = lambda x, t, a=lhs, b=rhs: a(x, t) + b(x, t)
                else:
                    fn = lambda x, t, a=lhs, b=rhs: a(x, t) - b(x, t)
            else:
                return fn

    def term(self):
        fn = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                rhs = self.factor()
                lhs = fn
                if val == "*":
                    fn = lambda x, t, a=lhs, b=rhs: a(x, t) * b(x, t)
                else:
                    fn = lambda x, t, a=lhs, b=rhs: a(x, t) / b(x, t)
            else:
                return fn

    def factor(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.advance()
            inner = self.factor()
            if val == "-":
                return lambda x, t, a=inner: -a(x, t)
            return inner
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            exponent = self.factor()
            return lambda x, t, a=base, b=exponent: a(x, t) ** b(x, t)
        return base

    def atom(self):
        kind, val, col = self.advance()
        if kind == "num":
            return lambda x, t, c=val: c
        if kind == "name":
            if val == "x":
                self.uses_x = True
                return lambda x, t: x
            if val == "t":
                self.uses_t = True
                return lambda x, t: t
            if val in _CONSTANTS:
                return lambda x, t, c=_CONSTANTS[val]: c
            if val in _FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return lambda x, t, f=_FUNCTIONS[val], a=arg: f(a(x, t))
            raise ExpressionError(f"unknown name {val!r} at column {col + 1} "
                                  f"in {self.text!r}")
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ExpressionError(f"unexpected token {val!r} at column {col + 1} "
                              f"in {self.text!r}")


def parse_expression(text: str) -> Expression:
    """Compile an expression string; raises ExpressionError with a column
    position on malformed input."""
    if not text.strip():
        raise ExpressionError("empty expression")
    parser = _Parser(text)
    fn = parser.parse()
    return Expression(text.strip(), fn, parser.uses_x, parser.uses_t)
