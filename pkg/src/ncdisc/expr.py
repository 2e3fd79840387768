"""Tokenizer and recursive-descent parser for the polynomial expression DSL.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' nat)?
    base   := scalar | ident | '(' expr ')'
    scalar := integer | integer '/' integer | 'zeta(' integer ',' integer ')'

A leading unary minus is accepted on terms.  Juxtaposition is rejected.
The parser is ring-agnostic: it calls back into a :class:`Builder`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Generic, TypeVar

from .scalar import Cyclo, zeta

T = TypeVar("T")


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}" + (f" in {text!r}" if text else ""))


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<zeta>zeta\s*\(\s*(?P<zm>-?\d+)\s*,\s*(?P<zk>-?\d+)\s*\))"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^/()]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    value: object
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        if mt.group("num") is not None:
            out.append(Token("num", int(mt.group("num")), mt.start("num")))
        elif mt.group("zeta") is not None:
            m, k = int(mt.group("zm")), int(mt.group("zk"))
            if m < 1:
                raise ParseError("zeta order must be positive", text, mt.start("zeta"))
            out.append(Token("scalar", zeta(m, k), mt.start("zeta")))
        elif mt.group("ident") is not None:
            out.append(Token("ident", mt.group("ident"), mt.start("ident")))
        else:
            out.append(Token("op", mt.group("op"), mt.start("op")))
        pos = mt.end()
    return out


class Builder(Generic[T]):
    """Callbacks used by :func:`parse`; subclasses supply the ring."""

    def scalar(self, c: Cyclo) -> T:
        raise NotImplementedError

    def ident(self, name: str, pos: int) -> T:
        raise NotImplementedError

    def add(self, a: T, b: T) -> T:
        return a + b

    def sub(self, a: T, b: T) -> T:
        return a - b

    def mul(self, a: T, b: T) -> T:
        return a * b

    def neg(self, a: T) -> T:
        return -a

    def power(self, a: T, k: int) -> T:
        return a**k


def parse(text: str, builder: Builder[T]) -> T:
    toks = tokenize(text)
    if not toks:
        raise ParseError("empty expression", text, 0)
    i = 0

    def peek(k=0):
        return toks[i + k] if i + k < len(toks) else None

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def expect_op(op):
        t = peek()
        if t is None or t.kind != "op" or t.value != op:
            raise ParseError(f"expected {op!r}", text, t.pos if t else len(text))
        take()

    def expr():
        t = peek()
        if t is not None and t.kind == "op" and t.value in "+-":
            take()
            val = term()
            if t.value == "-":
                val = builder.neg(val)
        else:
            val = term()
        while True:
            t = peek()
            if t is None or t.kind != "op" or t.value not in "+-":
                return val
            take()
            rhs = term()
            val = builder.add(val, rhs) if t.value == "+" else builder.sub(val, rhs)

    def term():
        val = factor()
        while True:
            t = peek()
            if t is None:
                return val
            if t.kind == "op" and t.value == "*":
                take()
                val = builder.mul(val, factor())
                continue
            if t.kind != "op" or t.value == "(":
                raise ParseError("juxtaposition is not multiplication; use '*'", text, t.pos)
            return val

    def factor():
        val = base()
        t = peek()
        if t is not None and t.kind == "op" and t.value == "^":
            take()
            e = peek()
            if e is not None and e.kind == "op" and e.value == "-":
                raise ParseError("negative exponent", text, e.pos)
            if e is None or e.kind != "num":
                raise ParseError("expected a natural-number exponent", text, e.pos if e else len(text))
            take()
            val = builder.power(val, e.value)
        return val

    def base():
        t = peek()
        if t is None:
            raise ParseError("unexpected end of input", text, len(text))
        if t.kind == "num":
            take()
            nxt = peek()
            if nxt is not None and nxt.kind == "op" and nxt.value == "/":
                take()
                d = peek()
                if d is None or d.kind != "num":
                    raise ParseError("expected denominator", text, d.pos if d else len(text))
                take()
                if d.value == 0:
                    raise ParseError("zero denominator", text, d.pos)
                return builder.scalar(Cyclo.rational(Fraction(t.value, d.value)))
            return builder.scalar(Cyclo.rational(t.value))
        if t.kind == "scalar":
            take()
            return builder.scalar(t.value)
        if t.kind == "ident":
            take()
            return builder.ident(t.value, t.pos)
        if t.kind == "op" and t.value == "(":
            take()
            val = expr()
            expect_op(")")
            return val
        raise ParseError(f"unexpected token {t.value!r}", text, t.pos)

    result = expr()
    if i != len(toks):
        raise ParseError(f"unexpected token {toks[i].value!r}", text, toks[i].pos)
    return result


class FnBuilder(Builder[T]):
    def __init__(self, scalar: Callable[[Cyclo], T], ident: Callable[[str, int], T]):
        self._scalar = scalar
        self._ident = ident

    def scalar(self, c):
        return self._scalar(c)

    def ident(self, name, pos):
        return self._ident(name, pos)
