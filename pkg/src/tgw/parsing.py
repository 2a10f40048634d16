"""Tokenizer and recursive-descent parser shared by the polynomial, Weyl and
TGW-word syntaxes.

All three languages use the same surface grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary | unary)*      # juxtaposition multiplies
    unary  := '-' unary | power
    power  := atom ('^' INTEGER)?
    atom   := NUMBER | IDENT | '(' expr ')'

They differ only in which identifiers are legal; :func:`evaluate` takes an
algebra adapter that turns atoms into values and knows how to combine them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError
from .scalar import I, inverse

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:/\d+)?)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class Num:
    value: object


@dataclass(frozen=True)
class Ident:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


def tokenize(text: str) -> list:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} at column {pos + 1}")
        if m.group("num"):
            raw = m.group("num")
            # a rational literal like 1/2 is lexed as one number
            out.append(("num", Fraction(raw)))
        elif m.group("ident"):
            out.append(("ident", m.group("ident")))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, found {val!r}")

    def expr(self):
        node = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                node = BinOp(val, node, self.term())
            else:
                return node

    def _starts_atom(self):
        kind, val = self.peek()
        return kind in ("num", "ident") or (kind == "op" and val == "(")

    def term(self):
        node = self.unary()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                node = BinOp(val, node, self.unary())
            elif self._starts_atom():
                node = BinOp("*", node, self.power())
            else:
                return node

    def unary(self):
        kind, val = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.unary())
        if kind == "op" and val == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k, v = self.take()
            if k != "num" or Fraction(v).denominator != 1:
                raise ParseError("exponent must be a non-negative integer")
            return Pow(base, int(v))
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Num(val)
        if kind == "ident":
            return Ident(val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind is None:
            raise ParseError("unexpected end of input")
        raise ParseError(f"unexpected token {val!r}")


def parse(text: str):
    if not text or not text.strip():
        raise ParseError("empty expression")
    p = _Parser(tokenize(text))
    node = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"unexpected trailing input starting at {p.peek()[1]!r}")
    return node


def split_ident(name: str):
    """``'u_a' -> ('u', 'a')``; bare ``'u' -> ('u', '')``."""
    head, sep, tail = name.partition("_")
    if sep and not tail:
        raise ParseError(f"identifier {name!r} has an empty index")
    return head, tail


def evaluate(node, atom, one, scalar):
    """Fold an AST.

    ``atom(name)`` returns the value for an identifier, ``scalar(c)`` embeds
    an exact scalar.  Values must support ``+``, ``-``, ``*`` and negation.
    """

    def go(n):
        if isinstance(n, Num):
            return scalar(n.value)
        if isinstance(n, Ident):
            if n.name == "i":
                return scalar(I)
            return atom(n.name)
        if isinstance(n, Neg):
            return -go(n.arg)
        if isinstance(n, Pow):
            b = go(n.base)
            out = one
            for _ in range(n.exp):
                out = out * b
            return out
        if n.op == "/":
            den = _constant(n.right)
            if den == 0:
                raise ParseError("division by zero")
            return go(n.left) * scalar(inverse(den))
        left, right = go(n.left), go(n.right)
        if n.op == "+":
            return left + right
        if n.op == "-":
            return left - right
        return left * right

    return go(node)


def _constant(n):
    """Evaluate a divisor, which must be a numeric constant."""
    if isinstance(n, Num):
        return n.value
    if isinstance(n, Ident) and n.name == "i":
        return I
    if isinstance(n, Neg):
        return -_constant(n.arg)
    if isinstance(n, Pow):
        return _constant(n.base) ** n.exp
    if isinstance(n, BinOp):
        a, b = _constant(n.left), _constant(n.right)
        if n.op == "+":
            return a + b
        if n.op == "-":
            return a - b
        if n.op == "*":
            return a * b
        return a * inverse(b)
    raise ParseError("only numeric constants may appear in a denominator")
