"""Formal linear combinations of words (free algebra elements).

A word is a tuple of tokens.  Letter tokens are pairs such as ``('x', 'a')``
or ``('X', '1')``; a :class:`~tgw.poly.Poly` may also appear as a token and
stands for multiplication by that polynomial at that position.
"""
from __future__ import annotations

from .errors import ParseError
from .parsing import evaluate, parse, split_ident
from .poly import Poly
from .scalar import conj, normalize, scalar_str


class FreeSum:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        out = {}
        for w, c in (terms or {}).items():
            c = normalize(c)
            if c:
                out[tuple(w)] = c
        self.terms = out

    @classmethod
    def word(cls, *tokens) -> "FreeSum":
        return cls({tuple(tokens): 1})

    @classmethod
    def scalar(cls, c) -> "FreeSum":
        return cls({(): c})

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return FreeSum(out)

    __radd__ = __add__

    def __neg__(self):
        return FreeSum({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return FreeSum(out)

    def __rmul__(self, other):
        return _coerce(other) * self

    def __eq__(self, other):
        return isinstance(other, FreeSum) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __iter__(self):
        return iter(self.terms.items())

    def star(self, swap: dict) -> "FreeSum":
        """Reverse each word, swap letter kinds via ``swap``, conjugate scalars."""
        out = {}
        for w, c in self.terms.items():
            nw = []
            for tok in reversed(w):
                if isinstance(tok, Poly):
                    nw.append(tok.conjugate())
                else:
                    nw.append((swap.get(tok[0], tok[0]), tok[1]))
            out[tuple(nw)] = conj(c)
        return FreeSum(out)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms.items():
            body = " ".join(_tok_str(t) for t in w)
            if not body:
                parts.append(scalar_str(c))
            elif c == 1:
                parts.append(body)
            else:
                parts.append(f"{scalar_str(c)} {body}")
        return " + ".join(parts)


def _tok_str(t) -> str:
    if isinstance(t, Poly):
        return f"({t})"
    kind, idx = t
    return f"{kind}_{idx}" if idx else kind


def _coerce(x) -> FreeSum:
    if isinstance(x, FreeSum):
        return x
    if isinstance(x, Poly):
        return FreeSum.word(x) if not x.is_constant() else FreeSum.scalar(x.constant_value())
    return FreeSum.scalar(x)


def parse_words(text: str, letters: str) -> FreeSum:
    """Parse an expression whose non-commuting letters are drawn from ``letters``
    (e.g. ``"xy"`` or ``"XY"``); ``u``/``u_e`` become polynomial tokens."""

    def atom(name):
        head, idx = split_ident(name)
        if head == "u":
            return FreeSum.word(Poly.var(name))
        if head in letters and len(head) == 1:
            return FreeSum.word((head, idx))
        raise ParseError(f"unknown symbol {name!r}")

    return evaluate(parse(text), atom, FreeSum.scalar(1), FreeSum.scalar)
