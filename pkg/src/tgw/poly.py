"""Sparse multivariate polynomials over the Gaussian rationals.

A :class:`Poly` maps monomials to nonzero scalars.  A monomial is a tuple of
``(variable, exponent)`` pairs sorted by variable name, so two equal
polynomials always have identical term dictionaries.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, lcm

from .errors import DegreeBoundError, degree_cap
from .scalar import GaussianRational, conj, div, normalize, scalar_str
from .util import natural_key

Monomial = tuple  # tuple[tuple[str, int], ...]

ONE_MONO: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_deg(m: Monomial) -> int:
    return sum(e for _, e in m)


class Poly:
    __slots__ = ("terms", "_deg", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = normalize(c)
                if c:
                    clean[tuple(sorted(m))] = c
        self.terms = clean
        self._deg = None
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        # terms already canonical (sorted monomials, normalized nonzero coefficients)
        p = object.__new__(cls)
        p.terms = terms
        p._deg = None
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "Poly":
        c = normalize(c)
        return cls._raw({ONE_MONO: c} if c else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Poly":
        if power < 0:
            raise ValueError("negative exponent")
        return cls._raw({((name, power),) if power else ONE_MONO: 1})

    @classmethod
    def coerce(cls, x) -> "Poly":
        if isinstance(x, Poly):
            return x
        return cls.const(x)

    # ------------------------------------------------------------------ basics
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return self.terms.get(ONE_MONO, 0)

    def constant_term(self):
        return self.terms.get(ONE_MONO, 0)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def total_degree(self) -> int:
        if self._deg is None:
            self._deg = max((_mono_deg(m) for m in self.terms), default=-1)
        return self._deg

    def degree(self, var: str) -> int:
        return max((e for m in self.terms for v, e in m if v == var), default=0) if self.terms else -1

    # -------------------------------------------------------------- arithmetic
    def __add__(self, other):
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = normalize(s + c)
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: normalize(-c) for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def scale(self, c) -> "Poly":
        c = normalize(c)
        if not c:
            return Poly()
        if c == 1:
            return self
        return Poly._raw({m: normalize(a * c) for m, a in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        if not self.terms or not other.terms:
            return Poly()
        if other.is_constant():
            return self.scale(other.terms[ONE_MONO])
        if self.is_constant():
            return other.scale(self.terms[ONE_MONO])
        cap = degree_cap()
        if self.total_degree() + other.total_degree() > cap:
            raise DegreeBoundError(
                f"product degree {self.total_degree() + other.total_degree()} exceeds cap {cap}"
            )
        out: dict = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = get(m)
                out[m] = c1 * c2 if s is None else s + c1 * c2
        return Poly({m: c for m, c in out.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, Poly):
            c = c.constant_value()
        return Poly._raw({m: div(a, c) for m, a in self.terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        if k and self.total_degree() * k > degree_cap():
            raise DegreeBoundError(f"power degree {self.total_degree() * k} exceeds cap {degree_cap()}")
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        try:
            return self.terms == Poly.const(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # ------------------------------------------------------------ substitution
    def shift(self, offsets: dict) -> "Poly":
        """Substitute ``v -> v + offsets[v]`` simultaneously."""
        offsets = {v: c for v, c in offsets.items() if c}
        if not offsets or not self.terms:
            return self
        # one variable at a time: the shifts commute, and this avoids the
        # product blow-up of expanding every variable of a monomial at once
        terms = self.terms
        for v, o in offsets.items():
            out: dict = {}
            for m, c in terms.items():
                e, rest = 0, m
                for k, (w, x) in enumerate(m):
                    if w == v:
                        e, rest = x, m[:k] + m[k + 1:]
                        break
                if not e:
                    out[m] = out[m] + c if m in out else c
                    continue
                for j in range(e + 1):
                    pm = tuple(sorted(rest + ((v, j),))) if j else rest
                    pc = c * comb(e, j) * o ** (e - j)
                    out[pm] = out[pm] + pc if pm in out else pc
            terms = out
        return Poly(terms)

    def substitute(self, images: dict) -> "Poly":
        """Substitute each variable ``v`` in ``images`` by the polynomial ``images[v]``."""
        if not self.terms:
            return self
        images = {v: Poly.coerce(p) for v, p in images.items()}
        powers: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in powers:
                powers[key] = images[v] ** e
            return powers[key]

        total = Poly()
        for m, c in self.terms.items():
            kept = tuple((v, e) for v, e in m if v not in images)
            term = Poly._raw({kept: c})
            for v, e in m:
                if v in images:
                    term = term * power(v, e)
            total = total + term
        return total

    def evaluate(self, values: dict):
        """Substitute scalar values; returns a scalar if no variables remain, else a Poly."""
        out: dict = {}
        for m, c in self.terms.items():
            kept = []
            for v, e in m:
                if v in values:
                    c = c * normalize(values[v]) ** e
                else:
                    kept.append((v, e))
            k = tuple(kept)
            out[k] = out.get(k, 0) + c
        p = Poly(out)
        return p.constant_value() if p.is_constant() else p

    def map_coefficients(self, fn) -> "Poly":
        return Poly({m: fn(c) for m, c in self.terms.items()})

    def conjugate(self) -> "Poly":
        return self.map_coefficients(conj)

    # -------------------------------------------------------- univariate views
    def coefficients_in(self, var: str) -> dict:
        """``{k: c_k}`` with ``self = sum_k c_k * var**k`` and ``c_k`` free of ``var``."""
        split: dict = {}
        for m, c in self.terms.items():
            k = 0
            rest = []
            for v, e in m:
                if v == var:
                    k = e
                else:
                    rest.append((v, e))
            split.setdefault(k, {})[tuple(rest)] = c
        return {k: Poly._raw(d) for k, d in split.items()}

    def divide_linear(self, var: str, root) -> "Poly":
        """Exact quotient by ``(var - root)``; raises if the division leaves a remainder."""
        coeffs = self.coefficients_in(var)
        if not coeffs:
            return Poly()
        n = max(coeffs)
        if n == 0:
            raise ArithmeticError(f"{self} is not divisible by ({var} - {root})")
        b = {n - 1: coeffs[n]}
        for j in range(n - 1, 0, -1):
            b[j - 1] = coeffs.get(j, Poly()) + b[j] * root
        if coeffs.get(0, Poly()) + b[0] * root:
            raise ArithmeticError(f"{self} is not divisible by ({var} - {root})")
        out = Poly()
        for j, c in b.items():
            out = out + c * Poly.var(var, j)
        return out

    def vanishes_at(self, var: str, value) -> bool:
        acc: dict = {}
        for m, c in self.terms.items():
            k = 0
            rest = []
            for v, e in m:
                if v == var:
                    k = e
                else:
                    rest.append((v, e))
            r = tuple(rest)
            acc[r] = acc.get(r, 0) + c * value ** k
        return all(normalize(c) == 0 for c in acc.values())

    def _root_candidates(self, var: str) -> list:
        slices: dict = {}
        for m, c in self.terms.items():
            k = 0
            rest = []
            for v, e in m:
                if v == var:
                    k = e
                else:
                    rest.append((v, e))
            slices.setdefault(tuple(rest), {})[k] = c
        best = min(slices.values(), key=lambda d: (max(d) - min(d), len(d)))
        lo, hi = min(best), max(best)
        cands = {0} if lo > 0 else set()
        if lo == hi:
            return sorted(cands)
        coeffs = {k - lo: normalize(c) for k, c in best.items()}
        parts = [c.re if isinstance(c, GaussianRational) else c for c in coeffs.values()]
        if not any(parts):
            parts = [c.im if isinstance(c, GaussianRational) else 0 for c in coeffs.values()]
            coeffs = {k: (c.im if isinstance(c, GaussianRational) else 0) for k, c in coeffs.items()}
        else:
            coeffs = {k: (c.re if isinstance(c, GaussianRational) else c) for k, c in coeffs.items()}
        den = lcm(*(Fraction(c).denominator for c in coeffs.values()))
        ints = {k: int(Fraction(c) * den) for k, c in coeffs.items()}
        top = ints.get(hi - lo, 0)
        trailing = ints.get(0, 0)
        if top == 0 or trailing == 0:
            return sorted(cands)
        bound = 1 + max(abs(Fraction(c, top)) for k, c in ints.items() if k != hi - lo)
        bound = min(int(bound) + 1, abs(trailing), 100000)
        t = abs(trailing)
        for d in range(1, bound + 1):
            if t % d == 0:
                cands.add(d)
                cands.add(-d)
        return sorted(cands)

    def factor_linear(self):
        """Split off integer-rooted linear factors.

        Returns ``(scalar, factors, cofactor)`` where ``factors`` is a list of
        ``(var, root, multiplicity)`` and ``cofactor`` is monic in the printing
        order (or the constant 1).  The product of all parts equals ``self``.
        """
        if not self.terms:
            return 0, [], Poly.const(1)
        p = self
        factors = []
        for var in sorted(self.variables(), key=natural_key):
            for k in p._root_candidates(var):
                mult = 0
                while p.degree(var) > 0 and p.vanishes_at(var, k):
                    p = p.divide_linear(var, k)
                    mult += 1
                if mult:
                    factors.append((var, k, mult))
        if p.is_constant():
            return p.constant_value(), factors, Poly.const(1)
        lead = p.terms[p._ordered_monomials()[0]]
        return lead, factors, p.scale(div(1, lead))

    # ---------------------------------------------------------------- printing
    def _ordered_monomials(self) -> list:
        vs = sorted(self.variables(), key=natural_key)
        idx = {v: i for i, v in enumerate(vs)}

        def key(m):
            vec = [0] * len(vs)
            for v, e in m:
                vec[idx[v]] = e
            return vec

        return sorted(self.terms, key=key, reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in self._ordered_monomials():
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in sorted(m, key=lambda ve: natural_key(ve[0])))
            if not mono:
                parts.append(scalar_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{_coef_str(c)}*{mono}")
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def factored(self) -> str:
        """Render as scalar times linear factors, e.g. ``u_a(u_a+1)(u_b-1)u_c``."""
        if not self.terms:
            return "0"
        c, factors, cof = self.factor_linear()
        pieces = []
        for var, root, mult in sorted(factors, key=lambda f: (natural_key(f[0]), -f[1])):
            if root == 0:
                s = var
            else:
                shift = normalize(-root)
                s = f"({var}+{shift})" if shift > 0 else f"({var}-{-shift})"
            pieces.append(s if mult == 1 else f"{s}^{mult}")
        if not cof.is_constant():
            pieces.append(f"({cof})")
        if not pieces:
            return scalar_str(c)
        body = pieces[0]
        for prev, nxt in zip(pieces, pieces[1:]):
            body += nxt if prev.endswith(")") or nxt.startswith("(") else " " + nxt
        if c == 1:
            if len(pieces) == 1 and len(factors) == 1 and factors[0][2] == 1:
                return body.strip("()")  # lone linear factor
            return body
        if c == -1:
            return "-" + body
        lead = _coef_str(c)
        return lead + (body if body.startswith("(") else " " + body)


def as_factor(text: str) -> str:
    """Parenthesize a printed coefficient that is a bare sum, for use before ``*``."""
    depth = 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and k > 0:
            return f"({text})"
    return text


def _coef_str(c) -> str:
    c = normalize(c)
    if isinstance(c, GaussianRational) and c.re != 0:
        return f"({scalar_str(c)})"
    return scalar_str(c)


def product(polys) -> Poly:
    out = Poly.const(1)
    for p in polys:
        out = out * p
    return out


def linear_factor(var: str, root) -> Poly:
    """``var - root``."""
    return Poly.var(var) - root


def u_var(edge: str) -> str:
    """Name of the base-ring variable attached to an edge (``u`` for the anonymous edge)."""
    return f"u_{edge}" if edge else "u"


def edge_of(var: str) -> str:
    if var == "u":
        return ""
    if not var.startswith("u_"):
        raise KeyError(f"{var!r} is not an edge variable")
    return var[2:]


def u(edge: str) -> Poly:
    return Poly.var(u_var(edge))


def parse_poly(text: str) -> Poly:
    """Parse polynomial syntax: rationals, ``i``, ``u`` / ``u_<edge>``, ``+ - * / ^``."""
    from .errors import ParseError
    from .parsing import evaluate, parse, split_ident

    def atom(name):
        head, _ = split_ident(name)
        if head != "u":
            raise ParseError(f"unknown symbol {name!r} in polynomial")
        return Poly.var(name)

    return evaluate(parse(text), atom, Poly.const(1), Poly.const)
