"""Normal-form arithmetic in the Weyl algebra over a set of edges.

Conventions: ``u_e = y_e x_e`` and ``y_e x_e - x_e y_e = 1``, so
``x_e q(u_e) = q(u_e - 1) x_e`` and ``y_e q(u_e) = q(u_e + 1) y_e``.  An
element is stored as ``{degree: p}`` meaning ``sum p(u) z^degree`` with the
polynomial on the left, where ``z^g`` is the product over edges of
``x_e^{g_e}`` (``g_e >= 0``) or ``y_e^{-g_e}``.
"""
from __future__ import annotations

from functools import lru_cache

from .errors import CrossCheckError, ParseError
from .parsing import evaluate, parse, split_ident
from .poly import Poly, as_factor, edge_of, product, u_var
from .util import natural_key, vec_add
from .words import FreeSum


def _deg_key(d: dict) -> tuple:
    return tuple(sorted(((e, x) for e, x in d.items() if x), key=lambda p: natural_key(p[0])))


class WeylElement:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        out = {}
        for g, p in (terms or {}).items():
            p = Poly.coerce(p)
            if p:
                key = _deg_key(dict(g) if isinstance(g, tuple) else g)
                out[key] = out[key] + p if key in out else p
        self.terms = {g: p for g, p in out.items() if p}

    @classmethod
    def _raw(cls, terms):
        w = object.__new__(cls)
        w.terms = terms
        return w

    # constructors
    @classmethod
    def scalar(cls, c) -> "WeylElement":
        return cls({(): Poly.const(c)})

    @classmethod
    def poly(cls, p: Poly) -> "WeylElement":
        return cls({(): p})

    @classmethod
    def z(cls, degree: dict, coeff=None) -> "WeylElement":
        return cls({_deg_key(degree): Poly.const(1) if coeff is None else Poly.coerce(coeff)})

    @classmethod
    def x(cls, e: str, k: int = 1) -> "WeylElement":
        return cls.z({e: k})

    @classmethod
    def y(cls, e: str, k: int = 1) -> "WeylElement":
        return cls.z({e: -k})

    @classmethod
    def u(cls, e: str) -> "WeylElement":
        return cls.poly(Poly.var(u_var(e)))

    # structure
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def support(self) -> set:
        return set(self.terms)

    def coefficient(self, degree) -> Poly:
        key = degree if isinstance(degree, tuple) else _deg_key(degree)
        return self.terms.get(key, Poly())

    def is_homogeneous(self) -> bool:
        return len(self.terms) <= 1

    def edges(self) -> set:
        out = set()
        for g, p in self.terms.items():
            out.update(e for e, _ in g)
            out.update(edge_of(v) for v in p.variables())
        return out

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for g, p in other.terms.items():
            s = out[g] + p if g in out else p
            if s:
                out[g] = s
            else:
                out.pop(g, None)
        return WeylElement._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement._raw({g: -p for g, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        return weyl_mul(self, _coerce(other))

    def __rmul__(self, other):
        return weyl_mul(_coerce(other), self)

    def __pow__(self, k: int):
        out = WeylElement.scalar(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def star(self) -> "WeylElement":
        return weyl_star(self)

    def __str__(self):
        return format_weyl(self)

    def __repr__(self):
        return f"WeylElement({format_weyl(self)!r})"

    def to_json(self) -> list:
        return [
            {"degree": {e: x for e, x in g}, "coefficient": str(p), "factored": p.factored()}
            for g, p in _sorted_terms(self)
        ]


def _coerce(x) -> WeylElement:
    if isinstance(x, WeylElement):
        return x
    if isinstance(x, Poly):
        return WeylElement.poly(x)
    return WeylElement.scalar(x)


# ---------------------------------------------------------------- P_mn
def _pmn_closed(m: int, n: int, var: str = "u") -> Poly:
    x = Poly.var(var)
    if m * n >= 0:
        return Poly.const(1)
    if m > 0:
        return product(x - m + j for j in range(min(m, -n)))
    return product(x + (-m) - 1 - j for j in range(min(-m, n)))


_PMN_RANGE = 8
_pmn_validated = False


def validate_pmn(bound: int = _PMN_RANGE) -> None:
    """Compare the closed forms with the word-rewriting oracle for ``|m|, |n| <= bound``."""
    for m in range(-bound, bound + 1):
        for n in range(-bound, bound + 1):
            oracle = _oracle_pmn(m, n)
            if oracle != _pmn_closed(m, n):
                raise CrossCheckError(f"P_({m},{n}) closed form {_pmn_closed(m, n)} != oracle {oracle}")


def _oracle_pmn(m: int, n: int) -> Poly:
    word = _z_letters(m) + _z_letters(n)
    got = normal_order_word(word)
    expected_deg = _deg_key({"": m + n})
    if set(got.terms) - {expected_deg}:
        raise CrossCheckError(f"z^({m}) z^({n}) is not homogeneous of degree {m + n}")
    return got.coefficient(expected_deg)


def _z_letters(k: int, e: str = "") -> tuple:
    return ((("x", e),) * k) if k >= 0 else ((("y", e),) * (-k))


@lru_cache(maxsize=None)
def pmn(m: int, n: int, var: str = "u") -> Poly:
    """``P_mn`` with ``z^(m) z^(n) = P_mn(u) z^(m+n)`` in one variable."""
    global _pmn_validated
    if not _pmn_validated:
        validate_pmn()
        _pmn_validated = True
    return _pmn_closed(m, n, var)


# -------------------------------------------------------- multiplication
def weyl_mul(a: WeylElement, b: WeylElement) -> WeylElement:
    out: dict = {}
    for g, p in a.terms.items():
        gd = dict(g)
        offs = {u_var(e): -x for e, x in g}
        for h, q in b.terms.items():
            hd = dict(h)
            coef = p * q.shift(offs)
            for e in set(gd) & set(hd):
                coef = coef * pmn(gd[e], hd[e], u_var(e))
                if not coef:
                    break
            if not coef:
                continue
            key = _deg_key(vec_add(gd, hd))
            s = out[key] + coef if key in out else coef
            if s:
                out[key] = s
            else:
                del out[key]
    return WeylElement._raw(out)


def weyl_star(a: WeylElement) -> WeylElement:
    """Anti-involution swapping ``x_e`` and ``y_e`` and conjugating scalars.

    ``(p z^g)^* = z^{-g} conj(p) = conj(p)(u + g) z^{-g}``.
    """
    out = {}
    for g, p in a.terms.items():
        key = _deg_key({e: -x for e, x in g})
        out[key] = p.conjugate().shift({u_var(e): x for e, x in g})
    return WeylElement._raw(out)


def commutator(a: WeylElement, b: WeylElement) -> WeylElement:
    return a * b - b * a


def euler(edges) -> WeylElement:
    """``sum_e x_e y_e = sum_e (u_e - 1)``."""
    out = WeylElement()
    for e in edges:
        out = out + WeylElement.x(e) * WeylElement.y(e)
    return out


# ------------------------------------------------------------ word oracle
@lru_cache(maxsize=None)
def _pbw(word: str) -> tuple:
    """Order a word in ``x``/``y`` into ``sum c * y^a x^b`` using only ``xy -> yx - 1``.

    Returns a tuple of ``((a, b), c)``.
    """
    k = word.find("xy")
    if k < 0:
        a = len(word) - len(word.lstrip("y"))
        return (((a, len(word) - a), 1),)
    out: dict = {}
    for (ab, c) in _pbw(word[:k] + "yx" + word[k + 2 :]):
        out[ab] = out.get(ab, 0) + c
    for (ab, c) in _pbw(word[:k] + word[k + 2 :]):
        out[ab] = out.get(ab, 0) - c
    return tuple((ab, c) for ab, c in sorted(out.items()) if c)


@lru_cache(maxsize=None)
def _yx_power(a: int, var: str) -> Poly:
    """``y^a x^a`` as a polynomial in ``u = yx``: ``y Q(u) x = Q(u+1) y x = Q(u+1) u``."""
    if a == 0:
        return Poly.const(1)
    return _yx_power(a - 1, var).shift({var: 1}) * Poly.var(var)


def _ordered_to_normal(a: int, b: int, var: str):
    """``y^a x^b`` as ``(poly, degree)``."""
    if a <= b:
        return _yx_power(a, var), b - a
    # y^(a-b) Q(u) = Q(u + a - b) y^(a-b)
    return _yx_power(b, var).shift({var: a - b}), b - a


def normal_order_word(word) -> WeylElement:
    """Brute-force normal form of a word over ``x_e``, ``y_e`` and polynomials.

    Polynomial tokens are expanded with ``u_e -> y_e x_e``; letters of
    different edges commute; each edge's letters are then ordered with the
    single rewrite ``x y -> y x - 1``.  Accepts a tuple of tokens or a
    :class:`FreeSum`.
    """
    if isinstance(word, FreeSum):
        total = WeylElement()
        for w, c in word:
            total = total + normal_order_word(w) * c
        return total
    expanded = [((), 1)]
    for tok in word:
        if isinstance(tok, Poly):
            nxt = []
            for mono, c in tok.terms.items():
                letters = []
                for var, k in mono:
                    e = edge_of(var)
                    letters.extend([("y", e), ("x", e)] * k)
                nxt.extend((pre + tuple(letters), pc * c) for pre, pc in expanded)
            expanded = nxt
        else:
            kind, e = tok
            if kind not in ("x", "y"):
                raise ParseError(f"unexpected token {tok!r} in a Weyl word")
            expanded = [(pre + (tok,), pc) for pre, pc in expanded]
    total: dict = {}
    for letters, c in expanded:
        per_edge: dict = {}
        for kind, e in letters:
            per_edge[e] = per_edge.get(e, "") + kind
        terms = [((), Poly.const(c))]
        for e, w in per_edge.items():
            var = u_var(e)
            nxt = []
            for (a, b), k in _pbw(w):
                p, d = _ordered_to_normal(a, b, var)
                for deg, q in terms:
                    nxt.append((deg + ((e, d),) if d else deg, q * p.scale(k)))
            terms = nxt
        for deg, q in terms:
            key = _deg_key(dict(deg))
            total[key] = total[key] + q if key in total else q
    return WeylElement({g: p for g, p in total.items() if p})


# ------------------------------------------------------------- printing
def _sorted_terms(w: WeylElement):
    def key(item):
        g = item[0]
        return tuple((natural_key(e), x) for e, x in g)

    return sorted(w.terms.items(), key=key)


def z_str(g) -> str:
    parts = []
    for e, x in g:
        letter = "x" if x > 0 else "y"
        name = f"{letter}_{e}" if e else letter
        parts.append(name if abs(x) == 1 else f"{name}^{abs(x)}")
    return " ".join(parts)


def format_weyl(w: WeylElement) -> str:
    if not w.terms:
        return "0"
    pieces = []
    for g, p in _sorted_terms(w):
        coef = p.factored()
        mono = z_str(g)
        if not mono:
            pieces.append(coef)
        elif coef == "1":
            pieces.append(mono)
        elif coef == "-1":
            pieces.append("-" + mono)
        else:
            pieces.append(f"{as_factor(coef)} * {mono}")
    out = pieces[0]
    for s in pieces[1:]:
        out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
    return out


def parse_weyl(text: str) -> WeylElement:
    """Evaluate Weyl syntax directly in the normal-form engine."""

    def atom(name):
        head, idx = split_ident(name)
        if head == "x":
            return WeylElement.x(idx)
        if head == "y":
            return WeylElement.y(idx)
        if head == "u":
            return WeylElement.u(idx)
        raise ParseError(f"unknown symbol {name!r} in Weyl expression")

    return evaluate(parse(text), atom, WeylElement.scalar(1), WeylElement.scalar)
