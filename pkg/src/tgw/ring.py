"""The TGW datum attached to a multiquiver: shifts, the elements t_v, difference
operators and the consistency equations."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .graph import IncidenceMatrix, Multiquiver, incidence_matrix
from .poly import Poly, edge_of, product, u, u_var
from .scalar import normalize


def _offsets(m: IncidenceMatrix, d: dict) -> dict:
    """Variable offsets of ``sigma_d``: ``u_e -> u_e - (gamma d)_e``."""
    return {u_var(e): -x for e, x in m.apply(d).items()}


def _check_vars(p: Poly, m: IncidenceMatrix):
    known = set(m.rows)
    for var in p.variables():
        try:
            e = edge_of(var)
        except KeyError:
            raise KeyError(f"unknown variable {var!r}") from None
        if e not in known:
            raise KeyError(f"unknown variable {var!r}")


def shift_apply(d: dict, p: Poly, m) -> Poly:
    """``sigma_d(p)`` where ``d`` is a sparse vector over vertices."""
    if isinstance(m, Multiquiver):
        m = incidence_matrix(m)
    _check_vars(p, m)
    for v in d:
        if v not in m.cols:
            raise KeyError(f"unknown vertex {v!r}")
    return p.shift(_offsets(m, d))


def edge_factor(e, v: str) -> Poly:
    """``u_{ev}``: rising product at a target end, shifted falling product at a source end."""
    x = u(e.id)
    if e.target is not None and e.target.vertex == v:
        return product(x + j for j in range(e.target.mult))
    if e.source is not None and e.source.vertex == v:
        return product(x - j for j in range(1, e.source.mult + 1))
    return Poly.const(1)


def build_t(g: Multiquiver, v: str) -> Poly:
    if v not in g.vertices:
        raise KeyError(f"unknown vertex {v!r}")
    return product(edge_factor(e, v) for e in g.incident(v))


@dataclass(frozen=True)
class TGWDatum:
    """``(R_E, sigma, t)`` with ``mu`` identically 1 off the diagonal."""

    graph: Multiquiver
    matrix: IncidenceMatrix
    t: dict

    @classmethod
    def of(cls, g: Multiquiver) -> "TGWDatum":
        return cls(g, incidence_matrix(g), {v: build_t(g, v) for v in g.vertices})

    @property
    def variables(self) -> list:
        return [u_var(e) for e in self.matrix.rows]

    def mu(self, i, j) -> int:
        return 1

    def sigma(self, d: dict, p: Poly) -> Poly:
        return p.shift(_offsets(self.matrix, d))

    def sigma_v(self, v: str, p: Poly, power: int = 1) -> Poly:
        return self.sigma({v: power}, p)


# ----------------------------------------------------------- consistency
@dataclass(frozen=True)
class ConsistencyReport:
    passed: bool
    pair_residuals: dict  # (i, j) -> Poly
    triple_residuals: dict  # (i, j, k) -> Poly

    def failures(self) -> list:
        out = [(k, r) for k, r in self.pair_residuals.items() if r]
        out += [(k, r) for k, r in self.triple_residuals.items() if r]
        return out

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "pairs_checked": len(self.pair_residuals),
            "triples_checked": len(self.triple_residuals),
            "nonzero_residuals": [{"indices": list(k), "residual": str(r)} for k, r in self.failures()],
        }


def _factors(datum: TGWDatum, v: str) -> list:
    """``t_v`` as a list of per-edge factors (kept unexpanded)."""
    return [edge_factor(e, v) for e in datum.graph.incident(v)]


def _shift_all(datum, d, factors):
    return [datum.sigma(d, f) for f in factors]


def _same_product(lhs: list, rhs: list) -> Poly:
    """Residual ``prod(lhs) - prod(rhs)``.

    Factor lists are compared as multisets first; only when they differ is
    the full product expanded.  Both routes are exact.
    """
    rest = list(rhs)
    leftover = []
    for f in lhs:
        for k, r in enumerate(rest):
            if r == f:
                del rest[k]
                break
        else:
            leftover.append(f)
    if not leftover and not rest:
        return Poly()
    return product(leftover) - product(rest)


def consistency_check(g: Multiquiver, expand: bool = False) -> ConsistencyReport:
    """Check both consistency equations for every pair and ordered triple.

    With ``expand=True`` every residual is computed by expanding both sides
    completely instead of cancelling matching factors first.
    """
    datum = TGWDatum.of(g)
    verts = g.vertices
    fac = {v: _factors(datum, v) for v in verts}
    pairs, triples = {}, {}
    for i, j in permutations(verts, 2):
        if (j, i) in pairs:
            continue
        lhs = _shift_all(datum, {i: 1, j: 1}, fac[i] + fac[j])
        rhs = _shift_all(datum, {i: 1}, fac[i]) + _shift_all(datum, {j: 1}, fac[j])
        pairs[(i, j)] = _expanded(lhs, rhs) if expand else _same_product(lhs, rhs)
    for i, j, k in permutations(verts, 3):
        if (k, j, i) in triples:
            continue
        lhs = _shift_all(datum, {i: 1, k: 1}, fac[j]) + fac[j]
        rhs = _shift_all(datum, {i: 1}, fac[j]) + _shift_all(datum, {k: 1}, fac[j])
        triples[(i, j, k)] = _expanded(lhs, rhs) if expand else _same_product(lhs, rhs)
    ok = not any(pairs.values()) and not any(triples.values())
    return ConsistencyReport(ok, pairs, triples)


def _expanded(lhs, rhs) -> Poly:
    return product(lhs) - product(rhs)


# ------------------------------------------------------- difference operators
def difference_power(v: str, k: int, p: Poly, m) -> Poly:
    """``(sigma_v - Id)^k (p)``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if isinstance(m, Multiquiver):
        m = incidence_matrix(m)
    if v not in m.cols:
        raise KeyError(f"unknown vertex {v!r}")
    offs = _offsets(m, {v: 1})
    for _ in range(k):
        if not p:
            break
        p = p.shift(offs) - p
    return p


def euler_operator(edges) -> Poly:
    """``sum_e (u_e - 1)``."""
    return sum((u(e) - 1 for e in edges), Poly())


def euler_reduce(p: Poly, n: int, lam) -> Poly:
    """Reduce ``p`` modulo ``sum_{i<=n+1} (u_i - 1) - lam`` by eliminating ``u_{n+1}``."""
    allowed = {u_var(str(i)) for i in range(1, n + 2)}
    stray = p.variables() - allowed
    if stray:
        raise ValueError(f"variables {sorted(stray)} are outside u_1..u_{n + 1}")
    last = u_var(str(n + 1))
    if last not in p.variables():
        return p
    image = Poly.const(normalize(lam) + n + 1) - sum((u(str(i)) for i in range(1, n + 1)), Poly())
    return p.substitute({last: image})
