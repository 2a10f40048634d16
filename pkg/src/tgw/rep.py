"""The differential-operator representation phi, TGW word reduction, and the
faithfulness / local-surjectivity analyses."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import permutations

from .errors import CrossCheckError, CyclePresent, ParseError
from .graph import (
    Multiquiver,
    components,
    equilibrium_analysis,
    incidence_matrix,
    is_acyclic,
    kernel_basis,
    rational_nullity,
    shortest_cycle,
    spanning_forest,
)
from .poly import Poly, as_factor, edge_of, u_var
from .ring import TGWDatum
from .util import natural_key
from .weyl import WeylElement, pmn
from .words import FreeSum, parse_words

MAX_ORDER_VERTICES = 9
_STAR_SWAP = {"X": "Y", "Y": "X"}


# ------------------------------------------------------------------ words
def parse_tgw(text: str, g: Multiquiver | None = None) -> FreeSum:
    w = parse_words(text, "XY")
    if g is not None:
        _validate(g, w)
    return w


def _validate(g: Multiquiver, w: FreeSum):
    verts = set(g.vertices)
    edges = set(g.edge_ids)
    for word, _ in w:
        for tok in word:
            if isinstance(tok, Poly):
                for var in tok.variables():
                    if edge_of(var) not in edges:
                        raise ParseError(f"unknown edge variable {var!r}")
            elif tok[0] not in ("X", "Y"):
                raise ParseError(f"unexpected token {tok!r}")
            elif tok[1] not in verts:
                raise ParseError(f"unknown vertex {tok[1]!r}")


def _as_sum(w) -> FreeSum:
    if isinstance(w, FreeSum):
        return w
    if isinstance(w, str):
        return parse_tgw(w)
    return FreeSum.word(*w)


def tgw_star(w) -> FreeSum:
    return _as_sum(w).star(_STAR_SWAP)


def word_degree(word) -> dict:
    d: dict = {}
    for tok in word:
        if isinstance(tok, Poly):
            continue
        d[tok[1]] = d.get(tok[1], 0) + (1 if tok[0] == "X" else -1)
    return {v: x for v, x in d.items() if x}


# ------------------------------------------------------------------- phi
def phi_generator(g: Multiquiver, kind: str, v: str) -> WeylElement:
    col = g.gamma_column(v)
    if kind == "X":
        return WeylElement.z(col)
    return WeylElement.z({e: -x for e, x in col.items()})


def phi(g: Multiquiver, w) -> WeylElement:
    """Image under ``X_v -> z^{gamma(v)}``, ``Y_v -> z^{-gamma(v)}``, ``u_e -> u_e``."""
    w = _as_sum(w)
    _validate(g, w)
    cache: dict = {}
    total = WeylElement()
    for word, c in w:
        acc = WeylElement.scalar(c)
        for tok in word:
            if isinstance(tok, Poly):
                acc = acc * WeylElement.poly(tok)
            else:
                if tok not in cache:
                    cache[tok] = phi_generator(g, *tok)
                acc = acc * cache[tok]
        total = total + acc
    return total


def relation_instances(g: Multiquiver, extra_polys=()) -> list:
    """``(label, element)`` for every defining relation instance of the TGW construction.

    ``X_i r - sigma_i(r) X_i`` and ``Y_i r - sigma_i^{-1}(r) Y_i`` for ``r`` each
    ``u_e`` and each polynomial in ``extra_polys``; ``Y_i X_i - t_i``,
    ``X_i Y_i - sigma_i(t_i)``; ``X_i Y_j - Y_j X_i`` for ``i != j``.
    """
    datum = TGWDatum.of(g)
    rs = [Poly.var(u_var(e)) for e in g.edge_ids] + list(extra_polys)
    out = []
    for i in g.vertices:
        X, Y = FreeSum.word(("X", i)), FreeSum.word(("Y", i))
        for r in rs:
            R = FreeSum.word(r)
            out.append((f"X_{i} r", X * R - FreeSum.word(datum.sigma_v(i, r), ("X", i))))
            out.append((f"Y_{i} r", Y * R - FreeSum.word(datum.sigma_v(i, r, -1), ("Y", i))))
        out.append((f"Y_{i} X_{i}", Y * X - _poly_sum(datum.t[i])))
        out.append((f"X_{i} Y_{i}", X * Y - _poly_sum(datum.sigma_v(i, datum.t[i]))))
        for j in g.vertices:
            if j != i:
                out.append((f"X_{i} Y_{j}", X * FreeSum.word(("Y", j)) - FreeSum.word(("Y", j), ("X", i))))
    return out


def _poly_sum(p: Poly) -> FreeSum:
    return FreeSum.word(p) if not p.is_constant() else FreeSum.scalar(p.constant_value())


# ------------------------------------------------------ ordered products
def ordered_product_formula(g: Multiquiver, order, check: bool = True) -> WeylElement:
    """``phi(X_{v1} ... X_{vk})`` for the vertices listed in ``order``, computed
    from the incidence matrix and ``P_mn`` alone.  With ``check`` the result is
    compared against ``phi`` on the word."""
    order = list(order)
    pos = {v: k for k, v in enumerate(order)}
    if len(pos) != len(order):
        raise ValueError("order lists a vertex twice")
    coef = Poly.const(1)
    degree: dict = {}
    for e in g.edges:
        ends = [(end.vertex, end.mult if end is e.target else -end.mult) for end in e.ends() if end.vertex in pos]
        for _, x in ends:
            degree[e.id] = degree.get(e.id, 0) + x
        if len(ends) == 2:
            ends.sort(key=lambda p: pos[p[0]])
            coef = coef * pmn(ends[0][1], ends[1][1], u_var(e.id))
    result = WeylElement.z(degree, coef)
    if check:
        direct = phi(g, FreeSum.word(*(("X", v) for v in order)))
        if direct != result:
            raise CrossCheckError(f"ordered product formula disagrees with phi for order {order}")
    return result


def parity(g: Multiquiver, order, edges=None) -> dict:
    """``+1`` when the source precedes the target in ``order``, else ``-1``."""
    pos = {v: k for k, v in enumerate(order)}
    out = {}
    for e in g.proper_edges():
        if edges is not None and e.id not in edges:
            continue
        if e.source.vertex in pos and e.target.vertex in pos:
            out[e.id] = 1 if pos[e.source.vertex] < pos[e.target.vertex] else -1
    return out


# ------------------------------------------------------ word reduction
@dataclass(frozen=True)
class ReducedForm:
    terms: dict  # tuple of letter tokens -> Poly

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, p in self.sorted_terms():
            letters = " ".join(f"{k}_{v}" for k, v in mono)
            coef = p.factored()
            if not letters:
                parts.append(coef)
            elif coef == "1":
                parts.append(letters)
            else:
                parts.append(f"{as_factor(coef)} * {letters}")
        return " + ".join(parts)

    def sorted_terms(self):
        def key(item):
            mono = item[0]
            return (len(mono), tuple((k, natural_key(v)) for k, v in mono))

        return sorted(self.terms.items(), key=key)

    def to_sum(self) -> FreeSum:
        out = FreeSum()
        for mono, p in self.terms.items():
            out = out + _poly_sum(p) * FreeSum.word(*mono)
        return out

    def to_json(self) -> list:
        return [{"monomial": [f"{k}_{v}" for k, v in mono], "coefficient": str(p)} for mono, p in self.sorted_terms()]


def _sigma_letters(datum: TGWDatum, letters, p: Poly) -> Poly:
    """Move ``p`` left across ``letters``: ``letters * p = sigma(p) * letters``."""
    d = word_degree(letters)
    return datum.sigma(d, p) if d else p


def _reduce_word(datum: TGWDatum, coef: Poly, word) -> tuple:
    letters: list = []
    for tok in word:
        if isinstance(tok, Poly):
            coef = coef * _sigma_letters(datum, letters, tok)
        else:
            letters.append(tok)
    # bring every Y in front of every X
    changed = True
    while changed and coef:
        changed = False
        for k in range(len(letters) - 1):
            a, b = letters[k], letters[k + 1]
            if a[0] == "X" and b[0] == "Y":
                if a[1] != b[1]:
                    letters[k], letters[k + 1] = b, a
                else:
                    i = a[1]
                    coef = coef * _sigma_letters(datum, letters[:k], datum.sigma_v(i, datum.t[i]))
                    del letters[k : k + 2]
                changed = True
                break
    ys = [t for t in letters if t[0] == "Y"]
    xs = [t for t in letters if t[0] == "X"]
    # contract shared indices: Y_i Y_J X_K X_i = sigma_K(t_i) Y_J X_K
    while coef:
        xidx = {t[1] for t in xs}
        p = next((k for k in range(len(ys) - 1, -1, -1) if ys[k][1] in xidx), None)
        if p is None:
            break
        i = ys[p][1]
        q = next(k for k, t in enumerate(xs) if t[1] == i)
        inner = datum.sigma(word_degree(xs[:q]), datum.t[i])
        coef = coef * _sigma_letters(datum, ys[:p], inner)
        del ys[p]
        del xs[q]
    return coef, tuple(ys + xs)


def reduce_tgw_word(g: Multiquiver, w, check: bool = True) -> ReducedForm:
    """Rewrite into an R_E-combination of reduced monomials ``Y...Y X...X``
    with disjoint index sets, using only the defining relations."""
    w = _as_sum(w)
    _validate(g, w)
    datum = TGWDatum.of(g)
    out: dict = {}
    for word, c in w:
        coef, mono = _reduce_word(datum, Poly.const(c), word)
        if coef:
            s = out[mono] + coef if mono in out else coef
            if s:
                out[mono] = s
            else:
                del out[mono]
    result = ReducedForm(out)
    if check and phi(g, result.to_sum()) != phi(g, w):
        raise CrossCheckError("reduced form and original word have different images under phi")
    return result


# ------------------------------------------------------------ faithfulness
@dataclass(frozen=True)
class FaithfulnessReport:
    faithful: bool
    nullity: int
    equilibrium_components: int
    centralizer_support: list  # kernel basis: degrees where C_A(R_E) lives
    centralizer_commutes: bool

    def to_json(self) -> dict:
        return {
            "faithful": self.faithful,
            "nullity": self.nullity,
            "equilibrium_components": self.equilibrium_components,
            "centralizer_support": self.centralizer_support,
            "centralizer_commutes": self.centralizer_commutes,
        }


def faithfulness_report(g: Multiquiver) -> FaithfulnessReport:
    """phi is faithful iff gamma is injective iff no component is in equilibrium."""
    m = incidence_matrix(g)
    nullity = rational_nullity(m)
    eq = equilibrium_analysis(g).kernel_rank
    if (nullity == 0) != (eq == 0):
        raise CrossCheckError(f"nullity {nullity} but {eq} equilibrium components")
    basis = kernel_basis(m)
    commutes = True
    for d in basis:
        word = []
        for v in g.vertices:
            word.extend([("X", v) if d.get(v, 0) > 0 else ("Y", v)] * abs(d.get(v, 0)))
        image = phi(g, FreeSum.word(*word))
        for e in g.edge_ids:
            r = WeylElement.u(e)
            if image * r != r * image:
                commutes = False
    return FaithfulnessReport(nullity == 0, nullity, eq, basis, commutes)


# --------------------------------------------------------------- parity
def order_for_parity(g: Multiquiver, f: dict) -> list:
    """A total order on the vertices whose parity function equals ``f``."""
    proper = {e.id: e for e in g.proper_edges()}
    if set(f) != set(proper):
        raise ValueError("f must assign +1 or -1 to every proper edge")
    if any(x not in (1, -1) for x in f.values()):
        raise ValueError("parity values must be +1 or -1")
    if is_acyclic(g):
        order = _tree_order(g, f)
    else:
        order = _constraint_order(g, f)
    if parity(g, order) != f:
        raise CrossCheckError("constructed order does not realize the parity function")
    return order


def _tree_order(g: Multiquiver, f: dict) -> list:
    adj: dict = {v: [] for v in g.vertices}
    for e in g.proper_edges():
        adj[e.source.vertex].append((e.target.vertex, e.id, True))
        adj[e.target.vertex].append((e.source.vertex, e.id, False))
    order: list = []
    for comp in components(g):
        root = comp[0]
        local = [root]
        seen = {root}
        queue = [root]
        while queue:
            p = queue.pop(0)
            for c, eid, p_is_source in sorted(adj[p], key=lambda t: natural_key(t[1])):
                if c in seen:
                    continue
                seen.add(c)
                k = local.index(p)
                # f = +1: source before target
                c_after = (f[eid] == 1) == p_is_source
                local.insert(k + 1 if c_after else k, c)
                queue.append(c)
        order.extend(local)
    return order


def _constraint_order(g: Multiquiver, f: dict) -> list:
    succ: dict = {v: [] for v in g.vertices}
    indeg = {v: 0 for v in g.vertices}
    for e in g.proper_edges():
        a, b = (e.source.vertex, e.target.vertex) if f[e.id] == 1 else (e.target.vertex, e.source.vertex)
        succ[a].append((b, e.id))
        indeg[b] += 1
    heap = [(natural_key(v), v) for v in g.vertices if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, v = heapq.heappop(heap)
        order.append(v)
        for w, _ in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, (natural_key(w), w))
    if len(order) == len(g.vertices):
        return order
    cycle = _directed_cycle(succ, {v for v in g.vertices if indeg[v] > 0})
    raise CyclePresent("no total order realizes this parity function", cycle)


def _directed_cycle(succ: dict, remaining: set) -> list:
    """Find a directed cycle among ``remaining`` (every such vertex has a predecessor there)."""
    pred = {}
    for a in remaining:
        for b, eid in succ[a]:
            if b in remaining:
                pred.setdefault(b, (a, eid))
    v = min(remaining, key=natural_key)
    seen = []
    while v not in seen:
        seen.append(v)
        v = pred[v][0]
    loop = seen[seen.index(v) :]
    # walk forward along arcs: pred gives reversed direction
    loop.reverse()
    edges = []
    for k, a in enumerate(loop):
        b = loop[(k + 1) % len(loop)]
        edges.append(next(eid for w, eid in succ[a] if w == b))
    return list(zip(loop, edges))


# ------------------------------------------------------ local surjectivity
@dataclass
class SurjectivityReport:
    locally_surjective: bool
    degree: dict
    forest: list = field(default_factory=list)
    cycle: list = field(default_factory=list)
    cycle_edges: list = field(default_factory=list)
    parity_function: dict = field(default_factory=dict)
    generators: list = field(default_factory=list)  # Poly, one per class of orders
    order_polynomials: list = field(default_factory=list)  # (orders, Poly)
    common_zero: dict | None = None
    certificate: str = ""

    def to_json(self) -> dict:
        return {
            "locally_surjective": self.locally_surjective,
            "degree": self.degree,
            "forest": self.forest,
            "cycle": self.cycle,
            "cycle_edges": self.cycle_edges,
            "parity_function": self.parity_function,
            "generators": [p.factored() for p in self.generators],
            "order_polynomials": [
                {"orders": [" ".join(o) for o in orders], "polynomial": p.factored()}
                for orders, p in self.order_polynomials
            ],
            "common_zero": self.common_zero,
            "certificate": self.certificate,
        }


def _linear_factors(p: Poly) -> list:
    """``[(var, root)]`` for a product of integer-rooted univariate linear factors."""
    c, factors, cof = p.factor_linear()
    if not cof.is_constant():
        raise CrossCheckError(f"{p} is not a product of linear factors")
    return [(var, root) for var, root, mult in factors for _ in range(mult)]


def common_integer_zero(polys) -> dict | None:
    """Common zero of products of integer-rooted linear factors, or None.

    Each variable ranges over its roots plus one value that is a root of
    nothing; for such products this search is complete.
    """
    factor_lists = [_linear_factors(p) for p in polys]
    if any(not fl for fl in factor_lists):
        return None  # a nonzero constant never vanishes
    roots: dict = {}
    for fl in factor_lists:
        for var, r in fl:
            roots.setdefault(var, set()).add(r)
    variables = sorted(roots, key=natural_key)
    cands = {v: sorted(roots[v]) + [max(roots[v]) + 1] for v in variables}
    by_var: dict = {v: [] for v in variables}
    for k, fl in enumerate(factor_lists):
        last = max(variables.index(var) for var, _ in fl)
        by_var[variables[last]].append(k)
    assignment: dict = {}

    def vanishes(k):
        return any(assignment.get(var) == r for var, r in factor_lists[k])

    def search(idx):
        if idx == len(variables):
            return True
        var = variables[idx]
        for val in cands[var]:
            assignment[var] = val
            if all(vanishes(k) for k in by_var[var]) and search(idx + 1):
                return True
        del assignment[var]
        return False

    if not search(0):
        return None
    return dict(assignment)


def _order_classes(g: Multiquiver, verts: list, check: bool):
    """Group all orders on ``verts`` by parity; one polynomial per class."""
    if len(verts) > MAX_ORDER_VERTICES:
        raise ValueError(f"order enumeration is capped at {MAX_ORDER_VERTICES} vertices, got {len(verts)}")
    inner = {e.id for e in g.proper_edges() if e.source.vertex in verts and e.target.vertex in verts}
    classes: dict = {}
    for perm in permutations(verts):
        key = tuple(sorted(parity(g, perm, inner).items()))
        classes.setdefault(key, []).append(list(perm))
    out = []
    for key, orders in classes.items():
        w = ordered_product_formula(g, orders[0], check=check)
        (coef,) = w.terms.values() if w.terms else (Poly(),)
        out.append((orders, coef, dict(key)))
    return out


def local_surjectivity_report(g: Multiquiver, degree: dict | None = None, check: bool = True) -> SurjectivityReport:
    """Decide local surjectivity (acyclicity) and attach a certificate.

    On failure: the obstruction ideal generators for a cycle and a common
    zero.  On success: a spanning forest, plus a no-common-zero check of the
    order polynomials at ``degree`` (default: the sum of all vertices).
    """
    if degree is not None:
        bad = [v for v, x in degree.items() if x not in (0, 1) or v not in g.vertices]
        if bad:
            raise ValueError(f"degree must be a sum of distinct vertices; offending entries {bad}")
        degree = {v: 1 for v, x in degree.items() if x}
    forest, closing = spanning_forest(g)
    if not closing:
        report = SurjectivityReport(True, degree or {v: 1 for v in g.vertices}, forest=forest)
        ncomp = len(components(g))
        if len(g.proper_edges()) > len(g.vertices) - ncomp:
            raise CrossCheckError("forest certificate violates |E| <= |V| - #components")
        verts = [v for v in g.vertices if v in report.degree]
        if degree is None and len(verts) > MAX_ORDER_VERTICES:
            report.certificate = f"forest only; order check skipped above {MAX_ORDER_VERTICES} vertices"
            return report
        classes = _order_classes(g, verts, check)
        report.order_polynomials = [(orders, p) for orders, p, _ in classes]
        zero = common_integer_zero([p for _, p, _ in classes])
        if zero is not None:
            raise CrossCheckError(f"acyclic graph but order polynomials share the zero {zero}")
        report.certificate = "forest; order polynomials have no common zero"
        return report

    sub = g.restrict(degree) if degree is not None else g
    found = shortest_cycle(sub) or shortest_cycle(g)
    verts, cedges = found
    base = {v: k for k, v in enumerate(verts)}
    f = {}
    for e_id in cedges:
        e = g.edge(e_id)
        f[e_id] = 1 if base[e.source.vertex] < base[e.target.vertex] else -1
    f[cedges[-1]] = -f[cedges[-1]]
    classes = _order_classes(g, sorted(verts, key=natural_key), check)
    gens: list = []
    for orders, poly, par in classes:
        e_id = next((x for x in cedges if par[x] != f[x]), None)
        if e_id is None:
            raise CrossCheckError("parity function is realized by an order on a cycle")
        e = g.edge(e_id)
        gs, gt = -e.source.mult, e.target.mult
        gen = pmn(gs, gt, u_var(e_id)) if par[e_id] == 1 else pmn(gt, gs, u_var(e_id))
        if gen not in gens:
            gens.append(gen)
        if _remainder_free(poly, gen) is None:
            raise CrossCheckError(f"order polynomial {poly} is not a multiple of {gen}")
    gens.sort(key=lambda p: natural_key(min(p.variables(), key=natural_key)) if p.variables() else ())
    zero = common_integer_zero(gens)
    if zero is None:
        raise CrossCheckError("obstruction generators have no common zero")
    for _, poly, _ in classes:
        if poly.evaluate(zero) != 0:
            raise CrossCheckError(f"order polynomial {poly} does not vanish at {zero}")
    return SurjectivityReport(
        False,
        {v: 1 for v in verts},
        forest=forest,
        cycle=verts,
        cycle_edges=cedges,
        parity_function=f,
        generators=gens,
        order_polynomials=[(orders, p) for orders, p, _ in classes],
        common_zero=zero,
        certificate="obstruction ideal is proper",
    )


def _remainder_free(p: Poly, q: Poly):
    """Quotient ``p / q`` when ``q`` is a product of linear factors dividing ``p``."""
    for var, root in _linear_factors(q):
        try:
            p = p.divide_linear(var, root)
        except ArithmeticError:
            return None
    return p
