"""Generalized Cartan matrices, Dynkin diagrams, Serre relations, the Lie
presets and the symmetric-GCM morphism check."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CrossCheckError
from .graph import Edge, End, Multiquiver, incidence_matrix
from .poly import Poly, product, u_var
from .rep import faithfulness_report, phi_generator
from .ring import build_t, difference_power, edge_factor, euler_operator
from .scalar import GaussianRational
from .util import natural_key
from .weyl import WeylElement, commutator

SERRE_CAP = 12


# -------------------------------------------------------------------- GCM
@dataclass(frozen=True)
class GCM:
    index: tuple
    entries: dict  # (i, j) -> int, all pairs

    def __getitem__(self, key) -> int:
        return self.entries[key]

    def dense(self) -> list:
        return [[self.entries[(i, j)] for j in self.index] for i in self.index]

    def p_exponents(self) -> dict:
        """Exponent ``1 - a_ij`` of ``p_ij(x) = (x - 1)^{1 - a_ij}`` for ``i != j``."""
        return {(i, j): 1 - a for (i, j), a in self.entries.items() if i != j}

    def check_axioms(self) -> list:
        problems = []
        for (i, j), a in self.entries.items():
            if i == j and a != 2:
                problems.append(f"a[{i},{i}] = {a}")
            if i != j and a > 0:
                problems.append(f"a[{i},{j}] = {a} > 0")
            if i != j and (a == 0) != (self.entries[(j, i)] == 0):
                problems.append(f"zero pattern differs at ({i},{j})")
        return problems

    def is_symmetric(self) -> bool:
        return all(a == self.entries[(j, i)] for (i, j), a in self.entries.items())

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in row) for row in self.dense())

    def to_json(self) -> dict:
        return {"index": list(self.index), "matrix": self.dense()}


def gcm_from_rows(rows, index=None) -> GCM:
    n = len(rows)
    index = tuple(index) if index is not None else tuple(str(k + 1) for k in range(n))
    if any(len(r) != n for r in rows):
        raise ValueError("a generalized Cartan matrix must be square")
    return GCM(index, {(index[a], index[b]): int(rows[a][b]) for a in range(n) for b in range(n)})


def gcm(g: Multiquiver) -> GCM:
    """``a_ij = -sum_{e : gamma_ei != 0} |gamma_ej|`` off the diagonal."""
    m = incidence_matrix(g)
    cols = {v: m.column(v) for v in g.vertices}
    entries = {}
    for i in g.vertices:
        for j in g.vertices:
            if i == j:
                entries[(i, j)] = 2
            else:
                entries[(i, j)] = -sum(abs(cols[j].get(e, 0)) for e in cols[i])
    return GCM(g.vertices, entries)


def gcm_oracle(g: Multiquiver, compare: bool = True) -> GCM:
    """``a_ij = 1 - k`` with ``k`` minimal such that ``(sigma_i - Id)^k (t_j) = 0``.

    Factors of ``t_j`` on edges away from ``i`` are fixed by ``sigma_i``, and
    ``R_E`` is a domain, so only the product of the remaining factors is
    iterated.  Expanding all of ``t_j`` gets very large on dense graphs.
    """
    m = incidence_matrix(g)
    entries = {}
    for i in g.vertices:
        moved = m.column(i)
        for j in g.vertices:
            if i == j:
                entries[(i, j)] = 2
                continue
            p = product(edge_factor(e, j) for e in g.incident(j) if e.id in moved)
            k = 0
            while p:
                p = difference_power(i, 1, p, m)
                k += 1
            entries[(i, j)] = 1 - k
    out = GCM(g.vertices, entries)
    if compare:
        formula = gcm(g)
        if formula != out:
            raise CrossCheckError(f"GCM formula\n{formula}\ndisagrees with difference-operator oracle\n{out}")
    return out


# ---------------------------------------------------------------- Dynkin
@dataclass(frozen=True)
class DynkinDiagram:
    vertices: tuple
    edges: tuple  # (i, j, a_ij, a_ji) with i < j

    def gcm(self) -> GCM:
        entries = {(i, j): (2 if i == j else 0) for i in self.vertices for j in self.vertices}
        for i, j, aij, aji in self.edges:
            entries[(i, j)] = aij
            entries[(j, i)] = aji
        return GCM(self.vertices, entries)

    def components(self) -> list:
        adj: dict = {v: set() for v in self.vertices}
        for i, j, _, _ in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        seen, out = set(), []
        for v in self.vertices:
            if v in seen:
                continue
            stack, comp = [v], []
            seen.add(v)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            out.append(sorted(comp, key=natural_key))
        return out

    def type_names(self) -> list:
        c = self.gcm()
        return [classify(c, comp) for comp in self.components()]

    @property
    def type_name(self) -> str:
        return " + ".join(self.type_names()) if self.vertices else "empty"

    def edge_lines(self) -> list:
        return [f"{i} -- {j} ({aij}, {aji})" for i, j, aij, aji in self.edges]

    def __str__(self):
        return "\n".join(self.edge_lines() + [f"type: {self.type_name}"])

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"i": i, "j": j, "a_ij": aij, "a_ji": aji} for i, j, aij, aji in self.edges],
            "type": self.type_name,
        }


def dynkin_diagram(g: Multiquiver, enforce: bool = True) -> DynkinDiagram:
    """Drop leaves, forget directions, merge parallel edges adding multiplicities.

    An undirected edge between ``i`` and ``j`` whose summed multiplicities are
    ``M_i`` at ``i`` and ``M_j`` at ``j`` is labelled ``(a_ij, a_ji) = (-M_j, -M_i)``.
    """
    merged: dict = {}
    for e in g.edges:
        if not e.is_proper:
            continue
        ends = sorted([e.source, e.target], key=lambda end: natural_key(end.vertex))
        key = (ends[0].vertex, ends[1].vertex)
        mi, mj = merged.get(key, (0, 0))
        merged[key] = (mi + ends[0].mult, mj + ends[1].mult)
    edges = tuple(
        (i, j, -mj, -mi)
        for (i, j), (mi, mj) in sorted(merged.items(), key=lambda kv: (natural_key(kv[0][0]), natural_key(kv[0][1])))
    )
    d = DynkinDiagram(g.vertices, edges)
    if enforce and d.gcm() != gcm(g):
        raise CrossCheckError("GCM read off the Dynkin diagram differs from the formula GCM")
    return d


def classify(c: GCM, comp: list) -> str:
    """Name of a connected finite-type pattern (A, B, C, D, G_2), else ``unnamed``."""
    n = len(comp)
    if n > 8:
        return "unnamed"
    nbrs = {v: [w for w in comp if w != v and c[(v, w)] != 0] for v in comp}
    nedges = sum(len(x) for x in nbrs.values()) // 2
    if nedges != n - 1:
        return "unnamed"
    if n == 1:
        return "A_1"
    labels = {}
    for v in comp:
        for w in nbrs[v]:
            labels[(v, w)] = c[(v, w)]
    simple = [k for k, a in labels.items() if a != -1]
    if n == 2:
        v, w = comp
        pair = sorted((c[(v, w)], c[(w, v)]))
        if pair == [-1, -1]:
            return "A_2"
        if pair == [-2, -1]:
            return "C_2"
        if pair == [-3, -1]:
            return "G_2"
        return "unnamed"
    degs = sorted(len(x) for x in nbrs.values())
    if not simple:
        if degs[-1] <= 2:
            return f"A_{n}"
        if n >= 4 and degs.count(3) == 1 and degs[-1] == 3:
            center = next(v for v in comp if len(nbrs[v]) == 3)
            arm_lengths = sorted(_arm_length(nbrs, center, w) for w in nbrs[center])
            if arm_lengths[:2] == [1, 1]:
                return f"D_{n}"
        return "unnamed"
    if degs[-1] > 2 or len(simple) != 1:
        return "unnamed"
    (s, t), a = simple[0], labels[simple[0]]
    if a != -2 or c[(t, s)] != -1:
        return "unnamed"
    # one double bond; it must sit at an end of the path
    if len(nbrs[t]) == 1:
        return f"C_{n}"  # a_{s,t} = -2 with t the end vertex
    if len(nbrs[s]) == 1:
        return f"B_{n}"
    return "unnamed"


def _arm_length(nbrs, center, start) -> int:
    prev, cur, k = center, start, 1
    while True:
        nxt = [w for w in nbrs[cur] if w != prev]
        if not nxt:
            return k
        prev, cur, k = cur, nxt[0], k + 1


# ------------------------------------------------------------------ Serre
@dataclass(frozen=True)
class SerreResult:
    i: str
    j: str
    a_ij: int
    holds: bool
    conclusive: bool  # phi faithful, so vanishing in the image certifies the relation

    def __bool__(self):
        return self.holds

    @property
    def label(self) -> str:
        if not self.holds:
            return "fails"
        return "certified" if self.conclusive else "Weyl-image only"

    def to_json(self) -> dict:
        return {"i": self.i, "j": self.j, "a_ij": self.a_ij, "holds": self.holds, "status": self.label}


def ad_power(a: WeylElement, k: int, b: WeylElement) -> WeylElement:
    for _ in range(k):
        if not b:
            break
        b = commutator(a, b)
    return b


def serre_check(g: Multiquiver, i: str, j: str, faithful: bool | None = None, cartan: GCM | None = None) -> SerreResult:
    """``(ad X_i)^{1-a_ij}(X_j) = 0`` and the same for ``Y`` in the Weyl image."""
    if i == j:
        raise ValueError("serre_check needs two distinct vertices")
    a = (cartan or gcm(g))[(i, j)]
    if 1 - a > SERRE_CAP:
        raise ValueError(f"ad-power 1 - a_ij = {1 - a} exceeds the cap {SERRE_CAP}")
    if faithful is None:
        faithful = faithfulness_report(g).faithful
    holds = True
    for kind in ("X", "Y"):
        if ad_power(phi_generator(g, kind, i), 1 - a, phi_generator(g, kind, j)):
            holds = False
    return SerreResult(i, j, a, holds, faithful)


def serre_all(g: Multiquiver) -> list:
    faithful = faithfulness_report(g).faithful
    c = gcm(g)
    return [serre_check(g, i, j, faithful, c) for i in g.vertices for j in g.vertices if i != j]


# ---------------------------------------------------------------- presets
def lie_preset(name: str, n: int) -> Multiquiver:
    """The path-shaped multiquivers realizing gl_{n+1} ("A~") and sp_{2n} ("C~")."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    verts = [str(k) for k in range(1, n + 1)]
    if name in ("A~", "A"):
        edges = [Edge("1", None, End("1", 1))]
        edges += [Edge(str(k + 1), End(str(k), 1), End(str(k + 1), 1)) for k in range(1, n)]
        edges.append(Edge(str(n + 1), End(str(n), 1), None))
        return Multiquiver(verts, edges)
    if name in ("C~", "C"):
        if n < 2:
            raise ValueError("the C~ family needs n >= 2")
        edges = [Edge("1", None, End("1", 1))]
        edges += [Edge(str(k + 1), End(str(k), 1), End(str(k + 1), 1)) for k in range(1, n - 1)]
        edges.append(Edge(str(n), End(str(n - 1), 1), End(str(n), 2)))
        return Multiquiver(verts, edges)
    raise ValueError(f"unknown preset family {name!r}")


HALF = Fraction(1, 2)
HALF_I = GaussianRational(0, HALF)


@dataclass
class LieCheck:
    family: str
    n: int
    passed: bool = True
    checks: dict = field(default_factory=dict)

    def record(self, name: str, ok: bool):
        self.checks[name] = bool(ok)
        self.passed = self.passed and bool(ok)

    def to_json(self) -> dict:
        failed = sorted((k for k, v in self.checks.items() if not v), key=natural_key)
        return {"family": self.family, "n": self.n, "passed": self.passed, "checks": len(self.checks), "failed": failed}


def lie_images(name: str, n: int) -> dict:
    """Chevalley generator images in the Weyl algebra, keyed ``e``, ``f``, ``h`` by index."""
    X, Y, U = WeylElement.x, WeylElement.y, WeylElement.u
    s = str
    e, f, h = {}, {}, {}
    if name in ("A~", "A"):
        for k in range(1, n + 1):
            e[k] = X(s(k)) * Y(s(k + 1))
            f[k] = X(s(k + 1)) * Y(s(k))
            h[k] = U(s(k)) - U(s(k + 1))
        return {"e": e, "f": f, "h": h, "E": {j: U(s(j)) for j in range(1, n + 2)}}
    for k in range(1, n):
        e[k] = X(s(k)) * Y(s(k + 1))
        f[k] = X(s(k + 1)) * Y(s(k))
        h[k] = U(s(k)) - U(s(k + 1))
    e[n] = X(s(n), 2) * HALF_I
    f[n] = Y(s(n), 2) * HALF_I
    h[n] = U(s(n)) - HALF
    return {"e": e, "f": f, "h": h}


def lie_relation_check(name: str, n: int) -> LieCheck:
    g = lie_preset(name, n)
    cart = gcm(g)
    img = lie_images(name, n)
    e, f, h = img["e"], img["f"], img["h"]
    rep = LieCheck("gl" if name.startswith("A") else "sp", n)
    idx = list(range(1, n + 1))
    for i in idx:
        for j in idx:
            a = cart[(str(i), str(j))]
            rep.record(f"[h{i},h{j}]=0", not commutator(h[i], h[j]))
            rep.record(f"[h{i},e{j}]", commutator(h[i], e[j]) == e[j] * a)
            rep.record(f"[h{i},f{j}]", commutator(h[i], f[j]) == f[j] * (-a))
            rep.record(f"[e{i},f{j}]", commutator(e[i], f[j]) == (h[i] if i == j else WeylElement()))
            if i != j:
                rep.record(f"ad(e{i})^{1 - a} e{j}", not ad_power(e[i], 1 - a, e[j]))
                rep.record(f"ad(f{i})^{1 - a} f{j}", not ad_power(f[i], 1 - a, f[j]))
    for v in g.vertices:
        k = int(v)
        xv, yv = phi_generator(g, "X", v), phi_generator(g, "Y", v)
        rep.record(f"phi(X{v}) ~ e{v}", _proportional(e[k], xv))
        rep.record(f"phi(Y{v}) ~ f{v}", _proportional(f[k], yv))
    if rep.family == "gl":
        E = img["E"]
        for j in E:
            for k in E:
                rep.record(f"[E{j}{j},E{k}{k}]=0", not commutator(E[j], E[k]))
        euler = WeylElement.poly(euler_operator(g.edge_ids))
        for v in g.vertices:
            for kind in ("X", "Y"):
                w = phi_generator(g, kind, v)
                rep.record(f"[Euler,{kind}{v}]=0", not commutator(euler, w))
                rep.record(f"deg {kind}{v} sums to 0", all(sum(x for _, x in d) == 0 for d in w.terms))
    else:
        for v in g.vertices:
            for kind in ("X", "Y"):
                w = phi_generator(g, kind, v)
                rep.record(f"deg {kind}{v} even", all(sum(x for _, x in d) % 2 == 0 for d in w.terms))
        rep.record("[e_n,f_n] = u_n - 1/2", commutator(e[n], f[n]) == WeylElement.u(str(n)) - HALF)
    return rep


def _proportional(a: WeylElement, b: WeylElement) -> bool:
    if set(a.terms) != set(b.terms) or len(a.terms) != 1:
        return False
    (pa,), (pb,) = a.terms.values(), b.terms.values()
    return pa.is_constant() and pb.is_constant() and bool(pa) and bool(pb)


# ------------------------------------------------------------ T(C) -> A(Gamma_C)
def _h(i, j, k) -> str:
    return f"H_{i}{j}({k})"


@dataclass(frozen=True)
class TCDatum:
    cartan: GCM
    generators: tuple  # (i, j, k) with i < j
    sigma: dict  # r -> {generator var -> Poly}
    t: dict  # i -> Poly over the H variables


def _pair_ks(a: int) -> list:
    return list(range(a, -a + 1, 2)) if a else []


def _validate_symmetric(c: GCM):
    probs = c.check_axioms()
    if probs:
        raise ValueError("not a generalized Cartan matrix: " + "; ".join(probs))
    if not c.is_symmetric():
        raise ValueError("matrix is not symmetric")
    if len(c.index) > 4:
        raise ValueError("size is limited to 4")


def tc_datum(c: GCM) -> TCDatum:
    _validate_symmetric(c)
    n = len(c.index)
    idx = c.index
    gens = []
    for p in range(n):
        for q in range(p + 1, n):
            a = c[(idx[p], idx[q])]
            gens += [(idx[p], idx[q], k) for k in _pair_ks(a)]
    sigma = {}
    for r in idx:
        table = {}
        for i, j, k in gens:
            a = c[(i, j)]
            H = lambda kk: Poly.var(_h(i, j, kk))  # noqa: E731
            if r == j and k > a:
                table[_h(i, j, k)] = H(k) + H(k - 2)
            elif r == i:
                table[_h(i, j, k)] = sum(((-1) ** m * H(k - 2 * m) for m in range((k - a) // 2 + 1)), Poly())
            else:
                table[_h(i, j, k)] = H(k)
        sigma[r] = table
    t = {}
    for pi, i in enumerate(idx):
        factors = []
        for pj, j in enumerate(idx):
            a = c[(i, j)]
            if i == j or a == 0:
                continue
            if pi < pj:
                factors.append(Poly.var(_h(i, j, abs(a))))
            else:
                factors.append(_sigma_inverse(sigma[i], c, j, i, abs(a)))
        t[i] = product(factors)
    return TCDatum(c, tuple(gens), sigma, t)


def _sigma_inverse(table: dict, c: GCM, i: str, j: str, k: int) -> Poly:
    """``sigma^{-1}(H_ij^(k))`` from the unipotent action: ``sum_m (-N)^m`` with ``N = sigma - Id``."""
    term = Poly.var(_h(i, j, k))
    total = term
    sign = 1
    for _ in range(abs(c[(i, j)]) + 1):
        term = term.substitute(table) - term
        sign = -sign
        if not term:
            break
        total = total + term * sign
    return total


@dataclass
class TCReport:
    passed: bool
    generator_count: int
    equivariance_residuals: dict
    t_residuals: dict
    degree_one: dict
    gcm_matches: bool = True
    graph: Multiquiver | None = None
    images: dict = field(default_factory=dict)  # generator name -> F(generator)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "generators": self.generator_count,
            "nonzero_equivariance": sorted((k for k, r in self.equivariance_residuals.items() if r), key=natural_key),
            "nonzero_t": sorted((k for k, r in self.t_residuals.items() if r), key=natural_key),
            "degree_one_witness": self.degree_one,
            "gcm_matches": self.gcm_matches,
        }


def gamma_of_cartan(c: GCM) -> Multiquiver:
    """The symmetric simple quiver with an edge i -> j (multiplicity |a_ij| at both ends) for i < j."""
    idx = c.index
    edges = []
    for p in range(len(idx)):
        for q in range(p + 1, len(idx)):
            a = abs(c[(idx[p], idx[q])])
            if a:
                edges.append(Edge(f"e{idx[p]}{idx[q]}", End(idx[p], a), End(idx[q], a)))
    return Multiquiver(idx, edges)


def tc_morphism_check(c) -> TCReport:
    if not isinstance(c, GCM):
        c = gcm_from_rows(c)
    datum = tc_datum(c)
    g = gamma_of_cartan(c)
    m = incidence_matrix(g)
    F = {}
    for i, j, k in datum.generators:
        e = g.edge(f"e{i}{j}")
        steps = (abs(c[(i, j)]) - k) // 2
        F[_h(i, j, k)] = difference_power(j, steps, edge_factor(e, i), m)

    def apply_F(p: Poly) -> Poly:
        return p.substitute(F)

    equiv = {}
    for r in c.index:
        offs = {u_var(e): -x for e, x in m.apply({r: 1}).items()}
        for var, image in datum.sigma[r].items():
            equiv[f"sigma_{r} {var}"] = apply_F(image) - F[var].shift(offs)
    tres = {i: apply_F(datum.t[i]) - build_t(g, i) for i in c.index}
    deg1 = {}
    for i, j, k in datum.generators:
        if k == 2 - abs(c[(i, j)]):
            deg1[f"e{i}{j}"] = F[_h(i, j, k)].total_degree() == 1
    same_gcm = gcm(g).dense() == c.dense()
    ok = same_gcm and not any(equiv.values()) and not any(tres.values()) and all(deg1.values())
    return TCReport(ok, len(datum.generators), equiv, tres, deg1, same_gcm, g, F)
