"""Multiquivers, incidence matrices, equilibrium and integer kernels."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .errors import CrossCheckError, MultiquiverError, ParseError
from .util import natural_key, sorted_ids


@dataclass(frozen=True)
class End:
    vertex: str
    mult: int

    def __post_init__(self):
        if not isinstance(self.mult, int) or self.mult < 1:
            raise MultiquiverError(f"multiplicity must be a positive integer, got {self.mult!r}")


@dataclass(frozen=True)
class Edge:
    id: str
    source: End | None = None
    target: End | None = None

    @property
    def is_proper(self) -> bool:
        return self.source is not None and self.target is not None

    @property
    def is_leaf(self) -> bool:
        return not self.is_proper

    @property
    def is_disconnected(self) -> bool:
        return self.source is None and self.target is None

    def ends(self):
        return [x for x in (self.source, self.target) if x is not None]

    def flipped(self) -> "Edge":
        return Edge(self.id, self.target, self.source)


class Multiquiver:
    """Finite multiquiver.  Vertices and edges are kept in natural id order."""

    __slots__ = ("vertices", "edges", "_by_id")

    def __init__(self, vertices=(), edges=()):
        vs = list(vertices)
        if len(set(vs)) != len(vs):
            raise MultiquiverError("duplicate vertex id")
        es = list(edges)
        ids = [e.id for e in es]
        if len(set(ids)) != len(ids):
            raise MultiquiverError("duplicate edge id")
        vset = set(vs)
        for e in es:
            for end in e.ends():
                if end.vertex not in vset:
                    raise MultiquiverError(f"edge {e.id!r} references unknown vertex {end.vertex!r}")
            if e.is_proper and e.source.vertex == e.target.vertex:
                raise MultiquiverError(f"edge {e.id!r} is a loop")
        object.__setattr__(self, "vertices", tuple(sorted_ids(vs)))
        object.__setattr__(self, "edges", tuple(sorted(es, key=lambda e: natural_key(e.id))))
        object.__setattr__(self, "_by_id", {e.id: e for e in es})

    def edge(self, eid: str) -> Edge:
        try:
            return self._by_id[eid]
        except KeyError:
            raise KeyError(f"unknown edge {eid!r}") from None

    @property
    def edge_ids(self) -> tuple:
        return tuple(e.id for e in self.edges)

    def proper_edges(self) -> list:
        return [e for e in self.edges if e.is_proper]

    def incident(self, v: str) -> list:
        return [e for e in self.edges if any(end.vertex == v for end in e.ends())]

    def gamma_column(self, v: str) -> dict:
        """``gamma(v)`` as a sparse vector over edge ids."""
        if v not in self.vertices:
            raise KeyError(f"unknown vertex {v!r}")
        col = {}
        for e in self.edges:
            if e.target is not None and e.target.vertex == v:
                col[e.id] = e.target.mult
            elif e.source is not None and e.source.vertex == v:
                col[e.id] = -e.source.mult
        return col

    def with_flipped(self, eid: str) -> "Multiquiver":
        return Multiquiver(self.vertices, [e.flipped() if e.id == eid else e for e in self.edges])

    def restrict(self, keep) -> "Multiquiver":
        """Drop vertices outside ``keep``; edges at dropped vertices lose that end."""
        keep = set(keep)
        edges = []
        for e in self.edges:
            s = e.source if e.source is not None and e.source.vertex in keep else None
            t = e.target if e.target is not None and e.target.vertex in keep else None
            edges.append(Edge(e.id, s, t))
        return Multiquiver([v for v in self.vertices if v in keep], edges)

    def __setattr__(self, name, value):
        raise AttributeError("Multiquiver is immutable")

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __eq__(self, other):
        return isinstance(other, Multiquiver) and (self.vertices, self.edges) == (other.vertices, other.edges)

    def __repr__(self):
        return f"Multiquiver(vertices={list(self.vertices)!r}, edges={list(self.edges)!r})"

    # ------------------------------------------------------------------ I/O
    def to_text(self) -> str:
        lines = [f"vertex {v}" for v in self.vertices]
        for e in self.edges:
            line = f"edge {_text_id(e.id)}"
            if e.source is not None:
                line += f" source {e.source.vertex} {e.source.mult}"
            if e.target is not None:
                line += f" target {e.target.vertex} {e.target.mult}"
            lines.append(line)
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        edges = []
        for e in self.edges:
            d = {"id": e.id}
            if e.source is not None:
                d["source"] = {"v": e.source.vertex, "mult": e.source.mult}
            if e.target is not None:
                d["target"] = {"v": e.target.vertex, "mult": e.target.mult}
            edges.append(d)
        return {"vertices": list(self.vertices), "edges": edges}


def _text_id(eid: str) -> str:
    return eid if eid else "_"


def parse_multiquiver(text: str) -> Multiquiver:
    """Parse the line format (``vertex <id>`` / ``edge <id> [source v m] [target v m]``)
    or, if the text starts with ``{``, the JSON form."""
    if text.lstrip().startswith("{"):
        try:
            return multiquiver_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    vertices, edges = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "vertex" and len(words) == 2:
            vertices.append(words[1])
        elif words[0] == "edge" and len(words) >= 2:
            eid = "" if words[1] == "_" else words[1]
            ends = {}
            rest = words[2:]
            while rest:
                if len(rest) < 3 or rest[0] not in ("source", "target") or rest[0] in ends:
                    raise ParseError(f"line {lineno}: malformed edge clause {' '.join(rest)!r}")
                try:
                    mult = int(rest[2])
                except ValueError:
                    raise ParseError(f"line {lineno}: multiplicity {rest[2]!r} is not an integer") from None
                if mult < 1:
                    raise ParseError(f"line {lineno}: multiplicity must be positive")
                ends[rest[0]] = End(rest[1], mult)
                rest = rest[3:]
            edges.append(Edge(eid, ends.get("source"), ends.get("target")))
        else:
            raise ParseError(f"line {lineno}: cannot parse {line!r}")
    if not vertices and not edges:
        raise ParseError("empty multiquiver description")
    try:
        return Multiquiver(vertices, edges)
    except MultiquiverError as exc:
        raise ParseError(str(exc)) from None


def multiquiver_from_json(data: dict) -> Multiquiver:
    try:
        vertices = [str(v) for v in data.get("vertices", [])]
        edges = []
        for d in data.get("edges", []):
            ends = {}
            for key in ("source", "target"):
                if d.get(key) is not None:
                    mult = d[key]["mult"]
                    if not isinstance(mult, int) or isinstance(mult, bool) or mult < 1:
                        raise ParseError(f"edge {d['id']!r}: multiplicity must be a positive integer")
                    ends[key] = End(str(d[key]["v"]), mult)
            edges.append(Edge(str(d["id"]), ends.get("source"), ends.get("target")))
        return Multiquiver(vertices, edges)
    except (KeyError, TypeError, AttributeError) as exc:
        raise ParseError(f"malformed multiquiver JSON: {exc!r}") from None
    except MultiquiverError as exc:
        raise ParseError(str(exc)) from None


# ------------------------------------------------------------ incidence matrix
@dataclass(frozen=True)
class IncidenceMatrix:
    rows: tuple  # edge ids
    cols: tuple  # vertex ids
    entries: dict = field(hash=False)  # (edge, vertex) -> nonzero int

    def __post_init__(self):
        for e in self.rows:
            pos = [x for (r, _), x in self.entries.items() if r == e and x > 0]
            neg = [x for (r, _), x in self.entries.items() if r == e and x < 0]
            if len(pos) > 1 or len(neg) > 1:
                raise MultiquiverError(f"row {e!r} violates the one-positive/one-negative condition")

    def __getitem__(self, key) -> int:
        return self.entries.get(key, 0)

    def column(self, v: str) -> dict:
        return {e: x for (e, w), x in self.entries.items() if w == v}

    def row(self, e: str) -> dict:
        return {v: x for (f, v), x in self.entries.items() if f == e}

    def dense(self) -> list:
        return [[self[(e, v)] for v in self.cols] for e in self.rows]

    def apply(self, d: dict) -> dict:
        """``gamma(d)`` for a sparse vector ``d`` over vertices."""
        out: dict = {}
        for (e, v), x in self.entries.items():
            c = d.get(v, 0)
            if c:
                out[e] = out.get(e, 0) + x * c
        return {e: x for e, x in out.items() if x}

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in row) for row in self.dense())

    def __eq__(self, other):
        return (
            isinstance(other, IncidenceMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))


def incidence_matrix(g: Multiquiver) -> IncidenceMatrix:
    entries = {}
    for e in g.edges:
        if e.target is not None:
            entries[(e.id, e.target.vertex)] = e.target.mult
        if e.source is not None:
            entries[(e.id, e.source.vertex)] = -e.source.mult
    return IncidenceMatrix(g.edge_ids, g.vertices, entries)


def matrix_from_rows(rows, edge_ids=None, vertex_ids=None) -> IncidenceMatrix:
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else len(vertex_ids or ())
    if any(len(r) != ncols for r in rows):
        raise MultiquiverError("ragged matrix")
    edge_ids = list(edge_ids) if edge_ids is not None else [f"e{i + 1}" for i in range(len(rows))]
    vertex_ids = list(vertex_ids) if vertex_ids is not None else [f"v{j + 1}" for j in range(ncols)]
    if len(edge_ids) != len(rows) or len(vertex_ids) != ncols:
        raise MultiquiverError("id lists do not match the matrix shape")
    entries = {}
    for e, r in zip(edge_ids, rows):
        for v, x in zip(vertex_ids, r):
            if not isinstance(x, int):
                raise MultiquiverError(f"non-integer entry {x!r}")
            if x:
                entries[(e, v)] = x
    return IncidenceMatrix(tuple(edge_ids), tuple(vertex_ids), entries)


def multiquiver_from_matrix(m, edge_ids=None, vertex_ids=None) -> Multiquiver:
    """Inverse of :func:`incidence_matrix`.  ``m`` is an IncidenceMatrix or a
    list of integer rows (default ids ``e1, e2, ...`` and ``v1, v2, ...``)."""
    if not isinstance(m, IncidenceMatrix):
        m = matrix_from_rows(m, edge_ids, vertex_ids)
    edges = []
    for e in m.rows:
        src = tgt = None
        for v, x in m.row(e).items():
            if x > 0:
                tgt = End(v, x)
            else:
                src = End(v, -x)
        edges.append(Edge(e, src, tgt))
    return Multiquiver(m.cols, edges)


# ------------------------------------------------------------- connectivity
class _DSU:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if natural_key(rb) < natural_key(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def components(g: Multiquiver) -> list:
    """Vertex sets of the connected components, each sorted, ordered by smallest vertex."""
    dsu = _DSU(g.vertices)
    for e in g.proper_edges():
        dsu.union(e.source.vertex, e.target.vertex)
    groups: dict = {}
    for v in g.vertices:
        groups.setdefault(dsu.find(v), []).append(v)
    return sorted((tuple(vs) for vs in groups.values()), key=lambda vs: natural_key(vs[0]))


def spanning_forest(g: Multiquiver):
    """``(forest_edges, closing_edges)`` from union-find over proper edges in id order."""
    dsu = _DSU(g.vertices)
    forest, closing = [], []
    for e in g.proper_edges():
        (forest if dsu.union(e.source.vertex, e.target.vertex) else closing).append(e.id)
    return forest, closing


def is_acyclic(g: Multiquiver) -> bool:
    return not spanning_forest(g)[1]


def shortest_cycle(g: Multiquiver):
    """A shortest undirected cycle as ``(vertices, edges)`` or None.

    ``vertices[k]`` and ``vertices[k+1]`` (cyclically) are joined by
    ``edges[k]``.  The cycle starts at its smallest vertex and runs towards
    the smaller of that vertex's two cycle neighbours.
    """
    best = None
    proper = g.proper_edges()
    adj: dict = {v: [] for v in g.vertices}
    for e in proper:
        adj[e.source.vertex].append((e.target.vertex, e.id))
        adj[e.target.vertex].append((e.source.vertex, e.id))
    for v in adj:
        adj[v].sort(key=lambda p: (natural_key(p[0]), natural_key(p[1])))
    for e in proper:
        a, b = e.source.vertex, e.target.vertex
        # BFS from a to b avoiding e
        prev = {a: None}
        frontier = [a]
        while frontier and b not in prev:
            nxt = []
            for x in frontier:
                for y, eid in adj[x]:
                    if eid == e.id or y in prev:
                        continue
                    prev[y] = (x, eid)
                    nxt.append(y)
            frontier = nxt
        if b not in prev:
            continue
        path_v, path_e = [b], []
        while prev[path_v[-1]] is not None:
            x, eid = prev[path_v[-1]]
            path_e.append(eid)
            path_v.append(x)
        # path_v runs b .. a; close the loop with e from a back to b
        verts = path_v[::-1]
        edges = path_e[::-1] + [e.id]
        if best is None or len(verts) < len(best[0]):
            best = (verts, edges)
    if best is None:
        return None
    verts, edges = best
    n = len(verts)
    k = min(range(n), key=lambda i: natural_key(verts[i]))
    verts = verts[k:] + verts[:k]
    edges = edges[k:] + edges[:k]
    if n > 2 and natural_key(verts[-1]) < natural_key(verts[1]):
        # reverse direction, keeping verts[0] first
        verts = [verts[0]] + verts[1:][::-1]
        edges = edges[::-1]
    elif n == 2 and natural_key(edges[1]) < natural_key(edges[0]):
        edges = edges[::-1]
    return verts, edges


# ------------------------------------------------------------- equilibrium
@dataclass(frozen=True)
class ComponentReport:
    vertices: tuple
    edges: tuple
    has_leaves: bool
    balanced: bool
    in_equilibrium: bool
    weight: dict | None  # primitive kernel generator when in equilibrium

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": list(self.edges),
            "has_leaves": self.has_leaves,
            "balanced": self.balanced,
            "in_equilibrium": self.in_equilibrium,
            "weight": None if self.weight is None else {v: self.weight[v] for v in self.vertices if v in self.weight},
        }


@dataclass(frozen=True)
class EquilibriumReport:
    components: tuple
    kernel_rank: int

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components], "kernel_rank": self.kernel_rank}


def _primitive(lam: dict, base: str) -> dict:
    den = lcm(*(Fraction(x).denominator for x in lam.values()))
    ints = {v: int(Fraction(x) * den) for v, x in lam.items()}
    g = 0
    for x in ints.values():
        g = gcd(g, x)
    sign = 1 if ints[base] > 0 else -1
    return {v: sign * x // g for v, x in ints.items()}


def equilibrium_analysis(g: Multiquiver) -> EquilibriumReport:
    """Per-component equilibrium test by weight propagation.

    A component is in equilibrium when it has no leaves and the weights
    ``lambda_w = lambda_v * m_v / m_w`` forced along a spanning tree also
    balance every remaining edge.
    """
    reports = []
    for comp in components(g):
        cset = set(comp)
        cedges = [e for e in g.edges if any(end.vertex in cset for end in e.ends())]
        leaves = any(e.is_leaf for e in cedges)
        adj: dict = {v: [] for v in comp}
        for e in cedges:
            if e.is_proper:
                s, t = e.source, e.target
                adj[s.vertex].append((t.vertex, s.mult, t.mult, e.id))
                adj[t.vertex].append((s.vertex, t.mult, s.mult, e.id))
        base = comp[0]
        lam = {base: Fraction(1)}
        tree = set()
        stack = [base]
        while stack:
            v = stack.pop()
            for w, mv, mw, eid in adj[v]:
                if w not in lam:
                    lam[w] = lam[v] * mv / mw
                    tree.add(eid)
                    stack.append(w)
        balanced = True
        for e in cedges:
            if e.is_proper and e.id not in tree:
                s, t = e.source, e.target
                if lam[s.vertex] * s.mult != lam[t.vertex] * t.mult:
                    balanced = False
                    break
        eq = balanced and not leaves
        reports.append(
            ComponentReport(
                vertices=comp,
                edges=tuple(e.id for e in cedges),
                has_leaves=leaves,
                balanced=balanced,
                in_equilibrium=eq,
                weight=_primitive(lam, base) if eq else None,
            )
        )
    return EquilibriumReport(tuple(reports), sum(r.in_equilibrium for r in reports))


# ------------------------------------------------------------ integer kernel
def bareiss_rank(rows: list) -> int:
    """Rank of an integer matrix by fraction-free Gaussian elimination."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, nrows):
            for k in range(c + 1, ncols):
                a[r][k] = (a[r][k] * p - a[rank][k] * a[r][c]) // prev
            a[r][c] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def rational_nullity(m: IncidenceMatrix) -> int:
    return len(m.cols) - bareiss_rank(m.dense())


def kernel_basis(m) -> list:
    """Basis of ``ker gamma`` over the integers: one primitive vector per
    component in equilibrium.  The rank is cross-checked against elimination."""
    if isinstance(m, Multiquiver):
        g, m = m, incidence_matrix(m)
    else:
        g = multiquiver_from_matrix(m)
    report = equilibrium_analysis(g)
    basis = [c.weight for c in report.components if c.in_equilibrium]
    nullity = rational_nullity(m)
    if nullity != len(basis):
        raise CrossCheckError(f"kernel rank {len(basis)} from propagation, {nullity} from elimination")
    for w in basis:
        if m.apply(w):
            raise CrossCheckError(f"weight vector {w} is not in the kernel")
    return basis


# ----------------------------------------------------------------- random
def random_multiquiver(rng, max_vertices=6, max_edges=8, max_mult=4, leaf_prob=0.2, min_vertices=1):
    """Random finite multiquiver; ``rng`` is a :class:`random.Random`."""
    nv = rng.randint(min_vertices, max_vertices)
    vertices = [f"v{i + 1}" for i in range(nv)]
    ne = rng.randint(0, max_edges)
    edges = []
    for k in range(ne):
        r = rng.random()
        if nv >= 2 and r >= leaf_prob:
            a, b = rng.sample(vertices, 2)
            edges.append(Edge(f"e{k + 1}", End(a, rng.randint(1, max_mult)), End(b, rng.randint(1, max_mult))))
        elif nv >= 1 and r >= leaf_prob / 8:
            end = End(rng.choice(vertices), rng.randint(1, max_mult))
            edges.append(Edge(f"e{k + 1}", end, None) if rng.random() < 0.5 else Edge(f"e{k + 1}", None, end))
        else:
            edges.append(Edge(f"e{k + 1}"))
    return Multiquiver(vertices, edges)


def random_balanced_cycle(rng, n, max_mult=3):
    """A leaf-free NND cycle on ``n`` vertices that is balanced (in equilibrium)."""
    vertices = [f"v{i + 1}" for i in range(n)]
    lam = [rng.randint(1, max_mult) for _ in range(n)]
    edges = []
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        la, lb = lam[i], lam[(i + 1) % n]
        # lambda_a * m_a = lambda_b * m_b
        d = gcd(la, lb)
        ma, mb = lb // d, la // d
        if rng.random() < 0.5:
            edges.append(Edge(f"e{i + 1}", End(a, ma), End(b, mb)))
        else:
            edges.append(Edge(f"e{i + 1}", End(b, mb), End(a, ma)))
    return Multiquiver(vertices, edges)
