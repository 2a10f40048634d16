"""Named example multiquivers used by the CLI, the tests and the docs."""
from __future__ import annotations

from .cartan import lie_preset
from .graph import Edge, End, Multiquiver, parse_multiquiver

GRAPH1 = """\
vertex v1
vertex v2
vertex v3
vertex v4
edge e1
edge e2 source v2 2 target v3 3
edge e3 source v3 1 target v4 2
edge e4 source v4 1 target v2 1
edge e5 target v4 1
"""

# balanced triangle, not directed
GRAPH2 = """\
vertex v1
vertex v2
vertex v3
edge e1 source v1 2 target v2 1
edge e2 source v3 4 target v2 1
edge e3 source v3 2 target v1 1
"""

GRAPH3 = """\
vertex v1
vertex v2
edge e1 source v1 2 target v2 1
edge e2 source v2 3 target v1 4
"""

TRIANGLE = """\
vertex 1
vertex 2
vertex 3
edge a source 1 2 target 2 3
edge b source 3 2 target 2 1
edge c source 1 1 target 3 1
"""

A2 = """\
vertex v1
vertex v2
edge _ source v1 1 target v2 1
"""

TEXTS = {
    "graph1": GRAPH1,
    "graph2": GRAPH2,
    "graph3": GRAPH3,
    "triangle": TRIANGLE,
    "a2": A2,
}

# the printed incidence matrices (rows by edge id, columns by vertex id)
PRINTED_MATRICES = {
    "graph1": [[0, 0, 0, 0], [0, -2, 3, 0], [0, 0, -1, 2], [0, 1, 0, -1], [0, 0, 0, 1]],
    "graph2": [[-2, 1, 0], [0, 1, -4], [1, 0, -2]],
    "graph3": [[-2, 1], [4, -3]],
    "triangle": [[-2, 3, 0], [0, 1, -2], [-1, 0, 1]],
    "a2": [[-1, 1]],
}


def weyl_leaves(n: int) -> Multiquiver:
    """``n`` vertices each with one incoming leaf; the incidence matrix is the identity."""
    ids = [str(k) for k in range(1, n + 1)]
    return Multiquiver(ids, [Edge(v, None, End(v, 1)) for v in ids])


def laurent(n: int) -> Multiquiver:
    """``n`` vertices, no edges."""
    return Multiquiver([f"v{k}" for k in range(1, n + 1)], [])


def polynomial(n: int) -> Multiquiver:
    """No vertices, ``n`` disconnected leaves."""
    return Multiquiver([], [Edge(f"e{k}", None, None) for k in range(1, n + 1)])


def example(name: str) -> Multiquiver:
    if name in TEXTS:
        return parse_multiquiver(TEXTS[name])
    raise KeyError(f"unknown example {name!r}")


def preset(spec: str) -> Multiquiver:
    """Resolve ``<name>:<n>`` (``A~:3``, ``C~:2``, ``weyl:4``, ``laurent:2``) or a bare catalog name."""
    if ":" not in spec:
        return example(spec)
    name, _, n = spec.partition(":")
    try:
        k = int(n)
    except ValueError:
        raise ValueError(f"preset size {n!r} is not an integer") from None
    if name in ("A~", "C~"):
        return lie_preset(name, k)
    builders = {"weyl": weyl_leaves, "laurent": laurent, "polynomial": polynomial}
    if name not in builders:
        raise ValueError(f"unknown preset {name!r}")
    if k < 0:
        raise ValueError("preset size must be non-negative")
    return builders[name](k)
