import json
import random

import pytest
from hypothesis import given, settings

from conftest import multiquivers
from tgw.cartan import lie_preset
from tgw.catalog import example
from tgw.errors import MultiquiverError, ParseError
from tgw.graph import (
    Edge,
    End,
    Multiquiver,
    components,
    equilibrium_analysis,
    incidence_matrix,
    is_acyclic,
    kernel_basis,
    multiquiver_from_json,
    multiquiver_from_matrix,
    parse_multiquiver,
    random_balanced_cycle,
    random_multiquiver,
    rational_nullity,
    shortest_cycle,
)


def test_incidence_examples():
    assert incidence_matrix(example("graph1")).dense() == [
        [0, 0, 0, 0], [0, -2, 3, 0], [0, 0, -1, 2], [0, 1, 0, -1], [0, 0, 0, 1]
    ]
    single = Multiquiver(["v1", "v2"], [Edge("e", End("v1", 1), End("v2", 1))])
    assert incidence_matrix(single).dense() == [[-1, 1]]
    empty = incidence_matrix(Multiquiver())
    assert empty.rows == () and empty.cols == () and empty.dense() == []


def test_from_matrix_examples():
    g = multiquiver_from_matrix([[-1, 1]])
    assert g.edges == (Edge("e1", End("v1", 1), End("v2", 1)),)
    leaves = multiquiver_from_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert all(e.source is None and e.target.mult == 1 for e in leaves.edges)
    g3 = multiquiver_from_matrix([[-2, 1], [4, -3]])
    assert incidence_matrix(g3) == incidence_matrix(example("graph3"))


def test_condition_m_rejected():
    with pytest.raises(MultiquiverError):
        multiquiver_from_matrix([[1, 1, 0]])
    with pytest.raises(MultiquiverError):
        multiquiver_from_matrix([[-1, -2]])


def test_loops_and_duplicates_rejected():
    with pytest.raises(MultiquiverError):
        Multiquiver(["v"], [Edge("e", End("v", 1), End("v", 1))])
    with pytest.raises(MultiquiverError):
        Multiquiver(["v", "v"], [])
    with pytest.raises(MultiquiverError):
        Multiquiver(["v"], [Edge("e", None, End("w", 1))])


@settings(max_examples=80, deadline=None)
@given(multiquivers())
def test_matrix_round_trip(g):
    m = incidence_matrix(g)
    assert multiquiver_from_matrix(m) == g
    for row in m.dense():
        assert sum(1 for x in row if x > 0) <= 1 and sum(1 for x in row if x < 0) <= 1


@settings(max_examples=80, deadline=None)
@given(multiquivers())
def test_text_and_json_round_trip(g):
    if g.vertices or g.edges:
        assert parse_multiquiver(g.to_text()) == g
    assert multiquiver_from_json(json.loads(json.dumps(g.to_json()))) == g


def test_parse_errors():
    for text in ["", "   \n# nothing\n", "vertex", "edge e source v1", "edge e source v1 0",
                 "edge e source v1 x", "vertex a\nedge e source a 1 source a 2", "node a", "{bad json"]:
        with pytest.raises(ParseError):
            parse_multiquiver(text)


def test_anonymous_edge_text():
    g = example("a2")
    assert g.edge_ids == ("",)
    assert "edge _ source v1 1 target v2 1" in g.to_text()


# equilibrium and kernel
def test_equilibrium_graph1():
    rep = equilibrium_analysis(example("graph1"))
    assert rep.kernel_rank == 1
    verdicts = {c.vertices: (c.in_equilibrium, c.weight) for c in rep.components}
    assert verdicts[("v1",)] == (True, {"v1": 1})
    assert verdicts[("v2", "v3", "v4")][0] is False


def test_equilibrium_graph2_weight():
    rep = equilibrium_analysis(example("graph2"))
    assert rep.kernel_rank == 1
    assert rep.components[0].weight == {"v1": 2, "v2": 4, "v3": 1}
    assert kernel_basis(example("graph2")) == [{"v1": 2, "v2": 4, "v3": 1}]


def test_graph3_not_in_equilibrium():
    assert equilibrium_analysis(example("graph3")).kernel_rank == 0
    assert kernel_basis(example("graph3")) == []


def test_edgeless_kernel_is_everything():
    g = Multiquiver(["a", "b", "c"], [])
    assert kernel_basis(g) == [{"a": 1}, {"b": 1}, {"c": 1}]


@settings(max_examples=80, deadline=None)
@given(multiquivers())
def test_rank_agrees_and_vectors_in_kernel(g):
    m = incidence_matrix(g)
    basis = kernel_basis(m)
    assert len(basis) == equilibrium_analysis(g).kernel_rank == rational_nullity(m)
    for v in basis:
        assert m.apply(v) == {}
        first = min(v, key=lambda k: g.vertices.index(k))
        assert v[first] > 0


@settings(max_examples=60, deadline=None)
@given(multiquivers())
def test_sign_flip_invariance(g):
    if not g.edges:
        return
    rng = random.Random(len(g.edges))
    flipped = g.with_flipped(rng.choice(g.edge_ids))
    a, b = equilibrium_analysis(g), equilibrium_analysis(flipped)
    assert a.kernel_rank == b.kernel_rank
    assert [c.in_equilibrium for c in a.components] == [c.in_equilibrium for c in b.components]


def test_balanced_cycles_are_in_equilibrium():
    rng = random.Random(7)
    for n in range(2, 7):
        g = random_balanced_cycle(rng, n)
        assert equilibrium_analysis(g).kernel_rank == 1


# acyclicity
def test_is_acyclic_examples():
    assert all(is_acyclic(lie_preset("A~", n)) for n in range(1, 6))
    assert not is_acyclic(example("triangle"))
    parallel = Multiquiver(["a", "b"], [Edge("1", End("a", 1), End("b", 1)), Edge("2", End("b", 1), End("a", 1))])
    assert not is_acyclic(parallel)


def test_shortest_cycle_triangle():
    verts, edges = shortest_cycle(example("triangle"))
    assert set(verts) == {"1", "2", "3"} and set(edges) == {"a", "b", "c"}
    assert shortest_cycle(lie_preset("A~", 3)) is None


def test_components_ignore_edge_directions():
    comps = components(example("graph1"))
    assert sorted(map(tuple, comps)) == [("v1",), ("v2", "v3", "v4")]


def test_random_generator_is_seeded():
    a = [random_multiquiver(random.Random(5)) for _ in range(3)]
    b = [random_multiquiver(random.Random(5)) for _ in range(3)]
    assert a == b
