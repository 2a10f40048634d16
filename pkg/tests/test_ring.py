import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import multiquivers
from tgw.cartan import lie_preset
from tgw.catalog import example
from tgw.graph import Multiquiver, incidence_matrix
from tgw.poly import Poly, u
from tgw.ring import (
    TGWDatum,
    build_t,
    consistency_check,
    difference_power,
    euler_operator,
    euler_reduce,
    shift_apply,
)

U = u("")


def test_shift_apply_a2():
    g = example("a2")
    assert shift_apply({"v1": 1}, U, g) == U + 1
    assert shift_apply({"v2": 1}, U, g) == U - 1
    assert shift_apply({}, U * U + 3, g) == U * U + 3


def test_shift_apply_unknowns():
    g = example("a2")
    with pytest.raises(KeyError):
        shift_apply({"v1": 1}, u("zz"), g)
    with pytest.raises(KeyError):
        shift_apply({"nope": 1}, U, g)


@settings(max_examples=50, deadline=None)
@given(multiquivers(max_vertices=4, max_edges=5), st.integers(-3, 3), st.integers(-3, 3))
def test_shift_is_group_action(g, a, b):
    if not g.edge_ids:
        return
    m = incidence_matrix(g)
    p = Poly.const(1)
    for e in g.edge_ids:
        p = p * (u(e) + 2) * u(e)
    v, w = g.vertices[0], g.vertices[-1]
    d1, d2 = {v: a}, {w: b}
    both = {v: a + b} if v == w else {v: a, w: b}
    assert shift_apply(both, p, m) == shift_apply(d1, shift_apply(d2, p, m), m)
    assert shift_apply({v: -a}, shift_apply(d1, p, m), m) == p


def test_build_t_examples():
    a2 = example("a2")
    assert build_t(a2, "v1") == U - 1
    assert build_t(a2, "v2") == U
    e2, e3 = u("e2"), u("e3")
    assert build_t(example("graph1"), "v3") == e2 * (e2 + 1) * (e2 + 2) * (e3 - 1)
    assert build_t(example("graph1"), "v1") == 1
    with pytest.raises(KeyError):
        build_t(a2, "v9")


def test_datum_mu_is_one():
    d = TGWDatum.of(example("triangle"))
    assert d.mu("1", "2") == 1
    assert d.sigma_v("1", u("a")) == u("a") + 2


def test_consistency_examples():
    assert consistency_check(example("a2")).passed
    assert consistency_check(Multiquiver(["v"], [])).passed
    rep = consistency_check(example("triangle"))
    assert rep.passed and len(rep.pair_residuals) == 3 and len(rep.triple_residuals) == 3


@settings(max_examples=40, deadline=None)
@given(multiquivers())
def test_consistency_on_random(g):
    assert consistency_check(g).passed


@settings(max_examples=15, deadline=None)
@given(multiquivers(max_vertices=4, max_edges=5, max_mult=3))
def test_consistency_expanded_route(g):
    a, b = consistency_check(g), consistency_check(g, expand=True)
    assert a.passed and b.passed
    assert set(a.pair_residuals) == set(b.pair_residuals)


def test_difference_power_examples():
    a2 = example("a2")
    assert difference_power("v1", 1, build_t(a2, "v2"), a2) == 1
    assert difference_power("v1", 2, build_t(a2, "v2"), a2) == 0
    assert difference_power("v1", 0, U * U, a2) == U * U
    c2 = lie_preset("C~", 2)
    t2 = build_t(c2, "2")
    assert difference_power("1", 2, t2, c2) != 0
    assert difference_power("1", 3, t2, c2) == 0
    with pytest.raises(ValueError):
        difference_power("v1", -1, U, a2)


@settings(max_examples=40, deadline=None)
@given(multiquivers(max_vertices=4, max_edges=6, max_mult=3))
def test_difference_power_nilpotency_order(g):
    m = incidence_matrix(g)
    for v in g.vertices:
        col = m.column(v)
        for j in g.vertices:
            if j == v:
                continue
            n = sum(abs(m[(e, j)]) for e in col)
            t = build_t(g, j)
            assert difference_power(v, n + 1, t, m) == 0
            assert difference_power(v, n, t, m) != 0


def test_difference_commutes_with_sigma():
    g = example("triangle")
    d = TGWDatum.of(g)
    p = build_t(g, "2")
    assert difference_power("1", 2, d.sigma_v("1", p), g) == d.sigma_v("1", difference_power("1", 2, p, g))


def test_euler_reduce_examples():
    u1, u2, u3 = u("1"), u("2"), u("3")
    assert euler_reduce(u2, 1, 0) == 2 - u1
    assert euler_reduce(u1 * u1, 1, 5) == u1 * u1
    E = euler_operator(["1", "2", "3"])
    assert euler_reduce(E, 2, 1) == 1
    with pytest.raises(ValueError):
        euler_reduce(u("7"), 2, 0)
    p, q = u1 * u3 + 2, u3 * u3 - u2
    assert euler_reduce(p * q, 2, 3) == euler_reduce(euler_reduce(p, 2, 3) * euler_reduce(q, 2, 3), 2, 3)
