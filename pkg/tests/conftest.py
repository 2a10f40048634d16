import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from tgw.graph import random_multiquiver
from tgw.poly import Poly, u
from tgw.weyl import WeylElement

# fixed example sets: same inputs and run time on every invocation
settings.register_profile("fixed", derandomize=True, print_blob=True)
settings.load_profile("fixed")

EDGES = ["a", "b", "c"]


@st.composite
def polys(draw, edges=EDGES, max_terms=4, max_exp=3):
    p = Poly()
    for _ in range(draw(st.integers(0, max_terms))):
        c = draw(st.integers(-4, 4))
        mono = Poly.const(c)
        for e in edges:
            mono = mono * u(e) ** draw(st.integers(0, max_exp))
        p = p + mono
    return p


@st.composite
def weyl_elements(draw, edges=EDGES, max_deg=4):
    w = WeylElement()
    for _ in range(draw(st.integers(1, 3))):
        chosen = draw(st.lists(st.sampled_from(edges), unique=True, max_size=3))
        deg = {e: draw(st.integers(-max_deg, max_deg)) for e in chosen}
        w = w + WeylElement.z(deg, draw(polys(edges=chosen or edges[:1], max_terms=2, max_exp=1)))
    return w


@st.composite
def multiquivers(draw, **kw):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_multiquiver(random.Random(seed), **kw)


@pytest.fixture
def rng():
    return random.Random(12345)
