import random

import pytest
from hypothesis import strategies as st

from gbs.graphs import graph_from_edges


def small_connected_graph(rng: random.Random, max_vertices=4, max_extra=2, max_label=9):
    """Random small connected labelled graph (tree plus a few extra edges)."""
    n = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(n)]
    rows = []

    def lab():
        v = rng.randint(1, max_label)
        return v if rng.random() < 0.8 else -v

    for i in range(1, n):
        rows.append((f"e{i - 1}", vertices[rng.randrange(i)], vertices[i], lab(), lab()))
    for j in range(rng.randint(0, max_extra)):
        a, b = rng.choice(vertices), rng.choice(vertices)
        rows.append((f"x{j}", a, b, lab(), lab()))
    return graph_from_edges(rows, extra_vertices=vertices)


@pytest.fixture
def rng():
    return random.Random(0xB5CF)


@st.composite
def graphs(draw, max_vertices=4, max_extra=2, max_label=9):
    seed = draw(st.integers(min_value=0, max_value=2**30))
    return small_connected_graph(
        random.Random(seed), max_vertices=max_vertices, max_extra=max_extra, max_label=max_label
    )


def random_letters(rng: random.Random, pres, length=4, max_exp=4):
    gens = pres.generators()
    out = []
    for _ in range(rng.randint(1, length)):
        kind, name = rng.choice(gens)
        exp = rng.randint(-max_exp, max_exp) or 1
        out.append((kind, name, exp))
    return tuple(out)
