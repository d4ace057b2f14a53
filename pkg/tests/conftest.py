import numpy as np
import pytest
from hypothesis import strategies as st

from gluedwalk.graph import Graph


@st.composite
def graphs(draw, max_vertices=12, connected=False):
    v = draw(st.integers(min_value=2 if connected else 1, max_value=max_vertices))
    pairs = [(a, b) for a in range(v) for b in range(a + 1, v)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if connected:
        # a random spanning path guarantees connectivity
        perm = draw(st.permutations(range(v)))
        path = {tuple(sorted(p)) for p in zip(perm, perm[1:])}
        chosen = sorted(set(chosen) | path)
    flip = draw(st.lists(st.booleans(), min_size=len(chosen), max_size=len(chosen)))
    edges = tuple((b, a) if f else (a, b) for (a, b), f in zip(chosen, flip))
    return Graph(v, edges)


@pytest.fixture
def two_vertex():
    return Graph(2, ((0, 1),))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for name in sorted(RESULTS, key=lambda k: int(k.split()[0])):
            terminalreporter.write_line(RESULTS[name])
