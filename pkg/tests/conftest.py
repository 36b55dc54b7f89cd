import itertools
import random

import networkx as nx
import pytest
from hypothesis import strategies as st

from snc_ramify.generate import RandomArrangementConfig, random_complex
from snc_ramify.snc_complex import SncComplex


def arrangement(n, num_vertices, seed, p=0.5):
    rng = random.Random(seed)
    return random_complex(RandomArrangementConfig(n, num_vertices, edge_probability=p), rng)


@st.composite
def complexes(draw, dims=(2, 3, 4, 5), max_vertices=9):
    n = draw(st.sampled_from(dims))
    k = draw(st.integers(1, max_vertices))
    p = draw(st.floats(0.1, 0.9))
    seed = draw(st.integers(0, 2**32 - 1))
    return arrangement(n, k, seed, p)


def graph_of(c: SncComplex) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(c.vertex_ids)
    g.add_edges_from(tuple(e) for e in c.edges)
    return g


def has_odd_cycle(c: SncComplex) -> bool:
    return not nx.is_bipartite(graph_of(c))


def brute_force_solve(A, b, r, cols):
    for x in itertools.product(range(r), repeat=cols):
        if all((sum(a * xi for a, xi in zip(row, x)) - bi) % r == 0 for row, bi in zip(A, b)):
            return x
    return None


def closure(facets):
    out = set()
    for f in facets:
        for k in range(1, len(f) + 1):
            out.update(frozenset(s) for s in itertools.combinations(f, k))
    return out


@pytest.fixture
def triangle3():
    return SncComplex.from_facets(3, "abc", [("a", "b", "c")])


@pytest.fixture
def k4_boundary():
    return SncComplex.from_facets(
        3, "abcd", [("a", "b", "c"), ("a", "b", "d"), ("a", "c", "d"), ("b", "c", "d")]
    )


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def report(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(ACCEPTANCE_LINES[criterion])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
