import itertools
import os
import random

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from surfcross.graph import EdgeEnd, SpecialGraph

settings.register_profile("default", deadline=None, print_blob=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def graph_from_pairs(pairs, thick=(), rigid=None, prefix="e"):
    """SpecialGraph on the integers used in ``pairs``; edge ``i`` is ``e<i>``."""
    verts = sorted({x for p in pairs for x in p})
    names = {v: f"v{v}" for v in verts}
    edges = [(f"{prefix}{i}", names[u], names[v]) for i, (u, v) in enumerate(pairs)]
    return SpecialGraph.build([names[v] for v in verts], edges, thick, rigid or {})


def nx_to_special(h: nx.Graph) -> SpecialGraph:
    return graph_from_pairs(sorted(tuple(sorted(e)) for e in h.edges()))


@st.composite
def multigraphs(draw, max_vertices=6, max_edges=8, connected=True, allow_parallel=True):
    """Loopless multigraphs as lists of integer pairs."""
    n = draw(st.integers(2, max_vertices))
    pairs = list(itertools.combinations(range(n), 2))
    m = draw(st.integers(1, max_edges))
    if allow_parallel:
        chosen = draw(st.lists(st.sampled_from(pairs), min_size=m, max_size=m))
    else:
        chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=min(m, len(pairs)),
                               unique=True))
    if connected:
        # hook every vertex onto a random tree so the graph is connected
        tree = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
        chosen = tree + [p for p in chosen if p not in tree or allow_parallel]
        chosen = chosen[:max(max_edges, n - 1)]
    return chosen


def rotation_count(g: SpecialGraph) -> int:
    total = 1
    for v, ends in g.graph.incident().items():
        d = len(ends)
        if v in g.rigid and d >= 4:
            total *= 2
        elif d > 2:
            total *= _fact(d - 1)
    return total


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def random_rigid(g: SpecialGraph, rng: random.Random, count: int = 1) -> SpecialGraph:
    """Mark up to ``count`` vertices of degree >= 4 rigid with a random order."""
    inc = g.graph.incident()
    cand = sorted(v for v, ends in inc.items() if len(ends) >= 4)
    rng.shuffle(cand)
    rigid = {}
    for v in cand[:count]:
        ends = list(inc[v])
        rng.shuffle(ends)
        rigid[v] = tuple(ends)
    return SpecialGraph.build(g.vertices, [(e, u, v) for e, (u, v) in g.edges], g.thick, rigid)


@pytest.fixture(scope="session")
def k5():
    from surfcross.families import complete_graph
    return complete_graph(5)


@pytest.fixture(scope="session")
def h3():
    from surfcross.families import gen_hamburger
    return gen_hamburger(3)


ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def acceptance(request):
    """Criterion number -> (passed, detail); printed in the terminal summary."""
    return request.config.stash.setdefault(ACCEPTANCE_KEY, {})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = config.stash.get(ACCEPTANCE_KEY, None)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(rows):
        ok, detail = rows[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
