import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfcross import _facedp
from surfcross._planarity import is_planar_simple
from surfcross.embedder import (RotationSystem, Unknown, _Component, _wheel_graph, embeds,
                                enumerate_rotation_systems, euler_genus_of, is_embeddable,
                                is_orientable_embedding, is_planar, min_genus, rigid_respected,
                                trace_faces)
from surfcross.families import complete_graph
from surfcross.graph import SpecialGraph, Surface

from conftest import graph_from_pairs, multigraphs, nx_to_special, random_rigid, rotation_count


def _naive_genus(g, signed=False):
    """Brute force over every rotation system (and signature)."""
    best = None
    for r in enumerate_rotation_systems(g, signed=signed):
        if signed and is_orientable_embedding(g, r):
            continue
        eg = euler_genus_of(g, r)
        best = eg if best is None else min(best, eg)
    return best


def _random_rotation(g, rng, signed):
    rot = {}
    for v, ends in g.graph.incident().items():
        ends = list(ends)
        rng.shuffle(ends)
        rot[v] = tuple(ends)
    sig = {e: rng.choice((1, -1)) if signed else 1 for e in g.edge_ids}
    return RotationSystem(rot, sig)


def _random_multigraph(rng, n, m):
    pairs = [(rng.randrange(v), v) for v in range(1, n)]
    while len(pairs) < m:
        a, b = rng.sample(range(n), 2)
        pairs.append((a, b))
    return graph_from_pairs(pairs)


# ---------------------------------------------------------------- face tracing

def test_face_sum_on_random_rotation_systems():
    rng = random.Random(7)
    for trial in range(1000):
        n = rng.randint(2, 8)
        g = _random_multigraph(rng, n, rng.randint(n - 1, 14))
        r = _random_rotation(g, rng, signed=trial % 2 == 1)
        faces = trace_faces(g, r)
        assert faces.total_length() == 2 * len(g.edges)
        eg = euler_genus_of(g, r)
        assert eg >= 0
        if is_orientable_embedding(g, r):
            assert eg % 2 == 0


def test_planar_rotation_of_k4_has_four_faces():
    g = complete_graph(4)
    res = min_genus(g)
    assert res.genus == 0
    assert trace_faces(g, res.certificate.rotation_system).count == 4


# ---------------------------------------------------------------- minimum genus

def _connected_up_to_8_edges():
    """Every connected graph with 1..8 edges, up to isomorphism."""
    for h in nx.graph_atlas_g()[1:]:
        if 0 < h.number_of_edges() <= 8 and nx.is_connected(h):
            yield h
    # the atlas stops at 7 vertices: add trees on 8 and 9 vertices and
    # the unicyclic graphs on 8
    yield from nx.nonisomorphic_trees(8)
    yield from nx.nonisomorphic_trees(9)
    seen = []
    for t in nx.nonisomorphic_trees(8):
        for u, v in nx.non_edges(t):
            h = t.copy()
            h.add_edge(u, v)
            if not any(nx.is_isomorphic(h, x) for x in seen):
                seen.append(h)
    yield from seen


def test_min_genus_matches_enumeration_on_all_small_connected_graphs():
    checked = 0
    for h in _connected_up_to_8_edges():
        g = nx_to_special(h)
        res = min_genus(g)
        assert 2 * res.genus == _naive_genus(g), sorted(h.edges())
        assert euler_genus_of(g, res.certificate.rotation_system) == 2 * res.genus
        checked += 1
    assert checked == 358


def test_min_genus_matches_enumeration_on_random_graphs():
    rng = random.Random(11)
    done = 0
    while done < 100:
        n = rng.randint(3, 7)
        g = _random_multigraph(rng, n, rng.randint(n - 1, 10))
        if rng.random() < 0.3:
            g = random_rigid(g, rng)
        if rotation_count(g) > 4000:
            continue
        res = min_genus(g)
        assert 2 * res.genus == _naive_genus(g)
        r = res.certificate.rotation_system
        assert not rigid_respected(g, r)
        assert euler_genus_of(g, r) == 2 * res.genus
        done += 1


@settings(max_examples=40)
@given(multigraphs(max_vertices=5, max_edges=6))
def test_crosscap_number_matches_signed_enumeration(pairs):
    g = graph_from_pairs(pairs)
    if rotation_count(g) * 2 ** len(g.edges) > 20000:
        return
    res = min_genus(g, orientable=False)
    naive = _naive_genus(g, signed=True)
    if res.genus == 0:
        assert is_planar(g)
    else:
        assert res.genus == naive
        assert euler_genus_of(g, res.certificate.rotation_system) == res.genus
        assert not is_orientable_embedding(g, res.certificate.rotation_system)


@pytest.mark.parametrize("graph,orientable,genus", [
    (complete_graph(5), True, 1), (complete_graph(6), True, 1),
    (nx_to_special(nx.complete_bipartite_graph(4, 4)), True, 1),
    (nx_to_special(nx.complete_bipartite_graph(3, 3)), True, 1),
    (nx_to_special(nx.petersen_graph()), True, 1),
    (complete_graph(5), False, 1), (complete_graph(6), False, 1),
    (nx_to_special(nx.petersen_graph()), False, 1),
])
def test_known_genera(graph, orientable, genus):
    assert min_genus(graph, orientable=orientable).genus == genus


def test_parallel_edges_do_not_change_genus():
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert min_genus(graph_from_pairs(k4 + k4)).genus == 0
    tri = [(0, 1), (1, 2), (0, 2)] * 2
    assert min_genus(graph_from_pairs(tri)).genus == 0
    assert min_genus(graph_from_pairs(tri), orientable=False).genus == 0


def test_tiny_budget_gives_unknown():
    res = min_genus(complete_graph(7), budget=10)
    assert isinstance(res, Unknown)
    assert not res


# ---------------------------------------------------------------- planarity

@settings(max_examples=300)
@given(st.integers(4, 14), st.floats(0.1, 0.9), st.integers(0, 10**6))
def test_compiled_planarity_agrees_with_networkx(n, p, seed):
    h = nx.gnp_random_graph(n, p, seed=seed)
    edges = [tuple(e) for e in h.edges()]
    assert is_planar_simple(n, edges) == nx.check_planarity(h)[0]


@settings(max_examples=60)
@given(multigraphs(max_vertices=7, max_edges=11))
def test_is_planar_agrees_with_wheel_oracle(pairs):
    rng = random.Random(len(pairs))
    g = random_rigid(graph_from_pairs(pairs), rng, count=2)
    assert is_planar(g) == nx.check_planarity(_wheel_graph(g))[0]
    assert is_planar(g) == (min_genus(g).genus == 0)


# ---------------------------------------------------------------- decision version

@settings(max_examples=60)
@given(multigraphs(max_vertices=6, max_edges=11), st.booleans(), st.integers(0, 2))
def test_embeds_agrees_with_is_embeddable(pairs, orientable, extra):
    g = graph_from_pairs(pairs)
    genus = extra + (0 if orientable else 1)
    s = Surface(orientable, genus)
    decision = embeds(g, s)
    cert = is_embeddable(g, s)
    assert decision == (cert is not None)
    if cert is not None:
        eg = euler_genus_of(g, cert.rotation_system)
        assert eg <= s.euler_genus


def test_disconnected_graphs_add_genera():
    k5 = complete_graph(5, "a")
    from surfcross.graph import disjoint_union
    two = disjoint_union(k5, complete_graph(5, "b"))
    assert min_genus(two).genus == 2
    assert not embeds(two, Surface(True, 1))
    assert embeds(two, Surface(True, 2))
    assert min_genus(two, orientable=False).genus == 2


# ---------------------------------------------------------------- engines

@settings(max_examples=40)
@given(multigraphs(max_vertices=6, max_edges=10), st.booleans())
def test_compiled_sweep_matches_reference(pairs, signed):
    g = graph_from_pairs(pairs)
    comp = _Component(g, list(g.vertices))
    a = _facedp.max_cycles(comp.core, signed=signed, witness=False, engine="jit")
    b = _facedp.max_cycles(comp.core, signed=signed, witness=False, engine="py")
    assert a.best == b.best
