import itertools
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from surfcross.embedder import Unknown, embeds, is_planar, min_genus
from surfcross.families import complete_graph, gen_hamburger, gen_k5_union
from surfcross.graph import SpecialGraph, Surface, disjoint_union, thick_subgraph
from surfcross.solver import (CrossingConfiguration, CrossingResult, Infeasible, _insertion_bound,
                              _Params, automorphisms, canonical_form, crossing_number,
                              crossing_sequence, enumerate_configurations, euler_lower_bound,
                              insert_crossing, planarize, union_upper_bound)
from surfcross.verify import verify_certificate

from conftest import graph_from_pairs, multigraphs, random_rigid

SURFACES = [Surface(True, 0), Surface(True, 1), Surface(False, 1)]


def _naive_configurations(g, k):
    """Every way to pick ``k`` crossings and order them along each edge."""
    thin = sorted(g.thin_edges)
    pairs = list(itertools.combinations(thin, 2))
    out = set()
    for combo in itertools.combinations_with_replacement(pairs, k):
        on = {e: [i for i, p in enumerate(combo) if e in p] for e in thin}
        per_edge = [list(itertools.permutations(on[e])) for e in thin]
        for orders in itertools.product(*per_edge):
            slot = {}
            for e, order in zip(thin, orders):
                for pos, i in enumerate(order):
                    slot[(i, e)] = (e, pos)
            out.add(CrossingConfiguration.of((slot[(i, a)], slot[(i, b)])
                                             for i, (a, b) in enumerate(combo)))
    return out


def _brute_crossing_number(g, s, limit):
    for k in range(limit + 1):
        for c in enumerate_configurations(g, k):
            if embeds(planarize(g, c).graph, s):
                return k
    return None


# ---------------------------------------------------------------- configurations

def test_h3_has_55_single_crossing_configurations(h3):
    assert len(enumerate_configurations(h3, 1)) == 55


@settings(max_examples=40)
@given(multigraphs(max_vertices=5, max_edges=5), st.integers(0, 2))
def test_enumeration_matches_naive_generator(pairs, k):
    g = graph_from_pairs(pairs, thick={"e0"} if len(pairs) > 3 else ())
    assume(len(g.thin_edges) <= 5)
    assert set(enumerate_configurations(g, k)) == _naive_configurations(g, k)


def test_k5_one_crossing_of_disjoint_edges_is_planar(k5):
    c = CrossingConfiguration.of([(("x0x1", 0), ("x2x3", 0))])
    pg = planarize(k5, c)
    assert is_planar(pg.graph)
    assert len(pg.graph.vertices) == 6
    assert len(pg.graph.edges) == 12


def test_insert_crossing_shifts_later_positions():
    c = CrossingConfiguration.of([(("a", 0), ("b", 0))])
    c2 = insert_crossing(c, ("a", 0), ("c", 0))
    assert c2 == CrossingConfiguration.of([(("a", 1), ("b", 0)), (("a", 0), ("c", 0))])


def test_configuration_list_round_trip():
    c = CrossingConfiguration.of([(("a", 1), ("b", 0)), (("a", 0), ("c", 0))])
    assert CrossingConfiguration.from_list(c.to_list()) == c


# ---------------------------------------------------------------- bounds

def test_euler_lower_bound_values():
    assert euler_lower_bound(complete_graph(5), Surface()) == 1
    assert euler_lower_bound(complete_graph(6), Surface()) == 3
    assert euler_lower_bound(gen_k5_union(3), Surface()) == 0


def test_union_upper_bound_values():
    assert union_upper_bound((3, 2, 0), (0,), 0) == 3
    assert union_upper_bound((1, 0), (1, 0), 1) == 1
    assert union_upper_bound((3, 2, 0), (1, 0), 3) == 0
    assert union_upper_bound((3, 2, 0), (1, 0), 7) == 0
    with pytest.raises(ValueError):
        union_upper_bound((1, 0), (1, 0), -1)


# ---------------------------------------------------------------- exact search

@settings(max_examples=30)
@given(multigraphs(max_vertices=6, max_edges=8, allow_parallel=False), st.sampled_from(SURFACES))
def test_crossing_number_matches_brute_force(pairs, s):
    g = graph_from_pairs(pairs)
    res = crossing_number(g, s)
    assert isinstance(res, CrossingResult)
    assert res.crossings == _brute_crossing_number(g, s, res.crossings)


@settings(max_examples=30)
@given(multigraphs(max_vertices=6, max_edges=9), st.sampled_from(SURFACES), st.integers(0, 10**6))
def test_solution_certificates_verify(pairs, s, seed):
    rng = random.Random(seed)
    g = random_rigid(graph_from_pairs(pairs, thick={"e0"}), rng)
    res = crossing_number(g, s)
    if isinstance(res, Infeasible):
        assert not embeds(thick_subgraph(g), s)
        return
    verdict = verify_certificate(res.certificate.to_dict())
    assert verdict, verdict.reason
    assert verdict.euler_genus <= s.euler_genus


@settings(max_examples=25)
@given(multigraphs(max_vertices=7, max_edges=12, allow_parallel=False), st.integers(0, 1))
def test_euler_lower_bound_is_sound(pairs, h):
    g = graph_from_pairs(pairs)
    s = Surface(True, h)
    res = crossing_number(g, s)
    assert res.crossings >= euler_lower_bound(g, s)


@settings(max_examples=25)
@given(multigraphs(max_vertices=6, max_edges=11), st.booleans())
def test_sequence_decreases_strictly_to_zero(pairs, orientable):
    g = graph_from_pairs(pairs)
    seq = crossing_sequence(g, orientable=orientable)
    gamma = min_genus(g, orientable=orientable).genus
    if not orientable and gamma == 0:
        assert seq.as_tuple() == (0,)
        return
    values = seq.as_tuple()
    assert len(values) == gamma + 1
    assert values[-1] == 0
    assert all(v > 0 for v in values[:-1])
    assert all(a > b for a, b in zip(values, values[1:]))
    for h, r in enumerate(seq.results):
        assert verify_certificate(r.certificate.to_dict())


@settings(max_examples=15)
@given(multigraphs(max_vertices=5, max_edges=7, allow_parallel=False),
       multigraphs(max_vertices=5, max_edges=7, allow_parallel=False), st.integers(0, 2))
def test_union_is_subadditive(p1, p2, i):
    g1, g2 = graph_from_pairs(p1), graph_from_pairs(p2)
    s1, s2 = crossing_sequence(g1), crossing_sequence(g2)
    both = disjoint_union(g1, g2)
    res = crossing_number(both, Surface(True, i))
    assert res.crossings <= union_upper_bound(s1, s2, i)


# ---------------------------------------------------------------- search features

@settings(max_examples=20)
@given(multigraphs(max_vertices=6, max_edges=10, allow_parallel=False), st.sampled_from(SURFACES))
def test_insertion_bound_never_beats_the_optimum(pairs, s):
    g = graph_from_pairs(pairs)
    exact = crossing_number(g, s, heuristic=False).crossings
    p = _Params(s.orientable, s.genus, 10**8, True, False, None, ())
    found = _insertion_bound(g, p)
    if found is not None:
        cfg, emb = found
        assert len(cfg) >= exact
        assert embeds(planarize(g, cfg).graph, s)
    assert crossing_number(g, s).crossings == exact


def test_runs_are_reproducible(h3):
    a = crossing_number(h3, Surface(True, 1))
    b = crossing_number(h3, Surface(True, 1))
    assert a.certificate.to_dict() == b.certificate.to_dict()


def test_canonical_form_is_invariant_under_symmetry(k5):
    autos = automorphisms(k5)
    c1 = CrossingConfiguration.of([(("x0x1", 0), ("x2x3", 0))])
    c2 = CrossingConfiguration.of([(("x1x4", 0), ("x0x2", 0))])
    assert canonical_form(c1, autos) == canonical_form(c2, autos)


def test_thick_nonplanar_core_is_infeasible(k5):
    heavy = SpecialGraph.build(k5.vertices, [(e, u, v) for e, (u, v) in k5.edges],
                               thick=k5.edge_ids)
    res = crossing_number(heavy, Surface(True, 0))
    assert isinstance(res, Infeasible)
    assert isinstance(crossing_number(heavy, Surface(True, 1)), CrossingResult)


def test_time_limit_gives_unknown():
    res = crossing_number(gen_hamburger(5), Surface(True, 0), time_limit=0.0, heuristic=False)
    assert isinstance(res, Unknown)


def test_max_k_caps_the_search():
    res = crossing_number(complete_graph(6), Surface(True, 0), max_k=2, heuristic=False)
    assert isinstance(res, Unknown)


def test_threads_give_the_same_answer():
    g = complete_graph(6)
    one = crossing_number(g, Surface(True, 0), heuristic=False)
    two = crossing_number(g, Surface(True, 0), threads=2, heuristic=False)
    assert one.crossings == two.crossings == 3


@pytest.mark.parametrize("graph,s,value", [
    (complete_graph(5), Surface(True, 0), 1), (complete_graph(6), Surface(True, 0), 3),
    (complete_graph(6), Surface(True, 1), 0), (complete_graph(6), Surface(False, 1), 0),
    (complete_graph(5), Surface(False, 1), 0),
])
def test_known_crossing_numbers(graph, s, value):
    assert crossing_number(graph, s).crossings == value
