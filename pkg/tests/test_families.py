import pytest

from surfcross.embedder import embeds, min_genus
from surfcross.families import (FamilySpec, complete_graph, gen_hamburger, gen_hamburger_plus,
                                gen_hamburger_wide, gen_k5_union)
from surfcross.graph import Surface, components, induced, validate_graph
from surfcross.solver import crossing_number, crossing_sequence


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_hamburger_counts(n):
    g = gen_hamburger(n)
    assert not validate_graph(g)
    assert len(g.vertices) == 3 * n + 8
    assert len(g.edges) == 5 * n + 12
    assert len(g.thick) == 2 * n + 10
    assert len(g.rigid) == n
    assert all(len(pi) == 4 for pi in g.rigid.values())


def test_wide_adds_columns():
    base, wide = gen_hamburger(3), gen_hamburger_wide(3, 2)
    assert len(wide.rigid) == len(base.rigid) + 2
    assert len(wide.thin_edges) == len(base.thin_edges) + 6
    assert len(wide.vertices) == len(base.vertices) + 2
    assert gen_hamburger_wide(3, 0) == base


def test_plus_is_valid():
    g = gen_hamburger_plus()
    assert not validate_graph(g)
    assert min_genus(g).genus == 2


def test_k5_union_shape():
    g = gen_k5_union(3)
    parts = components(g)
    assert len(parts) == 2
    g2 = induced(g, next(p for p in parts if p[0].startswith("G2")))
    assert len(g2.edges) == 19
    assert not g.is_simple()


@pytest.mark.parametrize("spec", [
    dict(name="hamburger", n=2), dict(name="hamburger_wide", n=3, k=-1),
    dict(name="k5_union", a=1), dict(name="nope", n=3), dict(name="complete", n=0)])
def test_family_spec_rejects(spec):
    with pytest.raises(ValueError):
        FamilySpec(**spec)


def test_family_spec_builds():
    assert FamilySpec("hamburger", n=3).build() == gen_hamburger(3)
    assert FamilySpec("k5_union", a=2).build() == gen_k5_union(2)
    assert len(FamilySpec("complete", n=4).build().edges) == 6


@pytest.mark.parametrize("graph,s,value", [
    (gen_hamburger(3), Surface(True, 1), 2),
    (gen_hamburger(3), Surface(True, 2), 0),
    (gen_hamburger(4), Surface(True, 1), 2),
])
def test_family_crossing_numbers(graph, s, value):
    assert crossing_number(graph, s).crossings == value


def test_k4_sequence_is_zero():
    assert crossing_sequence(complete_graph(4)).as_tuple() == (0,)


def test_k6_fits_on_torus():
    assert embeds(complete_graph(6), Surface(True, 1))
    assert not embeds(complete_graph(6), Surface(True, 0))
