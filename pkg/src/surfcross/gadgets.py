"""Reductions from special graphs to ordinary simple graphs.

Thick edges become bundles of parallel 2-paths, heavy enough that crossing
them never pays.  Rigid vertices are caged: nested thick cycles around the
vertex, met by the incident edges in the prescribed cyclic order, so any
cheap drawing has to keep that order up to reflection.
"""
from __future__ import annotations

from typing import Callable, Mapping

from .graph import EdgeEnd, GraphError, SpecialGraph, check_graph


def cage_depth(g_max: int) -> int:
    """Number of nested cycles that protects a rotation up to Euler genus ``g_max``."""
    if g_max < 0:
        raise ValueError("g_max must be non-negative")
    return 3 * g_max + 2


def default_weights(g: SpecialGraph, bound: int) -> dict[str, int]:
    """1 on thin edges, ``bound + 1`` on thick ones."""
    if bound < 0:
        raise ValueError("the crossing bound must be non-negative")
    return {e: (bound + 1 if e in g.thick else 1) for e in g.edge_ids}


def _fresh(name: str, taken: set[str]) -> str:
    if name in taken:
        raise GraphError(f"generated id {name!r} collides with an existing id")
    taken.add(name)
    return name


def expand_thick(g: SpecialGraph, weight: Mapping[str, int] | Callable[[str], int] | None = None,
                 bound: int | None = None) -> SpecialGraph:
    """Replace every edge of weight ``w > 1`` by ``w`` internally disjoint 2-paths.

    Pass explicit weights, or ``bound`` for the default policy.  Bundle
    paths are named ``<e>/<i>.0`` and ``<e>/<i>.1`` through the middle vertex
    ``<e>/<i>``.  Around a rigid end the bundle takes the edge's place, in
    order at the first end and reversed at the second, so the bundle itself
    is drawn without crossings.  The result has no thick edges.
    """
    if weight is None:
        if bound is None:
            raise ValueError("give either weights or a crossing bound")
        weight = default_weights(g, bound)
    w_of = weight if callable(weight) else (lambda e: weight.get(e, 1))
    taken_v = set(g.vertices)
    taken_e = set(g.edge_ids)
    vertices = list(g.vertices)
    edges = []
    replace: dict[EdgeEnd, list[EdgeEnd]] = {}
    for e, (u, v) in g.edges:
        w = int(w_of(e))
        if w < 1:
            raise ValueError(f"weight of {e!r} must be positive, got {w}")
        if w == 1:
            edges.append((e, u, v))
            continue
        taken_e.discard(e)
        firsts, seconds = [], []
        for i in range(w):
            m = _fresh(f"{e}/{i}", taken_v)
            vertices.append(m)
            a = _fresh(f"{e}/{i}.0", taken_e)
            b = _fresh(f"{e}/{i}.1", taken_e)
            edges += [(a, u, m), (b, m, v)]
            firsts.append(EdgeEnd(a, 0))
            seconds.append(EdgeEnd(b, 1))
        replace[EdgeEnd(e, 0)] = firsts
        replace[EdgeEnd(e, 1)] = list(reversed(seconds))
    rigid = {}
    for v, pi in g.rigid.items():
        rot = []
        for x in pi:
            rot.extend(replace.get(x, [x]))
        rigid[v] = rot
    return check_graph(SpecialGraph.build(vertices, edges, (), rigid))


def expand_rigid(g: SpecialGraph, g_max: int = 0, n: int | None = None) -> SpecialGraph:
    """Cage every rigid vertex of degree at least 4 and drop all rigid markings.

    ``n`` overrides the cage depth (default ``3 * g_max + 2``).  The cage
    around ``v`` has vertices ``v/<j>.<i>`` (end ``j`` of the rotation,
    cycle ``i`` counted outwards); its cycle edges ``v/c<i>.<j>`` are thick,
    and the incident edge ``j`` is cut into ``v/<j>.s<i>`` segments that keep
    the original thickness.  Degree-3 rotations are fixed up to reflection
    anyway, so those vertices are only unmarked.
    """
    depth = cage_depth(g_max) if n is None else n
    if depth < 1:
        raise ValueError("cage depth must be at least 1")
    taken_v = set(g.vertices)
    taken_e = set(g.edge_ids)
    vertices = list(g.vertices)
    # which ends are caged, and the segment chain each one turns into
    chains: dict[EdgeEnd, tuple[list[str], str]] = {}
    extra_edges = []
    thick = set(g.thick)
    for v, pi in sorted(g.rigid.items()):
        d = len(pi)
        if d < 4:
            continue
        ring = [[_fresh(f"{v}/{j}.{i}", taken_v) for i in range(1, depth + 1)] for j in range(d)]
        for col in ring:
            vertices.extend(col)
        for i in range(depth):
            for j in range(d):
                c = _fresh(f"{v}/c{i + 1}.{j}", taken_e)
                extra_edges.append((c, ring[j][i], ring[(j + 1) % d][i]))
                thick.add(c)
        for j, x in enumerate(pi):
            e = x.edge
            path = [v] + ring[j]
            segs = []
            for i in range(depth):
                s = _fresh(f"{v}/{j}.s{i}", taken_e)
                extra_edges.append((s, path[i], path[i + 1]))
                if e in g.thick:
                    thick.add(s)
                segs.append(s)
            chains[x] = (segs, ring[j][-1])
    edges = []
    for e, (u, w) in g.edges:
        a, b = u, w
        c0, c1 = chains.get(EdgeEnd(e, 0)), chains.get(EdgeEnd(e, 1))
        if c0:
            a = c0[1]
        if c1:
            b = c1[1]
        if a == b:
            raise GraphError(f"caging would turn {e!r} into a loop")
        edges.append((e, a, b))
    out = SpecialGraph.build(vertices, edges + extra_edges, thick, {})
    return check_graph(out)


def to_simple(g: SpecialGraph, g_max: int = 0, bound: int | None = None,
              n: int | None = None) -> SpecialGraph:
    """Plain simple graph with the same crossing numbers up to Euler genus ``g_max``.

    ``bound`` must be an upper bound on the crossing number on the sphere;
    it defaults to ``E**2``.  ``n`` overrides the cage depth.
    """
    if bound is None:
        bound = len(g.edges) ** 2
    caged = expand_rigid(g, g_max=g_max, n=n)
    heavy = expand_thick(caged, bound=bound)
    return _split_parallels(heavy)


def _split_parallels(g: SpecialGraph) -> SpecialGraph:
    """Subdivide all but one edge of every parallel class once."""
    seen = set()
    split = []
    for e, (u, v) in sorted(g.edges):
        key = frozenset((u, v))
        if key in seen:
            split.append(e)
        seen.add(key)
    if not split:
        return g
    taken_v = set(g.vertices)
    taken_e = set(g.edge_ids)
    vertices = list(g.vertices)
    edges = []
    for e, (u, v) in g.edges:
        if e not in split:
            edges.append((e, u, v))
            continue
        m = _fresh(f"{e}/m", taken_v)
        vertices.append(m)
        taken_e.discard(e)
        edges += [(_fresh(f"{e}/a", taken_e), u, m), (_fresh(f"{e}/b", taken_e), m, v)]
    return check_graph(SpecialGraph.build(vertices, edges, (), {}))
