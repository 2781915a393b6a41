"""Rotation systems, face tracing and exact minimum genus.

A rotation system gives every vertex a cyclic order of its edge-ends and
every edge a signature in {+1, -1}.  Faces are traced with the usual rule:
arrive at a vertex, move to the next end in the current local direction,
flip the direction when an edge with signature -1 is traversed.

Minimum genus is exact.  Rigid vertices use their prescribed rotation or
its reversal; all other vertices range over every cyclic order.
Disconnected graphs are handled componentwise: orientable genera add; for
nonorientable surfaces Euler genera add, plus one crosscap when no
component can realise its Euler genus nonorientably.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

import networkx as nx

from . import _facedp
from ._planarity import is_planar_simple
from .graph import (EdgeEnd, GraphError, MultiGraph, SpecialGraph, Surface, components,
                    induced, same_cyclic_order, validate_graph)

DEFAULT_BUDGET = 10**9


class Unknown:
    """Search budget exhausted before the question was settled."""

    def __init__(self, reason: str = "budget exhausted", bound: int | None = None):
        self.reason = reason
        self.bound = bound

    def __repr__(self):
        return f"Unknown({self.reason!r}, bound={self.bound})"

    def __bool__(self):
        return False


@dataclass
class RotationSystem:
    rotation: dict[str, tuple[EdgeEnd, ...]]
    signature: dict[str, int] = field(default_factory=dict)

    def sign(self, eid: str) -> int:
        return self.signature.get(eid, 1)

    def is_all_positive(self) -> bool:
        return all(s == 1 for s in self.signature.values())

    def to_dict(self) -> dict:
        return {
            "rotation": {v: [str(x) for x in rot] for v, rot in sorted(self.rotation.items())},
            "signature": {e: s for e, s in sorted(self.signature.items())},
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "RotationSystem":
        rot = {str(v): tuple(EdgeEnd.parse(x) for x in r) for v, r in d["rotation"].items()}
        sig = {str(e): int(s) for e, s in d.get("signature", {}).items()}
        for e, s in sig.items():
            if s not in (1, -1):
                raise GraphError(f"signature of {e!r} must be +1 or -1")
        return cls(rot, sig)


@dataclass
class FaceSet:
    walks: list[list[tuple[EdgeEnd, int]]]

    @property
    def count(self) -> int:
        return len(self.walks)

    def total_length(self) -> int:
        return sum(len(w) for w in self.walks)


@dataclass
class EmbeddingCertificate:
    rotation_system: RotationSystem
    surface: Surface

    def to_dict(self) -> dict:
        d = {"surface": self.surface.to_dict()}
        d.update(self.rotation_system.to_dict())
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "EmbeddingCertificate":
        return cls(RotationSystem.from_dict(d), Surface.from_dict(d["surface"]))


@dataclass
class GenusResult:
    genus: int
    certificate: EmbeddingCertificate
    orientable: bool


# ----------------------------------------------------------------------------
# face tracing
# ----------------------------------------------------------------------------

def _graph_of(g) -> MultiGraph:
    return g.graph if isinstance(g, SpecialGraph) else g


def _check_rotation(mg: MultiGraph, r: RotationSystem):
    inc = mg.incident()
    for v, ends in inc.items():
        rot = r.rotation.get(v, ())
        if len(set(rot)) != len(rot):
            raise GraphError(f"rotation at {v!r} repeats an end")
        if set(rot) != set(ends):
            raise GraphError(f"rotation at {v!r} does not list exactly its incident ends")
    extra = set(r.rotation) - set(inc)
    if extra:
        raise GraphError(f"rotation given for unknown vertices {sorted(extra)}")


def trace_faces(g, r: RotationSystem) -> FaceSet:
    """All facial walks of ``r``; each walk is a list of ``(leaving end, direction)``.

    Walks are returned sorted by their least element, each one rotated to
    start there.
    """
    mg = _graph_of(g)
    _check_rotation(mg, r)
    succ, pred = {}, {}
    for rot in r.rotation.values():
        k = len(rot)
        for i, x in enumerate(rot):
            succ[x] = rot[(i + 1) % k]
            pred[x] = rot[(i - 1) % k]

    def step(el):
        end, d = el
        arrive = end.other()
        d2 = d * r.sign(end.edge)
        return (succ[arrive] if d2 == 1 else pred[arrive], d2)

    def reverse(el):
        end, d = el
        return (end.other(), -d * r.sign(end.edge))

    elements = [(EdgeEnd(e, i), d) for e, _ in mg.edges for i in (0, 1) for d in (1, -1)]
    orbit_of = {}
    orbits = []
    for el in sorted(elements, key=_el_key):
        if el in orbit_of:
            continue
        walk = []
        cur = el
        while cur not in orbit_of:
            orbit_of[cur] = len(orbits)
            walk.append(cur)
            cur = step(cur)
        orbits.append(walk)
    # each face shows up as two orbits, one per traversal direction
    chosen = []
    taken = set()
    for i, walk in enumerate(orbits):
        if i in taken:
            continue
        j = orbit_of[reverse(walk[0])]
        taken.update((i, j))
        chosen.append(walk)
    walks = []
    for w in chosen:
        k = min(range(len(w)), key=lambda i: _el_key(w[i]))
        walks.append(w[k:] + w[:k])
    walks.sort(key=lambda w: _el_key(w[0]))
    return FaceSet(walks)


def _el_key(el):
    end, d = el
    return (end.edge, end.end, -d)


def euler_genus_of(g, r: RotationSystem) -> int:
    """``sum(2 - V + E - F)`` over connected components (isolated vertices ignored)."""
    sg = g if isinstance(g, SpecialGraph) else SpecialGraph(g)
    faces = trace_faces(sg, r)
    comp_of = {}
    comps = [c for c in components(sg) if len(c) > 1 or sg.graph.degree(c[0]) > 0]
    for i, c in enumerate(comps):
        for v in c:
            comp_of[v] = i
    ends = sg.graph.edge_ends
    tally = [[0, 0, 0] for _ in comps]
    for i, c in enumerate(comps):
        tally[i][0] = len(c)
    for e, (u, _) in sg.edges:
        tally[comp_of[u]][1] += 1
    for w in faces.walks:
        u = ends[w[0][0].edge][0]
        tally[comp_of[u]][2] += 1
    return sum(2 - v + e - f for v, e, f in tally)


def _spanning_forest(mg: MultiGraph):
    adj = {v: [] for v in mg.vertices}
    for e, (u, v) in mg.edges:
        adj[u].append((v, e))
        adj[v].append((u, e))
    parent = {}
    tree = set()
    for root in mg.vertices:
        if root in parent:
            continue
        parent[root] = None
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, e in adj[x]:
                if y not in parent:
                    parent[y] = (x, e)
                    tree.add(e)
                    queue.append(y)
    return parent, tree


def normalize_signature(g, r: RotationSystem) -> RotationSystem:
    """Flip vertices so every spanning-tree edge gets signature +1.

    The result describes the same embedding; it is orientable exactly when
    every signature is +1.
    """
    mg = _graph_of(g)
    if len([c for c in components(SpecialGraph(mg))]) > 1:
        raise GraphError("normalize_signature needs a connected graph")
    parent, tree = _spanning_forest(mg)
    flip = {}
    for v in _bfs_order(parent):
        p = parent[v]
        if p is None:
            flip[v] = 1
        else:
            x, e = p
            flip[v] = flip[x] * r.sign(e)
    rot = {}
    for v, ends in r.rotation.items():
        rot[v] = tuple(ends) if flip.get(v, 1) == 1 else tuple(reversed(ends))
    sig = {}
    ends_of = mg.edge_ends
    for e, (u, v) in mg.edges:
        sig[e] = r.sign(e) * flip[u] * flip[v]
    return RotationSystem(rot, sig)


def _bfs_order(parent):
    children = {}
    roots = []
    for v, p in parent.items():
        if p is None:
            roots.append(v)
        else:
            children.setdefault(p[0], []).append(v)
    out = []
    queue = deque(roots)
    while queue:
        v = queue.popleft()
        out.append(v)
        queue.extend(children.get(v, []))
    return out


def is_orientable_embedding(g, r: RotationSystem) -> bool:
    """True when the signature is a coboundary (some vertex flips make it all +1)."""
    mg = _graph_of(g)
    parent, _ = _spanning_forest(mg)
    flip = {}
    for v in _bfs_order(parent):
        p = parent[v]
        flip[v] = 1 if p is None else flip[p[0]] * r.sign(p[1])
    return all(r.sign(e) == flip[u] * flip[v] for e, (u, v) in mg.edges)


def rigid_respected(g: SpecialGraph, r: RotationSystem) -> list[str]:
    bad = []
    for v, pi in g.rigid.items():
        if not same_cyclic_order(pi, r.rotation.get(v, ())):
            bad.append(v)
    return bad


# ----------------------------------------------------------------------------
# exact minimum genus
# ----------------------------------------------------------------------------

class _Component:
    """One connected component translated to the sweep's integer form."""

    def __init__(self, g: SpecialGraph, verts: list[str]):
        self.g = g if len(verts) == len(g.vertices) else induced(g, verts)
        self._order = None
        self.names = sorted(verts)
        idx = {v: i for i, v in enumerate(self.names)}
        rigid = self.g.rigid
        kept, dropped = [], []
        seen = {}
        for e, (u, v) in sorted(self.g.edges):
            key = (min(idx[u], idx[v]), max(idx[u], idx[v]))
            free = all(len(rigid.get(x, ())) < 4 for x in (u, v))
            if free and key in seen:
                dropped.append((e, seen[key]))
                continue
            seen.setdefault(key, e)
            kept.append(e)
        self.kept = kept
        self.dropped = dropped
        self.eidx = {e: i for i, e in enumerate(kept)}
        ends = self.g.graph.edge_ends
        self.edges = [(idx[ends[e][0]], idx[ends[e][1]]) for e in kept]
        rotations = [None] * len(self.names)
        for v, pi in rigid.items():
            if len(pi) >= 4:
                hs = tuple(2 * self.eidx[x.edge] + x.end for x in pi)
                rotations[idx[v]] = [hs, (hs[0],) + tuple(reversed(hs[1:]))]
        self.core = _facedp.Core(len(self.names), self.edges, rotations)
        self.V = len(self.names)
        self.E = len(kept)   # parallel copies come back as digons, genus unchanged

    @property
    def order(self):
        if self._order is None:
            self._order = _facedp.sweep_order(self.core)
        return self._order

    def lift(self, wit) -> RotationSystem:
        rot = {}
        for vi, rho in wit["rotation"].items():
            rot[self.names[vi]] = [EdgeEnd(self.kept[h >> 1], h & 1) for h in rho]
        for v in self.names:
            rot.setdefault(v, [])
        sig = {e: 1 for e in self.kept}
        for ei, s in wit["lam"].items():
            sig[self.kept[ei]] = s
        # re-insert parallel copies next to their representative, each one
        # closing a digon face so the Euler genus is unchanged
        ends = self.g.graph.edge_ends
        present = set(self.kept)
        faces = None
        for e, rep in self.dropped:
            sig[e] = sig[rep]
            u = ends[rep][0]
            eu = 0 if ends[e][0] == u else 1
            present.add(e)
            sub = _restrict(self.g, present)
            if faces is None:
                faces = trace_faces(_restrict(self.g, present - {e}),
                                    RotationSystem(_tup(rot), dict(sig))).count
            for a, b in ((1, 0), (0, 1), (1, 1), (0, 0)):
                trial = {v: list(r) for v, r in rot.items()}
                for end_rep, end_e, after in ((0, eu, a), (1, 1 - eu, b)):
                    lst = trial[ends[rep][end_rep]]
                    i = lst.index(EdgeEnd(rep, end_rep))
                    lst.insert(i + 1 if after else i, EdgeEnd(e, end_e))
                f = trace_faces(sub, RotationSystem(_tup(trial), dict(sig))).count
                if f == faces + 1:
                    rot, faces = trial, f
                    break
            else:  # pragma: no cover - a digon placement always exists
                raise AssertionError("could not re-insert parallel edge")
        return RotationSystem(_tup(rot), sig)


def _tup(rot):
    return {v: tuple(r) for v, r in rot.items()}


def _restrict(g: SpecialGraph, keep: set[str]) -> MultiGraph:
    return MultiGraph(g.graph.vertices, tuple((e, uv) for e, uv in g.edges if e in keep))


def _component_lists(g: SpecialGraph):
    return [c for c in components(g) if len(c) > 1]


def _faces_to_genus(comp: _Component, cycles: int, signed: bool) -> int:
    faces = cycles // 2 if signed else cycles
    return 2 - comp.V + comp.E - faces


def _solve_component(comp: _Component, mode: str, budget, target_eg=None, limit=None,
                     witness=True):
    """Minimal Euler genus of one component in ``mode``.

    ``mode`` is "orientable", "nonorientable" or "any".  Returns
    ``(euler_genus, RotationSystem)``, ``(None, None)`` if ``target_eg`` is
    unreachable, or raises BudgetExceeded.  Nonorientable mode returns
    ``None`` for forests (no nonorientable cellular embedding).
    """
    signed = mode != "orientable"
    if target_eg is None:
        # iterative deepening: each run prunes against a fixed face target
        step = 2 if mode == "orientable" else 1
        eg = 0 if mode == "orientable" else 1
        cap = 2 * (comp.E - comp.V + 1) + 1 if limit is None else limit
        while eg <= cap:
            got = _solve_component(comp, mode, budget, target_eg=eg, witness=witness)
            if got[0] is not None:
                return got
            eg += step
        return None, None
    target = None
    if target_eg is not None:
        faces = 2 - comp.V + comp.E - target_eg
        target = 2 * faces if signed else faces
    res = _facedp.max_cycles(comp.core, signed=signed, need_negative=(mode == "nonorientable"),
                             target=target, budget=budget, order=comp.order, witness=witness)
    if res.best is None:
        return None, None
    rs = comp.lift(res.witness) if witness else None
    eg = _faces_to_genus(comp, res.best, signed)
    return eg, rs


def _empty_rotation(g: SpecialGraph) -> RotationSystem:
    return RotationSystem({v: () for v in g.vertices}, {})


def _assemble(g: SpecialGraph, parts: list[RotationSystem]) -> RotationSystem:
    rot = {v: () for v in g.vertices}
    sig = {}
    for p in parts:
        rot.update(p.rotation)
        sig.update(p.signature)
    for e, _ in g.edges:
        sig.setdefault(e, 1)
    return RotationSystem(rot, sig)


def min_genus(g: SpecialGraph, orientable: bool = True, budget: int | None = DEFAULT_BUDGET):
    """Exact minimum genus (handles or crosscaps) with a witness certificate.

    Returns a :class:`GenusResult` or :class:`Unknown`.  The crosscap
    number of a planar graph is reported as 0.
    """
    problems = validate_graph(g)
    if problems:
        raise GraphError("; ".join(problems))
    comps = [_Component(g, c) for c in _component_lists(g)]
    try:
        if orientable:
            total, parts = 0, []
            for comp in comps:
                eg, rs = _solve_component(comp, "orientable", budget)
                total += eg // 2
                parts.append(rs)
            rs = _assemble(g, parts)
            return GenusResult(total, EmbeddingCertificate(rs, Surface(True, total)), True)
        return _min_crosscaps(g, comps, budget)
    except _facedp.BudgetExceeded as exc:
        return Unknown("budget exhausted", bound=exc.args[0] if exc.args else None)


def _min_crosscaps(g, comps, budget, witness=True):
    best_parts, total, has_nonor = [], 0, False
    for comp in comps:
        eg_o, rs_o = _solve_component(comp, "orientable", budget, witness=witness)
        if eg_o == 0:
            best_parts.append(rs_o)
            continue
        eg_n, rs_n = _solve_component(comp, "nonorientable", budget, limit=eg_o, witness=witness)
        if eg_n is not None and eg_n <= eg_o:
            best_parts.append(rs_n)
            total += eg_n
            has_nonor = True
        else:
            best_parts.append(rs_o)
            total += eg_o
    if not witness:
        return total + (0 if has_nonor or total == 0 else 1)
    if total == 0:
        rs = _assemble(g, best_parts)
        return GenusResult(0, EmbeddingCertificate(rs, Surface(True, 0)), False)
    if not has_nonor:
        total += 1
    rs = _assemble(g, best_parts)
    return GenusResult(total, EmbeddingCertificate(rs, Surface(False, total)), False)


def is_embeddable(g: SpecialGraph, s: Surface, budget: int | None = DEFAULT_BUDGET):
    """Certificate for an embedding of ``g`` in ``s``, ``None``, or :class:`Unknown`."""
    problems = validate_graph(g)
    if problems:
        raise GraphError("; ".join(problems))
    if s.orientable and s.genus == 0:
        # the plane needs no search
        rs = _plane_rotation(g)
        return None if rs is None else EmbeddingCertificate(rs, s)
    comps = [_Component(g, c) for c in _component_lists(g)]
    if not comps:
        return EmbeddingCertificate(_empty_rotation(g), s)
    try:
        if s.orientable:
            if len(comps) == 1:
                eg, rs = _solve_component(comps[0], "orientable", budget, target_eg=2 * s.genus)
                if eg is None:
                    return None
                return EmbeddingCertificate(_assemble(g, [rs]), s)
            total, parts = 0, []
            for comp in comps:
                eg, rs = _solve_component(comp, "orientable", budget)
                total += eg // 2
                if total > s.genus:
                    return None
                parts.append(rs)
            return EmbeddingCertificate(_assemble(g, parts), s)
        res = _min_crosscaps(g, comps, budget)
        if res.genus > s.genus:
            return None
        return EmbeddingCertificate(res.certificate.rotation_system, s)
    except _facedp.BudgetExceeded as exc:
        return Unknown("budget exhausted", bound=exc.args[0] if exc.args else None)


def _wheel_graph(g: SpecialGraph) -> nx.Graph:
    """Plain graph that is planar exactly when ``g`` has a rigid-respecting plane embedding.

    Each rigid vertex of degree at least 4 becomes a wheel whose rim lists
    its ends in order; wheels are 3-connected, so their rim order is fixed
    up to reflection.  Edges are subdivided to keep parallel edges apart.
    """
    h = nx.Graph()
    attach = {}
    for v in g.vertices:
        pi = g.rigid.get(v, ())
        h.add_node(("v", v))
        if len(pi) >= 4:
            d = len(pi)
            for i, x in enumerate(pi):
                attach[x] = ("r", v, i)
                h.add_edge(("r", v, i), ("r", v, (i + 1) % d))
                h.add_edge(("r", v, i), ("v", v))
    for e, (u, v) in g.edges:
        m = ("m", e)
        h.add_edge(attach.get(EdgeEnd(e, 0), ("v", u)), m)
        h.add_edge(m, attach.get(EdgeEnd(e, 1), ("v", v)))
    return h


def _wheel_edges(g: SpecialGraph):
    """Index form of :func:`_wheel_graph`, subdividing only where needed."""
    index = {v: i for i, v in enumerate(g.vertices)}
    n = len(index)
    pairs = []
    attach = {}
    for v, pi in g.rigid.items():
        d = len(pi)
        if d < 4:
            continue
        hub = index[v]
        rim = list(range(n, n + d))
        n += d
        for i, x in enumerate(pi):
            attach[x] = rim[i]
            pairs.append((rim[i], rim[(i + 1) % d]))
            pairs.append((rim[i], hub))
    seen = {frozenset(p) for p in pairs}
    for e, (u, v) in g.edges:
        a = attach.get(EdgeEnd(e, 0), index[u])
        b = attach.get(EdgeEnd(e, 1), index[v])
        key = frozenset((a, b))
        if a == b:
            continue                 # a loop outside any wheel never matters
        if key in seen:
            pairs += [(a, n), (n, b)]
            n += 1
        else:
            seen.add(key)
            pairs.append((a, b))
    return n, pairs


def _plane_rotation(g: SpecialGraph) -> RotationSystem | None:
    """Rotation system of a rigid-respecting plane embedding, or ``None``."""
    ok, emb = nx.check_planarity(_wheel_graph(g))
    if not ok:
        return None
    ends = g.graph.edge_ends
    rot = {}
    for v in g.vertices:
        pi = g.rigid.get(v, ())
        hub = ("v", v)
        if hub not in emb:
            rot[v] = ()
        elif len(pi) >= 4:
            rot[v] = tuple(pi[node[2]] for node in emb.neighbors_cw_order(hub))
        else:
            rot[v] = tuple(EdgeEnd(m[1], 0 if ends[m[1]][0] == v else 1)
                           for m in emb.neighbors_cw_order(hub))
    return RotationSystem(rot, {})


def is_planar(g: SpecialGraph) -> bool:
    """Plane embeddability respecting rigid rotations (linear-time test)."""
    n, pairs = _wheel_edges(g)
    return is_planar_simple(n, pairs)


def embeds(g: SpecialGraph, s: Surface, budget: int | None = DEFAULT_BUDGET):
    """Decision version of :func:`is_embeddable`: ``True``, ``False`` or :class:`Unknown`."""
    if is_planar(g):
        return True
    if s.genus == 0:
        return False
    comps = [_Component(g, c) for c in _component_lists(g)]
    try:
        if not s.orientable:
            if len(comps) == 1:
                # N_k takes a nonorientable embedding of Euler genus <= k, or
                # an orientable one of Euler genus < k
                eg, _ = _solve_component(comps[0], "nonorientable", budget, target_eg=s.genus,
                                         witness=False)
                if eg is not None:
                    return True
                eg, _ = _solve_component(comps[0], "orientable", budget,
                                         target_eg=s.genus - 1 - (s.genus - 1) % 2, witness=False)
                return eg is not None
            return _min_crosscaps(g, comps, budget, witness=False) <= s.genus
        if len(comps) == 1:
            eg, _ = _solve_component(comps[0], "orientable", budget, target_eg=2 * s.genus,
                                     witness=False)
            return eg is not None
        total = 0
        for comp in comps:
            eg, _ = _solve_component(comp, "orientable", budget, witness=False)
            total += eg // 2
            if total > s.genus:
                return False
        return True
    except _facedp.BudgetExceeded as exc:
        return Unknown("budget exhausted", bound=exc.args[0] if exc.args else None)


def enumerate_rotation_systems(g: SpecialGraph, signed: bool = False):
    """Every admissible rotation system (brute force; small graphs only)."""
    inc = g.graph.incident()
    verts = sorted(inc)
    options = []
    for v in verts:
        ends = sorted(inc[v])
        if v in g.rigid and len(ends) >= 4:
            pi = tuple(g.rigid[v])
            options.append([pi, (pi[0],) + tuple(reversed(pi[1:]))])
        elif len(ends) <= 2:
            options.append([tuple(ends)])
        else:
            options.append([(ends[0],) + p for p in itertools.permutations(ends[1:])])
    eids = sorted(g.edge_ids)
    sigs = itertools.product((1, -1), repeat=len(eids)) if signed else [(1,) * len(eids)]
    sigs = list(sigs)
    for rots in itertools.product(*options):
        rot = dict(zip(verts, rots))
        for s in sigs:
            yield RotationSystem(rot, dict(zip(eids, s)))
