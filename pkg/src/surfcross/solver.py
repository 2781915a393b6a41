"""Exact crossing numbers of special graphs on a fixed surface.

A drawing is described combinatorially by a crossing configuration: the
crossings each edge takes part in, listed in order from its first to its
second end.  Replacing every crossing by a rigid degree-4 vertex yields the
planarization; the drawing exists on a surface exactly when the
planarization embeds there.

The search deepens a bound ``K`` and grows configurations one crossing at
a time.  Two facts keep it small:

* a crossing can be traded for a handle (or a crosscap), so a partial
  configuration with ``k`` crossings that is to be completed with ``K``
  must already embed in the surface of genus ``g + K - k``;
* if a partial configuration does not embed, neither does any thin-edge
  minimal obstruction inside it, so some later crossing must involve a thin
  edge of that obstruction.  Branching only on such crossings is complete.

Configurations equivalent under automorphisms of the graph are merged.
"""
from __future__ import annotations

import random
from collections import deque
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from .embedder import (EmbeddingCertificate, RotationSystem, Unknown, embeds, is_embeddable,
                       min_genus, trace_faces)
from .graph import (EdgeEnd, GraphError, SpecialGraph, Surface, check_graph, delete_edges,
                    sha256, thick_subgraph, to_document, validate_graph)

SEP = "~"
AUTOMORPHISM_CAP = 4096
MAX_OBSTRUCTIONS = 12
OBSTRUCTION_TRIES = 4
BIG_PLANARIZATION = 28


# ----------------------------------------------------------------------------
# configurations and planarization
# ----------------------------------------------------------------------------

Slot = tuple[str, int]          # (edge id, position along the edge)
Pair = tuple[Slot, Slot]


def _norm_pair(a: Slot, b: Slot) -> Pair:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class CrossingConfiguration:
    """A set of crossings, each a pair of ``(edge, position)`` slots.

    Positions on an edge run ``0 .. m - 1`` from its first end, where ``m``
    is the number of crossings on it.
    """

    crossings: tuple[Pair, ...] = ()

    @classmethod
    def of(cls, pairs: Iterable) -> "CrossingConfiguration":
        return cls(tuple(sorted(_norm_pair(tuple(a), tuple(b)) for a, b in pairs)))

    def __len__(self):
        return len(self.crossings)

    def counts(self) -> dict[str, int]:
        c: dict[str, int] = {}
        for pair in self.crossings:
            for e, _ in pair:
                c[e] = c.get(e, 0) + 1
        return c

    def check(self, g: SpecialGraph, allow_self: bool = False):
        ids = set(g.edge_ids)
        counts = self.counts()
        seen = set()
        for a, b in self.crossings:
            for e, p in (a, b):
                if e not in ids:
                    raise GraphError(f"crossing on unknown edge {e!r}")
                if e in g.thick:
                    raise GraphError(f"thick edge crossed: {e!r}")
                if (e, p) in seen:
                    raise GraphError(f"slot {e}:{p} used twice")
                seen.add((e, p))
            if a[0] == b[0] and not allow_self:
                raise GraphError(f"edge {a[0]!r} crosses itself")
        for e, m in counts.items():
            if {p for (x, p) in seen if x == e} != set(range(m)):
                raise GraphError(f"positions on {e!r} are not 0..{m - 1}")

    def to_list(self) -> list[dict]:
        return [{"a": {"edge": a[0], "pos": a[1]}, "b": {"edge": b[0], "pos": b[1]}}
                for a, b in self.crossings]

    @classmethod
    def from_list(cls, items) -> "CrossingConfiguration":
        return cls.of(((c["a"]["edge"], int(c["a"]["pos"])), (c["b"]["edge"], int(c["b"]["pos"])))
                      for c in items)


def sub_edge(e: str, j: int) -> str:
    return f"{e}{SEP}{j}"


def crossing_vertex(i: int) -> str:
    return f"{SEP}x{i}"


@dataclass
class PlanarizedGraph:
    graph: SpecialGraph
    config: CrossingConfiguration
    pieces: dict[str, list[str]]          # original edge -> sub-edges in order
    origin: dict[str, tuple[str, int]]    # sub-edge -> (original edge, index)

    def thin_pieces(self) -> list[str]:
        return [s for s, (e, _) in self.origin.items() if e not in self.graph.thick]


def planarize(g: SpecialGraph, config: CrossingConfiguration, allow_self: bool = False) -> PlanarizedGraph:
    """Replace every crossing by a rigid degree-4 vertex.

    Crossing ``i`` (in configuration order) becomes vertex ``~x{i}``; an edge
    ``e`` with ``m > 0`` crossings becomes the path ``e~0 .. e~m``.  Uncrossed
    edges keep their ids.  A self-crossing at consecutive positions would make
    a loop, so that piece gets an extra vertex ``~s{i}``.
    """
    config.check(g, allow_self=allow_self)
    for v in g.vertices:
        if SEP in v:
            raise GraphError(f"vertex id {v!r} uses the reserved character {SEP!r}")
    for e in g.edge_ids:
        if SEP in e:
            raise GraphError(f"edge id {e!r} uses the reserved character {SEP!r}")
    counts = config.counts()
    at: dict[Slot, int] = {}
    for i, (a, b) in enumerate(config.crossings):
        at[a] = i
        at[b] = i
    ends = g.graph.edge_ends
    vertices = list(g.vertices) + [crossing_vertex(i) for i in range(len(config))]
    edges, thick = [], set()
    pieces, origin = {}, {}
    end_map: dict[EdgeEnd, EdgeEnd] = {}
    extra = 0
    for e, (u, v) in g.edges:
        m = counts.get(e, 0)
        if m == 0:
            edges.append((e, u, v))
            pieces[e] = [e]
            origin[e] = (e, 0)
            if e in g.thick:
                thick.add(e)
            continue
        nodes = [u] + [crossing_vertex(at[(e, p)]) for p in range(m)] + [v]
        names = []
        for j in range(m + 1):
            s = sub_edge(e, j)
            a, b = nodes[j], nodes[j + 1]
            if a == b:
                mid = f"{SEP}s{extra}"
                extra += 1
                vertices.append(mid)
                edges += [(s, a, mid), (s + ".1", mid, b)]
                origin[s + ".1"] = (e, j)
                names.append(s)
                names.append(s + ".1")
            else:
                edges.append((s, a, b))
                names.append(s)
            origin[s] = (e, j)
        pieces[e] = names
        end_map[EdgeEnd(e, 0)] = EdgeEnd(names[0], 0)
        end_map[EdgeEnd(e, 1)] = EdgeEnd(names[-1], 1)
    rigid = {v: [end_map.get(x, x) for x in pi] for v, pi in g.rigid.items()}
    for i, (a, b) in enumerate(config.crossings):
        x = crossing_vertex(i)

        def into(slot):
            e, p = slot
            return EdgeEnd(_piece_before(pieces[e], p), 1)

        def out(slot):
            e, p = slot
            return EdgeEnd(_piece_after(pieces[e], p), 0)

        rigid[x] = [into(a), into(b), out(a), out(b)]
    pg = SpecialGraph.build(vertices, edges, thick, rigid)
    return PlanarizedGraph(pg, config, pieces, origin)


def _piece_before(names: list[str], p: int) -> str:
    # pieces are e~0 .. e~m, a loop piece e~j is followed by e~j.1
    base = [n for n in names if not n.endswith(".1")]
    s = base[p]
    return s + ".1" if s + ".1" in names else s


def _piece_after(names: list[str], p: int) -> str:
    base = [n for n in names if not n.endswith(".1")]
    return base[p + 1]


def insert_crossing(config: CrossingConfiguration, pa: tuple[str, int], pb: tuple[str, int]
                    ) -> CrossingConfiguration:
    """Add a crossing between piece ``pa = (e, j)`` and piece ``pb = (f, l)``.

    Piece ``j`` of ``e`` lies between its crossings ``j - 1`` and ``j``; the new
    crossing takes position ``j`` and later positions shift up by one.
    """
    (e, j), (f, l) = pa, pb
    if e == f:
        lo, hi = sorted((j, l))
        # both slots land on the same edge; the later one shifts past the first
        def shift(slot):
            x, p = slot
            if x != e:
                return slot
            return (x, p + (p >= lo) + (p >= hi))
        new = [(shift(a), shift(b)) for a, b in config.crossings]
        new.append(((e, lo), (e, hi + 1)))
        return CrossingConfiguration.of(new)

    def shift(slot):
        x, p = slot
        if x == e and p >= j:
            return (x, p + 1)
        if x == f and p >= l:
            return (x, p + 1)
        return slot

    new = [(shift(a), shift(b)) for a, b in config.crossings]
    new.append(((e, j), (f, l)))
    return CrossingConfiguration.of(new)


def _adjacent(g: SpecialGraph, e: str, f: str) -> bool:
    return bool(set(g.endpoints(e)) & set(g.endpoints(f)))


def _pair_multiplicity(config: CrossingConfiguration, e: str, f: str) -> int:
    return sum(1 for a, b in config.crossings if {a[0], b[0]} == {e, f})


def _children(g: SpecialGraph, config: CrossingConfiguration, left: Iterable, right: Iterable,
              allow_adjacent: bool, allow_self: bool, max_pair_multiplicity: int | None,
              filters: Iterable = ()) -> dict:
    """Configurations with one more crossing, mapped to the piece pair that made them."""
    left = list(left)
    right_set = sorted(set(right))
    filters = [set(f) for f in filters]
    out: dict = {}
    for e, j in left:
        for f, l in right_set:
            if any((e, j) not in fs and (f, l) not in fs for fs in filters):
                continue
            if e == f:
                if not allow_self:
                    continue
            elif not allow_adjacent and _adjacent(g, e, f):
                continue
            if max_pair_multiplicity is not None and e != f and \
                    _pair_multiplicity(config, e, f) >= max_pair_multiplicity:
                continue
            child = insert_crossing(config, (e, j), (f, l))
            out.setdefault(child, ((e, j), (f, l)))
    return out


def _thin_piece_slots(g: SpecialGraph, config: CrossingConfiguration) -> list[tuple[str, int]]:
    counts = config.counts()
    return [(e, j) for e in g.thin_edges for j in range(counts.get(e, 0) + 1)]


def enumerate_configurations(g: SpecialGraph, k: int, allow_adjacent: bool = True,
                             allow_self: bool = False,
                             max_pair_multiplicity: int | None = None) -> list[CrossingConfiguration]:
    """Every configuration with exactly ``k`` crossings on thin edges (no symmetry reduction)."""
    level = {CrossingConfiguration()}
    for _ in range(k):
        nxt = set()
        for c in level:
            slots = _thin_piece_slots(g, c)
            nxt.update(_children(g, c, slots, slots, allow_adjacent, allow_self, max_pair_multiplicity))
        level = nxt
    return sorted(level, key=lambda c: c.crossings)


# ----------------------------------------------------------------------------
# symmetry
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class _Automorphism:
    edge_map: tuple[tuple[str, str, bool], ...]   # (edge, image, reversed)

    @cached_property
    def emap(self) -> dict[str, tuple[str, bool]]:
        return {e: (f, r) for e, f, r in self.edge_map}

    def apply(self, config: CrossingConfiguration, counts: dict[str, int]) -> tuple:
        emap = self.emap

        def img(slot):
            e, p = slot
            f, r = emap[e]
            return (f, counts[e] - 1 - p) if r else (f, p)

        return tuple(sorted(_norm_pair(img(a), img(b)) for a, b in config.crossings))

    def piece(self, piece: Slot, counts: dict[str, int]) -> Slot:
        """Image of piece ``(e, j)``; an edge with ``m`` crossings has pieces ``0..m``."""
        e, j = piece
        f, r = self.emap[e]
        return (f, counts.get(e, 0) - j) if r else (f, j)


def automorphisms(g: SpecialGraph, cap: int = AUTOMORPHISM_CAP) -> list[_Automorphism]:
    """Automorphisms of ``g`` respecting thickness and rigid rotations (at most ``cap``).

    The identity is always first.  Any subset is sound for merging
    configurations; a larger one only merges more.
    """
    h = nx.Graph()
    for v in g.vertices:
        h.add_node(("v", v), kind="rigid" if v in g.rigid else "vertex")
    for e, (u, v) in g.edges:
        h.add_node(("e", e), kind="thick" if e in g.thick else "thin")
        h.add_edge(("v", u), ("e", e))
        h.add_edge(("v", v), ("e", e))
    gm = GraphMatcher(h, h, node_match=lambda a, b: a["kind"] == b["kind"])
    ends = g.graph.edge_ends
    ident = _Automorphism(tuple((e, e, False) for e in sorted(g.edge_ids)))
    out = [ident]
    seen = {ident.edge_map}
    for iso in gm.isomorphisms_iter():
        vmap = {a[1]: b[1] for a, b in iso.items() if a[0] == "v"}
        emap = {a[1]: b[1] for a, b in iso.items() if a[0] == "e"}
        rev = {}
        for e, f in emap.items():
            u, v = ends[e]
            x, y = ends[f]
            rev[e] = not (vmap[u] == x and vmap[v] == y)
        if not _rigid_ok(g, vmap, emap, rev):
            continue
        a = _Automorphism(tuple((e, emap[e], rev[e]) for e in sorted(emap)))
        if a.edge_map in seen:
            continue
        seen.add(a.edge_map)
        out.append(a)
        if len(out) >= cap:
            break
    return out


def _rigid_ok(g, vmap, emap, rev) -> bool:
    from .graph import same_cyclic_order
    for v, pi in g.rigid.items():
        img = []
        for x in pi:
            f = emap[x.edge]
            end = x.end if not rev[x.edge] else 1 - x.end
            img.append(EdgeEnd(f, end))
        if not same_cyclic_order(img, g.rigid[vmap[v]]):
            return False
    return True


def canonical_form(config: CrossingConfiguration, autos: list[_Automorphism]) -> tuple:
    counts = config.counts()
    return min(a.apply(config, counts) for a in autos)


def _canonical_with_map(config: CrossingConfiguration, autos: list[_Automorphism]):
    counts = config.counts()
    return min(((a.apply(config, counts), i) for i, a in enumerate(autos)))


# ----------------------------------------------------------------------------
# certificates and results
# ----------------------------------------------------------------------------

@dataclass
class DrawingCertificate:
    graph: SpecialGraph
    surface: Surface
    config: CrossingConfiguration
    embedding: EmbeddingCertificate
    count: int

    def to_dict(self) -> dict:
        return {
            "graph_sha": sha256(self.graph),
            "graph": to_document(self.graph),
            "surface": self.surface.to_dict(),
            "count": self.count,
            "crossings": self.config.to_list(),
            "embedding": self.embedding.to_dict(),
        }


@dataclass
class CrossingResult:
    crossings: int
    certificate: DrawingCertificate
    surface: Surface
    stats: dict = field(default_factory=dict)


class Infeasible:
    """No drawing exists: the thick subgraph does not embed in the surface."""

    def __init__(self, reason: str):
        self.reason = reason

    def __repr__(self):
        return f"Infeasible({self.reason!r})"

    def __bool__(self):
        return False


@dataclass
class CrossingSequence:
    orientable: bool
    values: list[int]
    results: list[CrossingResult]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self.values)


def _surface(orientable: bool, h: int) -> Surface:
    if h == 0:
        return Surface(True, 0)
    return Surface(orientable, h)


def _family(s: Surface) -> tuple[bool, int]:
    """Orientability flag and parameter ``h`` of the family containing ``s``."""
    return s.orientable, s.genus


# ----------------------------------------------------------------------------
# lower bounds
# ----------------------------------------------------------------------------

def euler_lower_bound(g: SpecialGraph, s: Surface) -> int:
    """``E - 3(V - 2) - 3 * eg(s)`` for simple graphs on at least 3 vertices, else 0."""
    V, E = len(g.vertices), len(g.edges)
    if V < 3 or not g.is_simple():
        return 0
    return max(0, E - 3 * (V - 2) - 3 * s.euler_genus)


def union_upper_bound(seq1, seq2, i: int) -> int:
    """``min_j seq1[j] + seq2[i - j]``; indices past a sequence's end count as 0."""
    o1 = getattr(seq1, "orientable", None)
    o2 = getattr(seq2, "orientable", None)
    if o1 is not None and o2 is not None and o1 != o2:
        raise ValueError("cannot combine an orientable and a nonorientable sequence")
    if i < 0:
        raise ValueError("i must be non-negative")
    a, b = list(seq1), list(seq2)

    def at(seq, j):
        return seq[j] if j < len(seq) else 0

    return min(at(a, j) + at(b, i - j) for j in range(i + 1))


# ----------------------------------------------------------------------------
# search
# ----------------------------------------------------------------------------

@dataclass
class _Params:
    orientable: bool
    h: int
    budget: int | None
    allow_adjacent: bool
    allow_self: bool
    max_pair_multiplicity: int | None
    memo_key: tuple = ()


class _Memo:
    """What is known about each configuration, shared across searches on one graph.

    Embeddability is monotone in the genus, so one interval per
    configuration suffices: it fits at ``ok`` handles and not at ``bad``.
    """

    def __init__(self):
        self.ok: dict[tuple, int] = {}
        self.bad: dict[tuple, int] = {}
        self.obstructions: dict[tuple, list] = {}

    def embeds(self, key, pg: SpecialGraph, orientable: bool, h: int, budget):
        if h >= self.ok.get(key, 1 << 30):
            return True
        if h <= self.bad.get(key, -1):
            return False
        res = embeds(pg, _surface(orientable, h), budget=budget)
        if res is True:
            self.ok[key] = h
        elif res is False:
            self.bad[key] = h
        return res


_MEMOS: dict[tuple, _Memo] = {}


def _memo_for(g: SpecialGraph, p: "_Params") -> _Memo:
    key = p.memo_key
    if key not in _MEMOS:
        _MEMOS.clear()
        _MEMOS[key] = _Memo()
    return _MEMOS[key]


def _obstruction(pg: PlanarizedGraph, orientable: bool, h: int, budget, seed: int = 0) -> list[str]:
    """Thin pieces of a thin-edge-minimal subgraph that does not embed.

    ``seed`` picks the deletion order; different orders find different
    obstructions.
    """
    cand = sorted(pg.thin_pieces())
    if seed:
        random.Random(seed).shuffle(cand)
    surface = _surface(orientable, h)
    removed: list[str] = []
    kept: list[str] = []
    i, chunk = 0, max(1, len(cand) // 2)
    while i < len(cand):
        trial = cand[i:i + chunk]
        sub = delete_edges(pg.graph, removed + trial)
        res = embeds(sub, surface, budget=budget)
        if isinstance(res, Unknown):
            raise _Budget()
        if res is False:
            removed += trial
            i += len(trial)
            chunk = max(1, min(chunk * 2, len(cand) - i))
        elif chunk == 1:
            kept.append(cand[i])
            i += 1
        else:
            chunk = max(1, chunk // 2)
    return kept


class _Budget(Exception):
    pass


def _hittable(obstructions, r: int, allow_self: bool) -> bool:
    """Could ``r`` more crossings touch every obstruction?

    Exact for ``r <= 1``; above that a greedy packing of disjoint
    obstructions is compared with the ``2 r`` pieces the crossings touch.
    """
    if not obstructions:
        return True
    if r <= 0:
        return False
    sets = [set(o) for o in obstructions]
    if r == 1:
        for a in sets[0]:
            rest = [o for o in sets if a not in o]
            if not rest:
                return True
            for b in set.intersection(*rest):
                if allow_self or b[0] != a[0]:
                    return True
        return False
    used: set = set()
    packed = 0
    for o in sorted(sets, key=len):
        if used.isdisjoint(o):
            used |= o
            packed += 1
    return packed <= 2 * r


def _evaluate(g: SpecialGraph, config: CrossingConfiguration, p: _Params, need: int,
              inherited=()):
    """Test one configuration.

    Returns ``("ok", certificate)`` when it embeds in the target surface,
    ``("drop", None)`` when it cannot reach the target within the remaining
    crossings, ``("branch", (anchor, filters, obstructions))`` where some
    remaining crossing must use an anchor slot, every child crossing must
    pass the filters and ``obstructions`` are all known obstructions, or
    ``("unknown", None)``.  ``inherited`` are obstructions already known for
    this configuration.  Below the last level the caller guarantees the
    target is out of reach, so only the looser test runs there.
    """
    memo = _memo_for(g, p)
    key = config.crossings
    try:
        pg = planarize(g, config, allow_self=p.allow_self)
        if need == 0:
            quick = memo.embeds(key, pg.graph, p.orientable, p.h, p.budget)
            if quick is False:
                return ("drop", None)
            if isinstance(quick, Unknown):
                return ("unknown", None)
            res = is_embeddable(pg.graph, _surface(p.orientable, p.h), budget=p.budget)
            if isinstance(res, Unknown):
                return ("unknown", None)
            return ("ok", res) if res is not None else ("drop", None)

        def obstructions(h, tries):
            if (key, h, tries) not in memo.obstructions:
                found = {tuple(sorted({pg.origin[x] for x in
                                       _obstruction(pg, p.orientable, h, p.budget, seed=i)}))
                         for i in range(tries)}
                memo.obstructions[(key, h, tries)] = sorted(found, key=lambda o: (len(o), o))
            return memo.obstructions[(key, h, tries)]

        if not _hittable(inherited, need, p.allow_self):
            return ("drop", None)
        if not (need == 1 and p.h == 0 and len(pg.graph.vertices) >= BIG_PLANARIZATION):
            # for big graphs on the sphere, trying the last crossing is cheaper
            loose = memo.embeds(key, pg.graph, p.orientable, p.h + need, p.budget)
            if isinstance(loose, Unknown):
                return ("unknown", None)
            if not loose:
                return ("drop", None)
        # some remaining crossing must touch each obstruction; planar ones are
        # cheap, so look at a few
        own = obstructions(p.h, OBSTRUCTION_TRIES if p.h == 0 else 1)
        known = sorted(set(own) | set(inherited), key=lambda o: (len(o), o))
        if not _hittable(known, need, p.allow_self):
            return ("drop", None)
        known = known[:MAX_OBSTRUCTIONS]
        anchor = list(known[0])
        filters = []
        if need == 1:
            # the single remaining crossing must touch every obstruction
            filters.extend(list(o) for o in known)
        else:
            tight = memo.embeds(key, pg.graph, p.orientable, p.h + need - 1, p.budget)
            if isinstance(tight, Unknown):
                return ("unknown", None)
            if not tight:
                # no slack left: every remaining crossing must lower the genus
                filters.append(list(obstructions(p.h + need - 1, 1)[0]))
        return ("branch", (anchor, filters, known))
    except _Budget:
        return ("unknown", None)


def _evaluate_star(args):
    return _evaluate(*args)


def _infeasible(g: SpecialGraph, s: Surface, budget):
    res = is_embeddable(thick_subgraph(g), s, budget=budget)
    if isinstance(res, Unknown):
        return None
    return res is None


def crossing_number(g: SpecialGraph, s: Surface, max_k: int | None = None, threads: int = 1,
                    deterministic: bool = True, budget: int | None = 10**8,
                    lower_bound: int = 0, allow_adjacent: bool = True, allow_self: bool = False,
                    max_pair_multiplicity: int | None = None, automorphism_cap: int = AUTOMORPHISM_CAP,
                    progress=None, time_limit: float | None = None, heuristic: bool = True):
    """Exact crossing number of ``g`` on ``s``.

    Returns a :class:`CrossingResult`, :class:`Infeasible` (thick edges alone
    do not fit) or :class:`Unknown` (cap, budget or ``time_limit`` seconds
    reached).  ``lower_bound`` is a caller-supplied bound known to hold; it
    only skips work.  With ``heuristic`` a drawing found by edge insertion
    caps the search, which then only has to rule out fewer crossings.
    """
    problems = validate_graph(g)
    if problems:
        raise GraphError("; ".join(problems))
    orientable, h = _family(s)
    thin = g.thin_edges
    cap = len(thin) ** 2 if max_k is None else max_k
    bad = _infeasible(g, s, budget)
    if bad:
        return Infeasible("thick subgraph does not embed in " + str(s))
    p = _Params(orientable, h, budget, allow_adjacent, allow_self, max_pair_multiplicity,
                (sha256(g), orientable, allow_self))
    autos = automorphisms(g, cap=automorphism_cap)
    K = max(lower_bound, euler_lower_bound(g, s))
    stats = {"evaluated": 0, "automorphisms": len(autos), "bounds": [],
             "deadline": None if time_limit is None else time.monotonic() + time_limit}
    pool = ProcessPoolExecutor(max_workers=threads) if threads and threads > 1 else None
    surface = _surface(orientable, h)

    def result(cfg, emb, how):
        stats["bounds"].append((len(cfg), how))
        cert = DrawingCertificate(g, surface, cfg, EmbeddingCertificate(emb.rotation_system, surface),
                                  len(cfg))
        return CrossingResult(len(cfg), cert, surface, stats)

    if K == 0 and heuristic:
        # no point routing edges for a graph that already fits
        found, unknown = _search(g, p, 0, autos, stats, None, deterministic, progress)
        if found is not None:
            return result(*found, "found")
        if unknown:
            return Unknown("budget exhausted while refuting 0 crossings", bound=0)
        stats["bounds"].append((0, "refuted"))
        K = 1
    # a good drawing up front means the search only has to refute
    upper = _insertion_bound(g, p, floor=K) if heuristic else None
    if upper is not None:
        stats["upper_bound"] = len(upper[0])
        if len(upper[0]) <= cap:
            cap = len(upper[0]) - 1
    try:
        while K <= cap:
            found, unknown = _search(g, p, K, autos, stats, pool, deterministic, progress)
            if found is not None:
                return result(*found, "found")
            if unknown:
                return Unknown(f"budget exhausted while refuting {K} crossings", bound=K)
            stats["bounds"].append((K, "refuted"))
            K += 1
    finally:
        if pool is not None:
            pool.shutdown()
    if upper is not None and len(upper[0]) == cap + 1:
        return result(*upper, "upper bound")
    return Unknown(f"no drawing with at most {cap} crossings", bound=cap + 1)


# ----------------------------------------------------------------------------
# upper bounds by edge insertion
# ----------------------------------------------------------------------------

def _corner_ok(g: SpecialGraph, present: set, v: str, new_end: EdgeEnd, a: EdgeEnd, b: EdgeEnd) -> bool:
    """May ``new_end`` go between original ends ``a`` and ``b`` at a rigid ``v``?"""
    if v not in g.rigid:
        return True
    order = [x for x in g.rigid[v] if x.edge in present or x == new_end]
    i = order.index(new_end)
    return {order[i - 1], order[(i + 1) % len(order)]} == {a, b}


def _route(g: SpecialGraph, present: set, pg: PlanarizedGraph, rot: RotationSystem, e: str):
    """Fewest crossings for ``e`` in the fixed embedding ``rot`` of ``pg``.

    Returns the list of crossed pieces ``(edge, index)`` in order from the
    first end of ``e``, or ``None`` when no route exists.
    """
    u, v = g.endpoints(e)
    back = {}
    for f, names in pg.pieces.items():
        back[EdgeEnd(names[0], 0)] = EdgeEnd(f, 0)
        back[EdgeEnd(names[-1], 1)] = EdgeEnd(f, 1)
    faces = trace_faces(pg.graph, rot).walks
    sides: dict[str, list[int]] = {}
    start, goal = set(), set()
    touched = set()
    for fi, walk in enumerate(faces):
        for i, (end, _) in enumerate(walk):
            sides.setdefault(end.edge, []).append(fi)
            arrive = end.other()
            leave = walk[(i + 1) % len(walk)][0]
            a, b = back.get(arrive), back.get(leave)
            if a is None or b is None:
                continue
            w = pg.graph.endpoints(arrive.edge)[arrive.end]
            touched.add(w)
            if w == u and _corner_ok(g, present, u, EdgeEnd(e, 0), a, b):
                start.add(fi)
            if w == v and _corner_ok(g, present, v, EdgeEnd(e, 1), a, b):
                goal.add(fi)
    if u not in touched:
        start = set(range(len(faces)))
    if v not in touched:
        goal = set(range(len(faces)))
    if not faces:
        return [] if u == v or not (touched & {u, v}) else None
    adj: dict[int, list] = {}
    for piece, fs in sides.items():
        if pg.origin[piece][0] in g.thick or len(set(fs)) < 2:
            continue
        x, y = fs[0], fs[1]
        adj.setdefault(x, []).append((y, pg.origin[piece]))
        adj.setdefault(y, []).append((x, pg.origin[piece]))
    prev = {fi: None for fi in sorted(start)}
    queue = deque(sorted(start))
    while queue:
        x = queue.popleft()
        if x in goal:
            path = []
            while prev[x] is not None:
                x, piece = prev[x]
                path.append(piece)
            return path[::-1]
        for y, piece in adj.get(x, ()):
            if y not in prev:
                prev[y] = (x, piece)
                queue.append(y)
    return None


def _with_route(config: CrossingConfiguration, e: str, route) -> CrossingConfiguration:
    done: list[tuple[str, int]] = []
    for t, (f, l) in enumerate(route):
        shifted = l + sum(1 for x, m in done if x == f and m < l)
        config = insert_crossing(config, (e, t), (f, shifted))
        done.append((f, l))
    return config


def _without(config: CrossingConfiguration, e: str) -> CrossingConfiguration:
    """Drop every crossing on ``e`` and renumber the other edges."""
    kept = [pair for pair in config.crossings if e not in (pair[0][0], pair[1][0])]
    rank: dict[str, dict[int, int]] = {}
    for pair in kept:
        for f, q in pair:
            rank.setdefault(f, {})[q] = 0
    for f, qs in rank.items():
        for i, q in enumerate(sorted(qs)):
            qs[q] = i
    return CrossingConfiguration.of(((a[0], rank[a[0]][a[1]]), (b[0], rank[b[0]][b[1]])) for a, b in kept)


def _reroute(g: SpecialGraph, present: set, config: CrossingConfiguration, e: str, surface, budget):
    """Route ``e`` afresh through an embedding of everything else."""
    rest = _without(config, e)
    sub = delete_edges(g, [x for x in g.edge_ids if x not in present or x == e])
    pg = planarize(sub, rest)
    emb = is_embeddable(pg.graph, surface, budget=budget)
    if emb is None or isinstance(emb, Unknown):
        return None
    route = _route(g, present - {e}, pg, emb.rotation_system, e)
    return None if route is None else _with_route(rest, e, route)


def _insertion_bound(g: SpecialGraph, p: "_Params", tries: int = 8, floor: int = 0,
                     budget: int = 2 * 10**6):
    """A good drawing found by embedding a large subgraph and routing the rest.

    Each try embeds a maximal subgraph grown in a random order, routes the
    missing edges one at a time through the current embedding, then
    reroutes crossed edges while that helps.  Returns ``(config,
    embedding certificate)`` for the best try, or ``None``.  Stops early
    once ``floor`` crossings are reached.  Every embedding test gets a
    small ``budget``; running out just spoils that try.
    """
    surface = _surface(p.orientable, p.h)
    if p.budget is not None:
        budget = min(budget, p.budget)
    if p.allow_self or p.max_pair_multiplicity is not None or not p.allow_adjacent:
        return None
    best = None
    everything = set(g.edge_ids)
    for seed in range(tries):
        rng = random.Random(seed)
        thin = sorted(g.thin_edges)
        rng.shuffle(thin)
        # spanning forest first so every routed edge has both ends in place
        forest = nx.Graph()
        forest.add_nodes_from(g.vertices)
        for e in sorted(g.thick):
            forest.add_edge(*g.endpoints(e))
        order = []
        for e in thin:
            a, b = g.endpoints(e)
            if not nx.has_path(forest, a, b):
                forest.add_edge(a, b)
                order.append(e)
        order += [e for e in thin if e not in order]
        present = set(g.thick)
        missing = []
        for e in order:
            sub = delete_edges(g, [x for x in g.edge_ids if x not in present and x != e])
            if embeds(sub, surface, budget=budget) is True:
                present.add(e)
            else:
                missing.append(e)
        config = CrossingConfiguration()
        # an edge walled off by thick edges may get through once others are in
        while missing:
            stuck = []
            for e in missing:
                routed = _reroute(g, present | {e}, config, e, surface, budget)
                if routed is None:
                    stuck.append(e)
                else:
                    present.add(e)
                    config = routed
            if len(stuck) == len(missing):
                break
            missing = stuck
        if missing:
            continue
        improved = True
        while improved and len(config):
            improved = False
            for e in sorted(config.counts()):
                alt = _reroute(g, everything, config, e, surface, budget)
                if alt is not None and len(alt) < len(config):
                    config, improved = alt, True
        if best is None or len(config) < len(best):
            best = config
        if len(best) <= floor:
            break
    if best is None:
        return None
    emb = is_embeddable(planarize(g, best).graph, surface, budget=budget)
    if emb is None or isinstance(emb, Unknown):
        return None
    return best, emb

def _moved(pair, child: CrossingConfiguration, obstructions, auto: _Automorphism) -> list:
    """Obstructions that survive adding ``pair``, in the canonical child's coordinates."""
    (e, j), (f, l) = pair
    if e == f:
        return []
    counts = child.counts()

    def shift(piece):
        x, q = piece
        return (x, q + 1) if (x == e and q > j) or (x == f and q > l) else piece

    out = []
    for o in obstructions:
        if (e, j) in o or (f, l) in o:
            continue
        out.append(tuple(sorted(auto.piece(shift(x), counts) for x in o)))
    return out


def _expand(g, p: _Params, cfg: CrossingConfiguration, payload, need: int, autos) -> list:
    """Children of a branching configuration as ``(key, child, inherited)``.

    Each child is replaced by its canonical image so that runs are
    reproducible; children whose inherited obstructions cannot all be
    touched by the ``need - 1`` crossings left are skipped.
    """
    anchor, filters, known = payload
    slots = _thin_piece_slots(g, cfg)
    kids = _children(g, cfg, anchor, slots, p.allow_adjacent, p.allow_self,
                     p.max_pair_multiplicity, filters)
    out = []
    for child in sorted(kids, key=lambda c: c.crossings):
        pair = kids[child]
        ck, ai = _canonical_with_map(child, autos)
        moved = _moved(pair, child, known, autos[ai])
        if _hittable(moved, need - 1, p.allow_self):
            out.append((ck, CrossingConfiguration(ck), moved))
    return out


def _search(g, p: _Params, K: int, autos, stats, pool, deterministic, progress):
    """Is there a configuration with exactly ``K`` crossings that works?

    Levels below ``K`` are known (or assumed by the caller) to fail.  Each
    queued configuration carries the obstructions inherited from its
    parents; a child whose inherited obstructions cannot all be touched by
    the crossings still to come is never queued.
    """
    root = CrossingConfiguration()
    level = {canonical_form(root, autos): (root, ())}
    unknown = False
    for k in range(K + 1):
        need = K - k
        items = sorted(level.items(), key=lambda kv: kv[0])
        args = [(g, cfg, p, need, tuple(inh)) for _, (cfg, inh) in items]
        if pool is not None:
            results = list(pool.map(_evaluate_star, args, chunksize=max(1, len(args) // 64)))
        else:
            results = map(_evaluate_star, args)
        nxt: dict = {}
        for (key, (cfg, _)), (status, payload) in zip(items, results):
            stats["evaluated"] += 1
            if stats["deadline"] is not None and time.monotonic() > stats["deadline"]:
                return None, True
            if status == "ok":
                return (cfg, payload), False
            if status == "unknown":
                unknown = True
                continue
            if status == "drop" or need == 0:
                continue
            for ck, child, moved in _expand(g, p, cfg, payload, need, autos):
                if ck in nxt:
                    merged = nxt[ck][1]
                    merged.extend(o for o in moved if o not in merged)
                else:
                    nxt[ck] = (child, moved)
        if progress is not None:
            progress(K, k, len(items))
        level = nxt
        if not level:
            break
    return None, unknown


def crossing_sequence(g: SpecialGraph, orientable: bool = True, budget: int | None = 10**8,
                      threads: int = 1, progress=None, time_limit: float | None = None):
    """``(cr_0, .., cr_gamma)`` ending at the minimum genus, each entry certified.

    Entries are computed from the top down: ``cr_{h} >= cr_{h+1} + 1`` while
    the next entry is positive, which gives every search a head start.
    """
    start = time.monotonic()
    mg = min_genus(g, orientable=orientable, budget=budget)
    if isinstance(mg, Unknown):
        return mg
    top = mg.genus
    values = [0] * (top + 1)
    results: list = [None] * (top + 1)
    surface = _surface(orientable, top)
    results[top] = CrossingResult(0, DrawingCertificate(
        g, surface, CrossingConfiguration(), EmbeddingCertificate(mg.certificate.rotation_system, surface), 0),
        surface)
    for h in range(top - 1, -1, -1):
        lb = values[h + 1] + 1
        left = None if time_limit is None else max(0.0, start + time_limit - time.monotonic())
        res = crossing_number(g, _surface(orientable, h), budget=budget, lower_bound=lb, time_limit=left,
                              threads=threads, progress=progress)
        if not isinstance(res, CrossingResult):
            res.genus = h
            return res
        values[h] = res.crossings
        results[h] = res
    return CrossingSequence(orientable, values, results)
