"""Multigraphs with thick edges and rigid vertices.

A :class:`SpecialGraph` wraps a loopless multigraph together with a set of
thick (uncrossable) edges and, for some vertices, a prescribed cyclic order
of edge-ends that a drawing must reproduce up to reflection.

Edge-ends are written ``"<edge>#0"`` / ``"<edge>#1"``; end ``i`` of an edge
sits at ``ends[i]``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class GraphError(ValueError):
    """Raised for structurally invalid graphs or malformed documents."""


@dataclass(frozen=True, order=True)
class EdgeEnd:
    edge: str
    end: int

    def __str__(self) -> str:
        return f"{self.edge}#{self.end}"

    @classmethod
    def parse(cls, ref: str) -> "EdgeEnd":
        edge, sep, idx = str(ref).rpartition("#")
        if not sep or idx not in ("0", "1") or not edge:
            raise GraphError(f"bad edge-end reference {ref!r}")
        return cls(edge, int(idx))

    def other(self) -> "EdgeEnd":
        return EdgeEnd(self.edge, 1 - self.end)


def canonical_cycle(seq: Sequence) -> tuple:
    """Rotate a cyclic sequence so that its least element comes first."""
    seq = tuple(seq)
    if not seq:
        return seq
    i = seq.index(min(seq))
    return seq[i:] + seq[:i]


def same_cyclic_order(a: Sequence, b: Sequence, reflect: bool = True) -> bool:
    """True if ``a`` equals ``b`` as cyclic sequences (optionally up to reversal)."""
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        return False
    if canonical_cycle(a) == canonical_cycle(b):
        return True
    return reflect and canonical_cycle(a) == canonical_cycle(b[::-1])


@dataclass(frozen=True)
class Surface:
    """Closed surface: ``handles`` for orientable, ``crosscaps`` otherwise."""

    orientable: bool = True
    genus: int = 0

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if not self.orientable and self.genus < 1:
            raise ValueError("a nonorientable surface needs at least one crosscap")

    @property
    def euler_genus(self) -> int:
        return 2 * self.genus if self.orientable else self.genus

    def to_dict(self) -> dict:
        return {"orientable": self.orientable, "genus": self.genus}

    @classmethod
    def from_dict(cls, d: Mapping) -> "Surface":
        return cls(bool(d["orientable"]), int(d["genus"]))

    def __str__(self) -> str:
        if self.orientable:
            return "sphere" if self.genus == 0 else f"S{self.genus}"
        return f"N{self.genus}"


@dataclass(frozen=True)
class MultiGraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, tuple[str, str]], ...]

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]) -> "MultiGraph":
        return cls(tuple(vertices), tuple((eid, (u, v)) for eid, u, v in edges))

    @property
    def edge_ends(self) -> dict[str, tuple[str, str]]:
        return dict(self.edges)

    def incident(self) -> dict[str, list[EdgeEnd]]:
        inc: dict[str, list[EdgeEnd]] = {v: [] for v in self.vertices}
        for eid, (u, v) in self.edges:
            inc.setdefault(u, []).append(EdgeEnd(eid, 0))
            inc.setdefault(v, []).append(EdgeEnd(eid, 1))
        return inc

    def degree(self, v: str) -> int:
        return sum((u == v) + (w == v) for _, (u, w) in self.edges)


@dataclass(frozen=True)
class SpecialGraph:
    """A multigraph with thick edges and rigid rotations.

    Instances are immutable; every transformation returns a new graph.
    Rigid rotations are stored in canonical cyclic form.
    """

    graph: MultiGraph
    thick: frozenset[str] = frozenset()
    rigid: Mapping[str, tuple[EdgeEnd, ...]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "thick", frozenset(self.thick))
        object.__setattr__(
            self, "rigid", {v: canonical_cycle(tuple(r)) for v, r in sorted(self.rigid.items())}
        )

    @classmethod
    def build(cls, vertices, edges, thick=(), rigid=None) -> "SpecialGraph":
        """``edges`` is an iterable of ``(id, u, v)``; rigid maps vertex -> end refs."""
        rigid = rigid or {}
        rig = {
            v: tuple(e if isinstance(e, EdgeEnd) else EdgeEnd.parse(e) for e in rot)
            for v, rot in rigid.items()
        }
        return cls(MultiGraph.build(vertices, edges), frozenset(thick), rig)

    # convenience views -------------------------------------------------
    @property
    def vertices(self) -> tuple[str, ...]:
        return self.graph.vertices

    @property
    def edges(self):
        return self.graph.edges

    @property
    def edge_ids(self) -> list[str]:
        return [e for e, _ in self.graph.edges]

    @property
    def thin_edges(self) -> list[str]:
        return [e for e, _ in self.graph.edges if e not in self.thick]

    def endpoints(self, eid: str) -> tuple[str, str]:
        return self.graph.edge_ends[eid]

    def is_simple(self) -> bool:
        seen = set()
        for _, (u, v) in self.graph.edges:
            key = frozenset((u, v))
            if u == v or key in seen:
                return False
            seen.add(key)
        return True

    def __eq__(self, other):
        if not isinstance(other, SpecialGraph):
            return NotImplemented
        return (
            set(self.vertices) == set(other.vertices)
            and dict(self.edges) == dict(other.edges)
            and self.thick == other.thick
            and dict(self.rigid) == dict(other.rigid)
        )

    def __hash__(self):
        return hash(sha256(self))

    def __repr__(self):
        return (f"SpecialGraph(V={len(self.vertices)}, E={len(self.edges)}, "
                f"thick={len(self.thick)}, rigid={len(self.rigid)})")


# ----------------------------------------------------------------------------
# validation
# ----------------------------------------------------------------------------

def validate_graph(g: SpecialGraph) -> list[str]:
    """Return a list of invariant violations; an empty list means valid."""
    problems = []
    vset = set()
    for v in g.vertices:
        if v in vset:
            problems.append(f"duplicate vertex id {v!r}")
        vset.add(v)
    eids = set()
    for eid, (u, v) in g.edges:
        if eid in eids:
            problems.append(f"duplicate edge id {eid!r}")
        eids.add(eid)
        for w in (u, v):
            if w not in vset:
                problems.append(f"dangling endpoint {w!r} on edge {eid!r}")
        if u == v:
            problems.append(f"loop at {u!r} (edge {eid!r})")
    for eid in g.thick:
        if eid not in eids:
            problems.append(f"thick edge {eid!r} is not an edge")
    inc = g.graph.incident()
    for v, rot in g.rigid.items():
        if v not in vset:
            problems.append(f"rigid rotation for unknown vertex {v!r}")
            continue
        if len(set(rot)) != len(rot):
            problems.append(f"rotation at {v!r} repeats an end")
        expected = set(inc.get(v, []))
        got = set(rot)
        if got - expected:
            problems.append(f"rotation at {v!r} lists ends not incident with it: "
                            f"{sorted(map(str, got - expected))}")
        if expected - got:
            problems.append(f"rotation incomplete at {v!r}: missing "
                            f"{sorted(map(str, expected - got))}")
    return problems


def check_graph(g: SpecialGraph) -> SpecialGraph:
    problems = validate_graph(g)
    if problems:
        raise GraphError("; ".join(problems))
    return g


# ----------------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------------

_VERTEX_KEYS = {"id", "rigid"}
_EDGE_KEYS = {"id", "ends", "thick"}
_TOP_KEYS = {"vertices", "edges"}


def to_document(g: SpecialGraph) -> dict:
    vertices = []
    for v in sorted(g.vertices):
        item = {"id": v}
        if v in g.rigid:
            item["rigid"] = [str(e) for e in g.rigid[v]]
        vertices.append(item)
    edges = []
    for eid, (u, v) in sorted(g.edges):
        item = {"id": eid, "ends": [u, v]}
        if eid in g.thick:
            item["thick"] = True
        edges.append(item)
    return {"vertices": vertices, "edges": edges}


def encode(g: SpecialGraph) -> str:
    """Byte-deterministic JSON text for ``g`` (ids sorted)."""
    return json.dumps(to_document(g), indent=1, ensure_ascii=False) + "\n"


def from_document(doc: Mapping) -> SpecialGraph:
    if not isinstance(doc, Mapping):
        raise GraphError("graph document must be an object")
    for key in doc:
        if key not in _TOP_KEYS:
            raise GraphError(f"unknown field {key!r} in graph document")
    for key in _TOP_KEYS:
        if key not in doc:
            raise GraphError(f"missing field {key!r}")
    vertices, rigid = [], {}
    for i, item in enumerate(doc["vertices"]):
        if not isinstance(item, Mapping):
            raise GraphError(f"vertices[{i}] must be an object")
        for key in item:
            if key not in _VERTEX_KEYS:
                raise GraphError(f"unknown field {key!r} in vertices[{i}]")
        if "id" not in item:
            raise GraphError(f"missing field 'id' in vertices[{i}]")
        vertices.append(str(item["id"]))
        if "rigid" in item:
            try:
                rigid[str(item["id"])] = tuple(EdgeEnd.parse(r) for r in item["rigid"])
            except GraphError as exc:
                raise GraphError(f"vertices[{i}].rigid: {exc}") from None
    edges, thick = [], set()
    for i, item in enumerate(doc["edges"]):
        if not isinstance(item, Mapping):
            raise GraphError(f"edges[{i}] must be an object")
        for key in item:
            if key not in _EDGE_KEYS:
                raise GraphError(f"unknown field {key!r} in edges[{i}]")
        for key in ("id", "ends"):
            if key not in item:
                raise GraphError(f"missing field {key!r} in edges[{i}]")
        ends = item["ends"]
        if not isinstance(ends, (list, tuple)) or len(ends) != 2:
            raise GraphError(f"edges[{i}].ends must list two vertex ids")
        if ends[0] == ends[1]:
            raise GraphError(f"edges[{i}].ends: loops are not allowed")
        edges.append((str(item["id"]), str(ends[0]), str(ends[1])))
        thick_flag = item.get("thick", False)
        if not isinstance(thick_flag, bool):
            raise GraphError(f"edges[{i}].thick must be a boolean")
        if thick_flag:
            thick.add(str(item["id"]))
    g = SpecialGraph.build(vertices, edges, thick, rigid)
    return check_graph(g)


def decode(text: str) -> SpecialGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"not JSON: {exc}") from None
    return from_document(doc)


def sha256(g: SpecialGraph) -> str:
    return hashlib.sha256(encode(g).encode("utf-8")).hexdigest()


# ----------------------------------------------------------------------------
# transformations
# ----------------------------------------------------------------------------

def _replace_end(rigid, old: EdgeEnd, new: EdgeEnd):
    return {v: tuple(new if e == old else e for e in rot) for v, rot in rigid.items()}


def subdivide_edge(g: SpecialGraph, eid: str, t: int = 1, prefix: str | None = None) -> SpecialGraph:
    """Replace ``eid`` by a path of ``t + 1`` edges through ``t`` new vertices.

    New edges are ``<eid>.0 .. <eid>.t`` (from end 0 to end 1) and new
    vertices ``<eid>.s1 .. <eid>.st``; both inherit thickness.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    ends = g.graph.edge_ends
    if eid not in ends:
        raise GraphError(f"unknown edge id {eid!r}")
    prefix = prefix or eid
    u, v = ends[eid]
    chain = [u] + [f"{prefix}.s{i}" for i in range(1, t + 1)] + [v]
    existing = set(g.vertices) | set(ends)
    new_edges = [(f"{prefix}.{i}", chain[i], chain[i + 1]) for i in range(t + 1)]
    for name in chain[1:-1] + [e for e, _, _ in new_edges]:
        if name in existing:
            raise GraphError(f"subdivision would reuse id {name!r}")
    edges = []
    for e, (a, b) in g.edges:
        if e == eid:
            edges.extend(new_edges)
        else:
            edges.append((e, a, b))
    thick = set(g.thick)
    if eid in thick:
        thick.discard(eid)
        thick.update(e for e, _, _ in new_edges)
    rigid = _replace_end(dict(g.rigid), EdgeEnd(eid, 0), EdgeEnd(new_edges[0][0], 0))
    rigid = _replace_end(rigid, EdgeEnd(eid, 1), EdgeEnd(new_edges[-1][0], 1))
    return SpecialGraph.build(list(g.vertices) + chain[1:-1], edges, thick, rigid)


def relabel(g: SpecialGraph, vmap, emap) -> SpecialGraph:
    """Rename vertices and edges with the callables ``vmap`` and ``emap``."""
    edges = [(emap(e), vmap(u), vmap(v)) for e, (u, v) in g.edges]
    rigid = {vmap(v): tuple(EdgeEnd(emap(x.edge), x.end) for x in rot) for v, rot in g.rigid.items()}
    return SpecialGraph.build([vmap(v) for v in g.vertices], edges, {emap(e) for e in g.thick}, rigid)


def disjoint_union(g1: SpecialGraph, g2: SpecialGraph, tags=("1", "2")) -> SpecialGraph:
    """Union with ids namespaced as ``<tag>:<id>``."""
    a = relabel(g1, lambda v: f"{tags[0]}:{v}", lambda e: f"{tags[0]}:{e}")
    b = relabel(g2, lambda v: f"{tags[1]}:{v}", lambda e: f"{tags[1]}:{e}")
    return SpecialGraph.build(
        a.vertices + b.vertices,
        [(e, u, v) for e, (u, v) in a.edges + b.edges],
        a.thick | b.thick,
        {**a.rigid, **b.rigid},
    )


def delete_edges(g: SpecialGraph, eids: Iterable[str]) -> SpecialGraph:
    """Remove edges; rigid rotations are restricted to the surviving ends."""
    drop = set(eids)
    edges = [(e, u, v) for e, (u, v) in g.edges if e not in drop]
    rigid = {v: tuple(x for x in rot if x.edge not in drop) for v, rot in g.rigid.items()}
    return SpecialGraph.build(g.vertices, edges, g.thick - drop, rigid)


def components(g: SpecialGraph) -> list[list[str]]:
    """Vertex sets of connected components (isolated vertices included)."""
    adj = {v: [] for v in g.vertices}
    for _, (u, v) in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen, comps = set(), []
    for s in g.vertices:
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def induced(g: SpecialGraph, vertices: Iterable[str]) -> SpecialGraph:
    keep = set(vertices)
    edges = [(e, u, v) for e, (u, v) in g.edges if u in keep and v in keep]
    eids = {e for e, _, _ in edges}
    rigid = {v: r for v, r in g.rigid.items() if v in keep}
    return SpecialGraph.build([v for v in g.vertices if v in keep], edges, g.thick & eids, rigid)


def thick_subgraph(g: SpecialGraph) -> SpecialGraph:
    return delete_edges(g, g.thin_edges)
