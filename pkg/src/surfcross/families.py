"""Generators for the hamburger graphs and the K5-union family.

Vertex names follow the usual picture of ``H_n``: the thick cycle runs
``q v_1 .. v_n r r' s' s u_n .. u_1 t t' q'`` (top side left to right, right
side downwards, bottom side right to left, left side upwards), ``tau0 = qr``
and ``tau1 = st`` are thick chords, row ``r1`` joins ``q'`` to ``r'`` through
the rigid vertices ``v_i'`` (even ``i``) and row ``r2`` joins ``t'`` to ``s'``
through ``u_i'`` (odd ``i``).  Column ``c_i`` runs from ``u_i`` up to ``v_i``
through its rigid vertex, which lets the column pass straight through the
row.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import EdgeEnd, SpecialGraph, check_graph, disjoint_union


FAMILIES = ("hamburger", "hamburger_wide", "hamburger_plus", "k5_union", "complete")


@dataclass(frozen=True)
class FamilySpec:
    name: str
    n: int | None = None
    k: int = 0
    a: int | None = None

    def __post_init__(self):
        if self.name in ("hamburger", "hamburger_wide") and (self.n is None or self.n < 3):
            raise ValueError(f"{self.name} requires n >= 3")
        if self.name == "hamburger_wide" and self.k < 0:
            raise ValueError("hamburger_wide requires k >= 0")
        if self.name == "k5_union" and (self.a is None or self.a < 2):
            raise ValueError("k5_union requires a >= 2")
        if self.name == "complete" and (self.n is None or self.n < 1):
            raise ValueError("complete requires n >= 1")
        if self.name not in FAMILIES:
            raise ValueError(f"unknown family {self.name!r}")

    def build(self) -> SpecialGraph:
        if self.name == "hamburger":
            return gen_hamburger(self.n)
        if self.name == "hamburger_wide":
            return gen_hamburger_wide(self.n, self.k)
        if self.name == "hamburger_plus":
            return gen_hamburger_plus()
        if self.name == "complete":
            return complete_graph(self.n)
        return gen_k5_union(self.a)


class _Builder:
    def __init__(self):
        self.vertices: list[str] = []
        self.edges: list[tuple[str, str, str]] = []
        self.thick: set[str] = set()
        self.rigid: dict[str, list[EdgeEnd]] = {}

    def vertex(self, *names):
        for v in names:
            if v not in self.vertices:
                self.vertices.append(v)

    def edge(self, eid, u, v, thick=False) -> str:
        self.vertex(u, v)
        self.edges.append((eid, u, v))
        if thick:
            self.thick.add(eid)
        return eid

    def path(self, prefix, nodes, thick=False) -> list[str]:
        return [self.edge(f"{prefix}.{i}", a, b, thick)
                for i, (a, b) in enumerate(zip(nodes, nodes[1:]))]

    def end_at(self, eid, v) -> EdgeEnd:
        for e, a, b in self.edges:
            if e == eid:
                return EdgeEnd(eid, 0 if a == v else 1)
        raise KeyError(eid)

    def crossing_vertex(self, x, up, right, down, left):
        """Rigid rotation read clockwise: up, right, down, left."""
        self.rigid[x] = [self.end_at(e, x) for e in (up, right, down, left)]

    def graph(self) -> SpecialGraph:
        return check_graph(SpecialGraph.build(self.vertices, self.edges, self.thick, self.rigid))


def _hamburger(n: int, extra: int = 0, third_row: bool = False) -> SpecialGraph:
    b = _Builder()
    top = ["q"] + [f"v{i}" for i in range(1, n + 1)] + ["r"]
    right = ["r", "r''", "r'", "s'", "s"] if third_row else ["r", "r'", "s'", "s"]
    bottom = ["s"] + [f"u{i}" for i in range(n, 0, -1)] + ["t"]
    left = ["t", "t'", "q'", "q''", "q"] if third_row else ["t", "t'", "q'", "q"]
    cycle = top + right[1:] + bottom[1:] + left[1:-1]
    b.vertex(*cycle)
    for i in range(len(cycle)):
        b.edge(f"C.{i}", cycle[i], cycle[(i + 1) % len(cycle)], thick=True)
    b.edge("tau0", "q", "r", thick=True)
    b.edge("tau1", "s", "t", thick=True)

    even = [i for i in range(1, n + 1) if i % 2 == 0]
    odd = [i for i in range(1, n + 1) if i % 2 == 1]
    dups = [f"d{j}" for j in range(1, extra + 1)]
    # row r1: q' -> v_2' -> (duplicates of c_2) -> v_4' ... -> r'
    r1_nodes = ["q'"]
    for i in even:
        r1_nodes.append(f"v{i}'")
        if i == 2:
            r1_nodes += dups
    r1_nodes.append("r'")
    r1 = b.path("r1", r1_nodes)
    r2_nodes = ["t'"] + [f"u{i}'" for i in odd] + ["s'"]
    r2 = b.path("r2", r2_nodes)
    if third_row:
        r3_nodes = ["q''"] + [f"u{i}''" for i in odd] + ["r''"]
        r3 = b.path("r2+", r3_nodes)

    for i in range(1, n + 1):
        if i % 2 == 0:
            mid = f"v{i}'"
            lo = b.edge(f"c{i}.0", f"u{i}", mid)
            hi = b.edge(f"c{i}.1", mid, f"v{i}")
            k = r1_nodes.index(mid)
            b.crossing_vertex(mid, hi, r1[k], lo, r1[k - 1])
        else:
            mid = f"u{i}'"
            lo = b.edge(f"c{i}.0", f"u{i}", mid)
            k = r2_nodes.index(mid)
            if third_row:
                top_mid = f"u{i}''"
                midc = b.edge(f"c{i}.1", mid, top_mid)
                hi = b.edge(f"c{i}.2", top_mid, f"v{i}")
                b.crossing_vertex(mid, midc, r2[k], lo, r2[k - 1])
                k3 = r3_nodes.index(top_mid)
                b.crossing_vertex(top_mid, hi, r3[k3], midc, r3[k3 - 1])
            else:
                hi = b.edge(f"c{i}.1", mid, f"v{i}")
                b.crossing_vertex(mid, hi, r2[k], lo, r2[k - 1])
    for j, d in enumerate(dups, start=1):
        lo = b.edge(f"c2d{j}.0", "u2", d)
        hi = b.edge(f"c2d{j}.1", d, "v2")
        k = r1_nodes.index(d)
        b.crossing_vertex(d, hi, r1[k], lo, r1[k - 1])
    return b.graph()


def gen_hamburger(n: int) -> SpecialGraph:
    """``H_n``: ``3n + 8`` vertices, ``5n + 12`` edges, ``n`` rigid vertices."""
    if n < 3:
        raise ValueError("hamburger graphs need n >= 3")
    return _hamburger(n)


def gen_hamburger_wide(n: int, k: int) -> SpecialGraph:
    """``H_{n,k}``: ``H_n`` plus ``k`` copies of column ``c_2``.

    Copy ``j`` is the path ``u2 - dj - v2`` with the rigid vertex ``dj``
    placed on row ``r1`` right after ``v2'``.
    """
    if n < 3 or k < 0:
        raise ValueError("hamburger_wide needs n >= 3 and k >= 0")
    return _hamburger(n, extra=k)


def gen_hamburger_plus() -> SpecialGraph:
    """``H_3^+``: ``H_3`` with a third row above ``r1``.

    The new row ``r2+`` runs ``q'' -> u1'' -> u3'' -> r''`` where ``q''`` and
    ``r''`` are new thick-cycle vertices between ``q, q'`` and ``r, r'``.
    The odd columns pass through rigid vertices on both ``r2`` and ``r2+``,
    so deleting either outer row leaves a subdivision of ``H_3``.
    """
    return _hamburger(3, third_row=True)


def _k5(prefix: str, mult: int = 1, single: tuple[int, int] | None = None) -> SpecialGraph:
    b = _Builder()
    names = [f"{prefix}{i}" for i in range(5)]
    b.vertex(*names)
    for i in range(5):
        for j in range(i + 1, 5):
            copies = 1 if (i, j) == single else mult
            for c in range(copies):
                suffix = "" if copies == 1 else f".{c}"
                b.edge(f"{prefix}{i}{j}{suffix}", names[i], names[j])
    return b.graph()


def gen_k5_union(a: int) -> SpecialGraph:
    """``K5`` plus a second ``K5`` whose edges, all but ``b0b1``, carry ``a - 1`` copies."""
    if a < 2:
        raise ValueError("k5_union requires a >= 2")
    g1 = _k5("a")
    g2 = _k5("b", mult=a - 1, single=(0, 1))
    return disjoint_union(g1, g2, tags=("G1", "G2"))


def complete_graph(n: int, prefix: str = "x") -> SpecialGraph:
    b = _Builder()
    b.vertex(*[f"{prefix}{i}" for i in range(n)])
    for i in range(n):
        for j in range(i + 1, n):
            b.edge(f"{prefix}{i}{prefix}{j}", f"{prefix}{i}", f"{prefix}{j}")
    return b.graph()
