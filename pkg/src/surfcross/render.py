"""SVG pictures of drawing certificates and crossing sequences.

Sphere drawings are laid out straight from the certified rotation system.
On other surfaces the picture is a schematic: the fundamental polygon with
its side labels and the planarization drawn inside on a spring layout.
"""
from __future__ import annotations

import math
from collections import deque
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

from .graph import EdgeEnd, from_document  # noqa: E402
from .solver import CrossingConfiguration, planarize  # noqa: E402
from .verify import verify_certificate  # noqa: E402

# same input, same bytes
plt.rcParams["svg.hashsalt"] = "surfcross"
_META = {"Date": None}


def _planar_positions(pg, rotation: Mapping[str, Sequence[EdgeEnd]], signature: Mapping[str, int]):
    """Coordinates from a sphere embedding, or ``None`` if networkx rejects it."""
    ends = pg.graph.edge_ends
    adj = {v: [] for v in pg.vertices}
    for e, (u, v) in pg.edges:
        adj[u].append((v, e))
        adj[v].append((u, e))
    flip = {}
    for root in pg.vertices:
        if root in flip:
            continue
        flip[root] = 1
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, e in adj[x]:
                if y not in flip:
                    flip[y] = flip[x] * signature.get(e, 1)
                    queue.append(y)
    emb = nx.PlanarEmbedding()
    for v in pg.vertices:
        emb.add_node(("v", v))
    for e in ends:
        emb.add_node(("m", e))
    for v, rot in rotation.items():
        order = list(rot) if flip[v] == 1 else list(reversed(rot))
        prev = None
        for x in order:
            m = ("m", x.edge)
            emb.add_half_edge(("v", v), m, cw=prev) if prev is not None else emb.add_half_edge(("v", v), m)
            prev = m
    for e, (u, v) in ends.items():
        m = ("m", e)
        emb.add_half_edge(m, ("v", u))
        emb.add_half_edge(m, ("v", v), cw=("v", u))
    try:
        emb.check_structure()
    except nx.NetworkXException:
        return None
    return nx.combinatorial_embedding_to_pos(emb)


def render_certificate(cert: Mapping, path: str, title: str | None = None) -> str:
    """Write an SVG picture of ``cert`` to ``path`` and return the path.

    Raises ``ValueError`` for a certificate that does not verify.
    """
    verdict = verify_certificate(cert)
    if not verdict:
        raise ValueError(f"refusing to render a certificate that does not verify: {verdict.reason}")
    g = from_document(cert["graph"])
    config = CrossingConfiguration.from_list(cert["crossings"])
    pg = planarize(g, config, allow_self=True)
    surf = cert["surface"]
    emb = cert["embedding"]
    rotation = {v: [EdgeEnd.parse(r) for r in rs] for v, rs in emb["rotation"].items()}
    signature = {e: int(s) for e, s in emb.get("signature", {}).items()}
    sphere = surf["genus"] == 0
    pos = _planar_positions(pg.graph, rotation, signature) if sphere else None
    fig, ax = plt.subplots(figsize=(7, 7))
    ax.set_aspect("equal")
    ax.axis("off")
    if pos is None:
        pos = _schematic(ax, pg.graph, surf)
    _draw(ax, pg.graph, pos, g)
    label = "sphere" if sphere else (f"S{surf['genus']}" if surf["orientable"] else f"N{surf['genus']}")
    ax.set_title(title or f"{len(config)} crossing(s) on {label}")
    fig.savefig(path, format="svg", bbox_inches="tight", metadata=_META)
    plt.close(fig)
    return path


def _schematic(ax, pg, surf) -> dict:
    sides = max(4, 4 * surf["genus"]) if surf["orientable"] else max(2, 2 * surf["genus"])
    pts = [(1.3 * math.cos(2 * math.pi * i / sides + math.pi / sides),
            1.3 * math.sin(2 * math.pi * i / sides + math.pi / sides)) for i in range(sides + 1)]
    ax.plot([p[0] for p in pts], [p[1] for p in pts], color="0.6", lw=1, ls="--", gid="polygon")
    labels = []
    if surf["orientable"]:
        for i in range(1, surf["genus"] + 1):
            labels += [f"a{i}", f"b{i}", f"a{i}'", f"b{i}'"]
    else:
        for i in range(1, surf["genus"] + 1):
            labels += [f"c{i}", f"c{i}"]
    for i, lab in enumerate(labels[:sides]):
        (x0, y0), (x1, y1) = pts[i], pts[i + 1]
        ax.text(1.08 * (x0 + x1) / 2, 1.08 * (y0 + y1) / 2, lab, color="0.4",
                ha="center", va="center", fontsize=8)
    h = nx.MultiGraph()
    h.add_nodes_from(pg.vertices)
    h.add_edges_from((u, v) for _, (u, v) in pg.edges)
    raw = nx.spring_layout(h, seed=1)
    return {("v", v): xy for v, xy in raw.items()}


def _draw(ax, sg, pos, original):
    for e, (u, v) in sg.edges:
        pu, pv = pos[("v", u)], pos[("v", v)]
        pm = pos.get(("m", e), ((pu[0] + pv[0]) / 2, (pu[1] + pv[1]) / 2))
        thick = e in sg.thick
        ax.plot([pu[0], pm[0], pv[0]], [pu[1], pm[1], pv[1]],
                color="black" if thick else "tab:blue", lw=3 if thick else 1.2,
                solid_capstyle="round", zorder=1)
    marks, plain, boxed = [], [], []
    for v in sg.vertices:
        if v.startswith("~s"):
            continue
        xy = pos[("v", v)]
        if v.startswith("~x"):
            marks.append(xy)
        else:
            (boxed if v in original.rigid else plain).append(xy)
    for pts, style in ((plain, "o"), (boxed, "s")):
        if pts:
            ax.scatter([p[0] for p in pts], [p[1] for p in pts], marker=style, color="white",
                       edgecolors="black", s=30, zorder=2, gid="vertices")
    if marks:
        ax.scatter([p[0] for p in marks], [p[1] for p in marks], marker="x", color="tab:red",
                   s=60, zorder=3, gid="crossings")


def render_sequences(rows: Sequence[tuple[str, Sequence[int]]], path: str) -> str:
    """Step plot of crossing sequences, one line per graph."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, seq in rows:
        ax.plot(range(len(seq)), list(seq), marker="o", label=name)
    ax.set_xlabel("genus")
    ax.set_ylabel("crossing number")
    ax.xaxis.get_major_locator().set_params(integer=True)
    if rows:
        ax.legend(fontsize=8)
    fig.savefig(path, format="svg", bbox_inches="tight", metadata=_META)
    plt.close(fig)
    return path
