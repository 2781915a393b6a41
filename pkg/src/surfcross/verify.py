"""Stand-alone checker for drawing certificates.

Everything is recomputed from the document: the planarization, the rigid
rotations, the facial walks and the Euler genus.  Nothing here calls the
search code, so a bug there cannot hide behind a matching bug here.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping

from .graph import GraphError, from_document, sha256


@dataclass
class Verdict:
    accepted: bool
    reason: str = "ok"
    euler_genus: int | None = None
    orientable: bool | None = None

    def __bool__(self):
        return self.accepted


def _reject(reason: str) -> Verdict:
    return Verdict(False, reason)


def _parse_end(ref):
    if not isinstance(ref, str) or "#" not in ref:
        raise ValueError(f"bad edge-end reference {ref!r}")
    e, _, i = ref.rpartition("#")
    if i not in ("0", "1"):
        raise ValueError(f"bad edge-end reference {ref!r}")
    return (e, int(i))


def _cyclic_equal(a, b) -> bool:
    if len(a) != len(b) or set(a) != set(b):
        return False
    if not a:
        return True
    k = list(b).index(a[0])
    return list(b[k:]) + list(b[:k]) == list(a)


def _same_up_to_reflection(a, b) -> bool:
    return _cyclic_equal(a, b) or _cyclic_equal(list(reversed(a)), b)


def verify_certificate(cert: Mapping | str) -> Verdict:
    """Accept iff every claim in a drawing certificate holds."""
    if isinstance(cert, str):
        try:
            cert = json.loads(cert)
        except json.JSONDecodeError as exc:
            return _reject(f"malformed JSON: {exc}")
    try:
        return _verify(cert)
    except (KeyError, TypeError, ValueError) as exc:
        return _reject(f"malformed certificate: {exc}")


def _verify(cert: Mapping) -> Verdict:
    for key in ("graph", "graph_sha", "surface", "crossings", "embedding"):
        if key not in cert:
            return _reject(f"missing field {key!r}")
    try:
        g = from_document(cert["graph"])
    except GraphError as exc:
        return _reject(f"invalid graph: {exc}")
    if sha256(g) != cert["graph_sha"]:
        return _reject("graph hash mismatch")
    surf = cert["surface"]
    orientable, genus = bool(surf["orientable"]), int(surf["genus"])
    if genus < 0 or (not orientable and genus < 1):
        return _reject("invalid surface")
    crossings = cert["crossings"]
    if "count" in cert and int(cert["count"]) != len(crossings):
        return _reject("count mismatch")

    ends = {e: uv for e, uv in g.edges}
    slots = defaultdict(list)
    pairs = []
    for item in crossings:
        a = (item["a"]["edge"], int(item["a"]["pos"]))
        b = (item["b"]["edge"], int(item["b"]["pos"]))
        for e, _ in (a, b):
            if e not in ends:
                return _reject(f"crossing on unknown edge {e!r}")
            if e in g.thick:
                return _reject("thick edge crossed")
        pairs.append((a, b))
        slots[a[0]].append(a[1])
        slots[b[0]].append(b[1])
    for e, ps in slots.items():
        if sorted(ps) != list(range(len(ps))):
            return _reject(f"positions on edge {e!r} are not 0..{len(ps) - 1}")

    # rebuild the planarization with the documented naming scheme
    order = sorted(pairs, key=lambda ab: tuple(sorted(ab)))
    where = {}
    for i, (a, b) in enumerate(order):
        where[a] = i
        where[b] = i
    pv = set(g.vertices) | {f"~x{i}" for i in range(len(order))}
    pe = {}                       # edge id -> (u, v)
    first_piece, last_piece = {}, {}
    before, after = {}, {}        # slot -> piece ending / starting at its crossing
    extra = 0
    for e, (u, v) in g.edges:
        m = len(slots.get(e, ()))
        if m == 0:
            pe[e] = (u, v)
            first_piece[e] = last_piece[e] = e
            continue
        nodes = [u] + [f"~x{where[(e, p)]}" for p in range(m)] + [v]
        seq = []
        for j in range(m + 1):
            name = f"{e}~{j}"
            if nodes[j] == nodes[j + 1]:
                mid = f"~s{extra}"
                extra += 1
                pv.add(mid)
                pe[name] = (nodes[j], mid)
                pe[name + ".1"] = (mid, nodes[j + 1])
                seq.append((name, name + ".1"))
            else:
                pe[name] = (nodes[j], nodes[j + 1])
                seq.append((name, name))
        first_piece[e] = seq[0][0]
        last_piece[e] = seq[-1][1]
        for p in range(m):
            before[(e, p)] = seq[p][1]
            after[(e, p)] = seq[p + 1][0]
    rigid = {}
    for v, pi in g.rigid.items():
        img = []
        for x in pi:
            piece = first_piece[x.edge] if x.end == 0 else last_piece[x.edge]
            img.append((piece, x.end))
        rigid[v] = img
    for i, (a, b) in enumerate(order):
        rigid[f"~x{i}"] = [(before[a], 1), (before[b], 1), (after[a], 0), (after[b], 0)]

    emb = cert["embedding"]
    rotation = {v: [_parse_end(r) for r in rs] for v, rs in emb["rotation"].items()}
    signature = {e: int(s) for e, s in emb.get("signature", {}).items()}
    incident = defaultdict(set)
    for e, (u, v) in pe.items():
        incident[u].add((e, 0))
        incident[v].add((e, 1))
    for v in pv:
        rot = rotation.get(v, [])
        if len(rot) != len(set(rot)) or set(rot) != incident[v]:
            return _reject(f"rotation at {v!r} does not match the planarization")
    if set(rotation) - pv:
        return _reject("rotation names unknown vertices")
    for e, s in signature.items():
        if e not in pe or s not in (1, -1):
            return _reject(f"bad signature entry for {e!r}")
    for v, pi in rigid.items():
        if len(pi) >= 4 and not _same_up_to_reflection(pi, rotation[v]):
            return _reject(f"rigid rotation violated at {v!r}")

    eg, nonorientable_parts, comps = _euler_genus(pv, pe, rotation, signature)
    total = sum(eg)
    if orientable:
        if nonorientable_parts:
            return _reject("embedding is not orientable")
        if total > 2 * genus:
            return _reject(f"embedding needs genus {total // 2} > {genus}")
    else:
        need = total if nonorientable_parts else total + 1
        if total > 0 and need > genus:
            return _reject(f"embedding needs {need} crosscaps > {genus}")
    return Verdict(True, "ok", total, not nonorientable_parts)


def _euler_genus(pv, pe, rotation, signature):
    succ, pred = {}, {}
    for v, rot in rotation.items():
        k = len(rot)
        for i, x in enumerate(rot):
            succ[x] = rot[(i + 1) % k]
            pred[x] = rot[(i - 1) % k]
    # connected components
    parent = {v: v for v in pv}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pe.values():
        parent[find(u)] = find(v)
    # face orbits over (end, direction); each face is counted twice
    seen = set()
    orbits = defaultdict(int)
    for e in pe:
        for i in (0, 1):
            for d in (1, -1):
                start = ((e, i), d)
                if start in seen:
                    continue
                cur = start
                while cur not in seen:
                    seen.add(cur)
                    (f, j), dd = cur
                    dd2 = dd * signature.get(f, 1)
                    arrive = (f, 1 - j)
                    cur = (succ[arrive] if dd2 == 1 else pred[arrive], dd2)
                orbits[find(pe[e][0])] += 1
    verts = defaultdict(int)
    edges = defaultdict(int)
    for v in pv:
        verts[find(v)] += 1
    for u, _ in pe.values():
        edges[find(u)] += 1
    eg = []
    for c in edges:
        eg.append(2 - verts[c] + edges[c] - orbits[c] // 2)
    # orientability: signatures must be a coboundary on each component
    adj = defaultdict(list)
    for e, (u, v) in pe.items():
        adj[u].append((v, signature.get(e, 1)))
        adj[v].append((u, signature.get(e, 1)))
    colour = {}
    nonorientable = 0
    for root in pv:
        if root in colour:
            continue
        colour[root] = 1
        stack = [root]
        while stack:
            x = stack.pop()
            for y, s in adj[x]:
                want = colour[x] * s
                if y not in colour:
                    colour[y] = want
                    stack.append(y)
                elif colour[y] != want:
                    nonorientable += 1
    return eg, nonorientable, len(edges)
