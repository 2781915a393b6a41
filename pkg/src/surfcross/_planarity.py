"""Left-right planarity test, compiled.

Only the yes/no part of the algorithm is implemented; no embedding is
built.  Edges are plain integer pairs and the graph must be simple.
Conflict pairs live in four parallel arrays (left/right low/high edge ids,
-1 for "none").
"""
from __future__ import annotations

import numpy as np
from numba import njit

_NONE = -1


@njit(cache=True)
def _lowest(k, pl_lo, pr_lo, lowpt):
    if pl_lo[k] == -1:
        return lowpt[pr_lo[k]]
    if pr_lo[k] == -1:
        return lowpt[pl_lo[k]]
    return min(lowpt[pl_lo[k]], lowpt[pr_lo[k]])


@njit(cache=True)
def lr_planar(n, eu, ev):
    """True iff the simple graph on ``0..n-1`` with edges ``(eu[i], ev[i])`` is planar."""
    m = eu.shape[0]
    if n > 2 and m > 3 * n - 6:
        return False
    # adjacency in CSR form over edge ids
    deg = np.zeros(n + 1, np.int64)
    for i in range(m):
        deg[eu[i] + 1] += 1
        deg[ev[i] + 1] += 1
    for v in range(n):
        deg[v + 1] += deg[v]
    adj = np.empty(2 * m, np.int64)
    fill = deg[:n].copy()
    for i in range(m):
        adj[fill[eu[i]]] = i
        fill[eu[i]] += 1
        adj[fill[ev[i]]] = i
        fill[ev[i]] += 1

    height = -np.ones(n, np.int64)
    parent = -np.ones(n, np.int64)
    src = -np.ones(m, np.int64)
    dst = -np.ones(m, np.int64)
    lowpt = np.zeros(m, np.int64)
    lowpt2 = np.zeros(m, np.int64)
    nesting = np.zeros(m, np.int64)
    roots = np.empty(n, np.int64)
    nroots = 0
    ind = np.zeros(n, np.int64)
    skip = np.zeros(m, np.bool_)
    stack = np.empty(n + 1, np.int64)

    # orientation by DFS, lowpoints and nesting depth
    for r in range(n):
        if height[r] >= 0:
            continue
        height[r] = 0
        roots[nroots] = r
        nroots += 1
        sp = 0
        stack[sp] = r
        sp += 1
        while sp > 0:
            sp -= 1
            v = stack[sp]
            e = parent[v]
            while deg[v] + ind[v] < deg[v + 1]:
                i = adj[deg[v] + ind[v]]
                w = eu[i] + ev[i] - v
                if not skip[i]:
                    if src[i] >= 0:
                        ind[v] += 1
                        continue
                    src[i] = v
                    dst[i] = w
                    lowpt[i] = height[v]
                    lowpt2[i] = height[v]
                    if height[w] < 0:
                        parent[w] = i
                        height[w] = height[v] + 1
                        stack[sp] = v
                        stack[sp + 1] = w
                        sp += 2
                        skip[i] = True
                        break
                    lowpt[i] = height[w]
                nesting[i] = 2 * lowpt[i]
                if lowpt2[i] < height[v]:
                    nesting[i] += 1
                if e >= 0:
                    if lowpt[i] < lowpt[e]:
                        lowpt2[e] = min(lowpt[e], lowpt2[i])
                        lowpt[e] = lowpt[i]
                    elif lowpt[i] > lowpt[e]:
                        lowpt2[e] = min(lowpt2[e], lowpt[i])
                    else:
                        lowpt2[e] = min(lowpt2[e], lowpt2[i])
                ind[v] += 1

    # outgoing edges of every vertex, by nesting depth
    ostart = np.zeros(n + 1, np.int64)
    for i in range(m):
        ostart[src[i] + 1] += 1
    for v in range(n):
        ostart[v + 1] += ostart[v]
    out = np.empty(m, np.int64)
    fill = ostart[:n].copy()
    for i in range(m):
        out[fill[src[i]]] = i
        fill[src[i]] += 1
    for v in range(n):
        a, b = ostart[v], ostart[v + 1]
        if b - a > 1:
            seg = out[a:b]
            out[a:b] = seg[np.argsort(nesting[seg], kind="mergesort")]

    # testing
    ref = -np.ones(m, np.int64)
    lowpt_edge = -np.ones(m, np.int64)
    bottom = np.zeros(m, np.int64)
    pl_lo = np.empty(m + 1, np.int64)
    pl_hi = np.empty(m + 1, np.int64)
    pr_lo = np.empty(m + 1, np.int64)
    pr_hi = np.empty(m + 1, np.int64)
    top = 0
    ind[:] = 0
    skip[:] = False
    for t in range(nroots):
        sp = 0
        stack[sp] = roots[t]
        sp += 1
        while sp > 0:
            sp -= 1
            v = stack[sp]
            e = parent[v]
            skip_final = False
            while ostart[v] + ind[v] < ostart[v + 1]:
                ei = out[ostart[v] + ind[v]]
                w = dst[ei]
                if not skip[ei]:
                    bottom[ei] = top
                    if ei == parent[w]:
                        stack[sp] = v
                        stack[sp + 1] = w
                        sp += 2
                        skip[ei] = True
                        skip_final = True
                        break
                    lowpt_edge[ei] = ei
                    pl_lo[top] = -1
                    pl_hi[top] = -1
                    pr_lo[top] = ei
                    pr_hi[top] = ei
                    top += 1
                if lowpt[ei] < height[v]:
                    if ind[v] == 0:
                        lowpt_edge[e] = lowpt_edge[ei]
                    else:
                        # add constraints of ei
                        Pl_lo, Pl_hi, Pr_lo, Pr_hi = -1, -1, -1, -1
                        while True:
                            top -= 1
                            ql_lo, ql_hi, qr_lo, qr_hi = pl_lo[top], pl_hi[top], pr_lo[top], pr_hi[top]
                            if not (ql_lo == -1 and ql_hi == -1):
                                ql_lo, ql_hi, qr_lo, qr_hi = qr_lo, qr_hi, ql_lo, ql_hi
                            if not (ql_lo == -1 and ql_hi == -1):
                                return False
                            if lowpt[qr_lo] > lowpt[e]:
                                if Pr_lo == -1 and Pr_hi == -1:
                                    Pr_hi = qr_hi
                                else:
                                    ref[Pr_lo] = qr_hi
                                Pr_lo = qr_lo
                            else:
                                ref[qr_lo] = lowpt_edge[e]
                            if top == bottom[ei]:
                                break
                        while top > 0:
                            k = top - 1
                            lconf = not (pl_lo[k] == -1 and pl_hi[k] == -1) and lowpt[pl_hi[k]] > lowpt[ei]
                            rconf = not (pr_lo[k] == -1 and pr_hi[k] == -1) and lowpt[pr_hi[k]] > lowpt[ei]
                            if not (lconf or rconf):
                                break
                            top -= 1
                            ql_lo, ql_hi, qr_lo, qr_hi = pl_lo[top], pl_hi[top], pr_lo[top], pr_hi[top]
                            if rconf:
                                ql_lo, ql_hi, qr_lo, qr_hi = qr_lo, qr_hi, ql_lo, ql_hi
                            if not (qr_lo == -1 and qr_hi == -1) and lowpt[qr_hi] > lowpt[ei]:
                                return False
                            if Pr_lo != -1:
                                ref[Pr_lo] = qr_hi
                            if qr_lo != -1:
                                Pr_lo = qr_lo
                            if Pl_lo == -1 and Pl_hi == -1:
                                Pl_hi = ql_hi
                            else:
                                ref[Pl_lo] = ql_hi
                            Pl_lo = ql_lo
                        if not (Pl_lo == -1 and Pl_hi == -1 and Pr_lo == -1 and Pr_hi == -1):
                            pl_lo[top], pl_hi[top], pr_lo[top], pr_hi[top] = Pl_lo, Pl_hi, Pr_lo, Pr_hi
                            top += 1
                ind[v] += 1
            if not skip_final and e >= 0:
                # remove back edges returning to the parent
                u = src[e]
                while top > 0 and _lowest(top - 1, pl_lo, pr_lo, lowpt) == height[u]:
                    top -= 1
                if top > 0:
                    k = top - 1
                    while pl_hi[k] != -1 and dst[pl_hi[k]] == u:
                        pl_hi[k] = ref[pl_hi[k]]
                    if pl_hi[k] == -1 and pl_lo[k] != -1:
                        ref[pl_lo[k]] = pr_lo[k]
                        pl_lo[k] = -1
                    while pr_hi[k] != -1 and dst[pr_hi[k]] == u:
                        pr_hi[k] = ref[pr_hi[k]]
                    if pr_hi[k] == -1 and pr_lo[k] != -1:
                        ref[pr_lo[k]] = pl_lo[k]
                        pr_lo[k] = -1
                if lowpt[e] < height[u]:
                    hl = pl_hi[top - 1]
                    hr = pr_hi[top - 1]
                    if hl != -1 and (hr == -1 or lowpt[hl] > lowpt[hr]):
                        ref[e] = hl
                    else:
                        ref[e] = hr
    return True


def is_planar_simple(n: int, edges) -> bool:
    """Planarity of a simple graph given as index pairs."""
    if not len(edges):
        return True
    arr = np.asarray(edges, dtype=np.int64)
    return bool(lr_planar(n, arr[:, 0].copy(), arr[:, 1].copy()))
