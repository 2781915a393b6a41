"""Exact maximum face count over rotation systems by a frontier sweep.

Vertices are fixed one at a time in a chosen order.  Partially traced face
walks are chains of darts that run through fixed vertices; each chain starts
on a frontier edge pointing into the fixed region and ends on one pointing
out of it.  The pairing of those frontier darts (plus, for signed systems,
whether a negative edge has been used) is all the future needs to know, so
partial assignments with the same pairing are merged keeping the one with
more closed faces.

Elements are ``2 * h + b`` where ``h = 2 * edge + end`` is the dart leaving
through that end and ``b`` is the local orientation bit (always 0 in the
orientable mode).  Frontier chains store "baked" labels: an outgoing element
is labelled by the orientation it will have on arrival, so edge signatures
never have to be carried in the state.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class Core:
    """Compact loopless multigraph used by the sweep.

    ``rotations[v]`` lists the admissible cyclic orders at ``v`` as tuples of
    end indices (``None`` means every cyclic order).
    """

    n: int
    edges: list[tuple[int, int]]
    rotations: list

    def ends_at(self):
        at = [[] for _ in range(self.n)]
        for e, (u, v) in enumerate(self.edges):
            at[u].append(2 * e)
            at[v].append(2 * e + 1)
        return at

    def vert_of_end(self, h: int) -> int:
        return self.edges[h >> 1][h & 1]


def all_cyclic_orders(ends):
    ends = list(ends)
    if len(ends) <= 2:
        return [tuple(ends)]
    first, rest = ends[0], ends[1:]
    return [(first,) + p for p in itertools.permutations(rest)]


def _mirror_reps(rots):
    """Keep one rotation out of every {rho, reversed rho} pair."""
    seen, reps = set(), []
    for r in rots:
        rev = (r[0],) + tuple(reversed(r[1:]))
        if r in seen or rev in seen:
            continue
        seen.add(r)
        reps.append(r)
    return reps


def sweep_order(core: Core) -> list[int]:
    """Greedy vertex order keeping the frontier small."""
    n = core.n
    adj = [[] for _ in range(n)]
    for u, v in core.edges:
        adj[u].append(v)
        adj[v].append(u)
    best = None
    starts = sorted(range(n), key=lambda v: (len(adj[v]), v))[: min(n, 4)]
    for s in starts:
        done = [False] * n
        inside = [0] * n
        order = []
        front = 0
        cur = s
        peak, total = 0, 0
        while True:
            done[cur] = True
            order.append(cur)
            front += len(adj[cur]) - 2 * inside[cur]
            for w in adj[cur]:
                inside[w] += 1
            peak = max(peak, front)
            total += front
            if len(order) == n:
                break
            cand = None
            for v in range(n):
                if done[v]:
                    continue
                key = (-(2 * inside[v] - len(adj[v])), -inside[v], v)
                if inside[v] == 0:
                    key = (10**6,) + key
                if cand is None or key < cand[0]:
                    cand = (key, v)
            cur = cand[1]
        cost = (peak, total)
        if best is None or cost < best[0]:
            best = (cost, order)
    return best[1] if best else []


@dataclass
class SweepResult:
    best: int | None          # max closed cycles found (None if pruned away)
    witness: dict | None      # vertex -> rotation tuple, "lam": {edge: +-1}
    states: int


def max_cycles(core: Core, signed: bool = False, need_negative: bool = False,
               target: int | None = None, budget: int | None = None,
               order: list[int] | None = None, cotree: set[int] | None = None,
               witness: bool = True, engine: str = "jit") -> SweepResult:
    """Maximum number of closed walks of the face permutation.

    In the orientable mode this is the face count.  In signed mode every
    face is seen twice, so callers halve it.  ``need_negative`` restricts
    to signature vectors with a negative co-tree edge (nonorientable).
    The graph must be connected.  With ``target`` set, branches that cannot
    reach ``target`` closed cycles are dropped and ``best`` is ``None`` when
    nothing reaches it.  ``engine`` is ``"jit"`` (compiled layer step) or
    ``"py"`` (reference implementation).
    """
    n = core.n
    m = len(core.edges)
    if order is None:
        order = sweep_order(core)
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    ends_at = core.ends_at()
    other = [0] * (2 * m)
    for h in range(2 * m):
        other[h] = core.edges[h >> 1][1 - (h & 1)]
    if signed and cotree is None:
        cotree = _cotree(core, order)
    cotree = cotree or set()

    per_edge = 4 if signed else 2
    internal_left = [0] * (n + 1)
    for u, v in core.edges:
        k = min(pos[u], pos[v])
        # elements of edges whose both ends are fixed after step max(pos)
        for t in range(0, k + 1):
            internal_left[t] += per_edge
    # faces of a simple connected graph with two or more edges have length >= 3
    simple = m >= 2 and len({frozenset(e) for e in core.edges}) == m
    girth = 3 if simple else 2
    step = _step_jit if engine == "jit" else _step_py
    state = step(None, None, None, None, None, None, None, m)  # initial layer
    layers = []
    ins_prev: list[int] = []
    first_branch = True
    count = 0

    for t, w in enumerate(order):
        rots = core.rotations[w]
        if rots is None:
            rots = all_cyclic_orders(ends_at[w])
        if first_branch and len(ends_at[w]) >= 3:
            rots = _mirror_reps(rots)
            first_branch = False
        hw = ends_at[w]
        new_front = [h for h in hw if pos[other[h]] > t]   # ends at w on new frontier edges
        old_front = [h for h in hw if pos[other[h]] < t]   # ends at w on edges to fixed vertices
        lam_edges = [h >> 1 for h in new_front if (h >> 1) in cotree] if signed else []
        bits = (0, 1) if signed else (0,)

        # in-elements after this step: previous ones whose tail is not w, plus new
        ins_next = [x for x in ins_prev if core.vert_of_end(x >> 1) != w]
        ins_next += [((h ^ 1) << 1) | b for h in new_front for b in bits]
        ins_next.sort()
        new_front_edges = {h >> 1 for h in new_front}
        choices = _choices(rots, lam_edges, hw, bits, new_front_edges)
        arrivals_old = [((h ^ 1) << 1) | b for h in old_front for b in bits]
        slack = len(ins_next) + internal_left[t + 1] // girth
        left = None if budget is None else budget - count
        state, back, work = step(state, ins_prev, ins_next, choices, arrivals_old,
                                 target, slack, m, left)
        count += work
        if budget is not None and count > budget:
            raise BudgetExceeded(count)
        layers.append((back, choices) if witness else None)
        ins_prev = ins_next
        if _size(state) == 0:
            return SweepResult(None, None, count)

    best_idx, best_val = None, None
    for idx, val, neg in _finals(state):
        if need_negative and not neg:
            continue
        if target is not None and val < target:
            continue
        if best_val is None or val > best_val:
            best_idx, best_val = idx, val
    if best_idx is None:
        return SweepResult(None, None, count)
    wit = None
    if witness:
        rot = {}
        lam_all = {}
        idx = best_idx
        for t in range(len(order), 0, -1):
            back, choices = layers[t - 1]
            pidx, ci = back[idx]
            rho, lam, _, _ = choices[ci]
            rot[order[t - 1]] = rho
            lam_all.update(lam)
            idx = pidx
        wit = {"rotation": rot, "lam": lam_all}
    return SweepResult(best_val, wit, count)


def _choices(rots, lam_edges, hw, bits, new_front_edges):
    """Every (rotation, co-tree signs) option at one vertex with its local map.

    The map sends an element arriving at the vertex to the element leaving
    it, flagged True when the leaving edge is a new frontier edge.
    """
    choices = []
    for rho in rots:
        d = len(rho)
        succ = {rho[i]: rho[(i + 1) % d] for i in range(d)}
        pred = {rho[i]: rho[(i - 1) % d] for i in range(d)}
        for lam_vals in itertools.product((1, -1), repeat=len(lam_edges)):
            lam = dict(zip(lam_edges, lam_vals))
            M = {}
            for h in hw:
                src = h ^ 1
                for b in bits:
                    arr = (src << 1) | b
                    if (h >> 1) in new_front_edges:
                        alpha = b ^ (1 if lam.get(h >> 1, 1) < 0 else 0)
                    else:
                        # baked: label already is the arrival orientation
                        alpha = b
                    nh = succ[h] if alpha == 0 else pred[h]
                    if (nh >> 1) in new_front_edges:
                        lb = alpha ^ (1 if lam.get(nh >> 1, 1) < 0 else 0)
                        M[arr] = ((nh << 1) | lb, True)
                    else:
                        M[arr] = ((nh << 1) | alpha, False)
            neg = any(v < 0 for v in lam_vals)
            choices.append((rho, lam, M, neg))
    return choices


def _size(state) -> int:
    return len(state[1]) if isinstance(state, tuple) else len(state)


def _finals(state):
    if isinstance(state, tuple):
        _, vals, negs = state
        return [(i, int(vals[i]), bool(negs[i])) for i in range(len(vals))]
    return [(key, val, key[1]) for key, (val, _, _) in state.items()]


def _step_py(prev, ins_prev, ins_next, choices, arrivals_old, target, slack, m, left=None):
    """Reference layer step on Python dictionaries."""
    if prev is None:
        return {((), False): (0, None, None)}
    in_index_prev = {x: i for i, x in enumerate(ins_prev)}
    nxt: dict = {}
    work = 0
    for key, (val, _, _) in prev.items():
        outs, negflag = key
        for ci, (rho, lam, M, neg) in enumerate(choices):
            work += 1
            if left is not None and work > left:
                return nxt, {}, work
            visited = set()
            new_outs = []
            for x in ins_next:
                j = in_index_prev.get(x)
                cur = outs[j] if j is not None else x
                while cur in M:
                    visited.add(cur)
                    nel, fresh = M[cur]
                    if fresh:
                        cur = nel
                        break
                    cur = outs[in_index_prev[nel]]
                new_outs.append(cur)
            closed = 0
            for a in arrivals_old:
                if a in visited:
                    continue
                closed += 1
                cur = a
                while True:
                    visited.add(cur)
                    nel, _ = M[cur]
                    cur = outs[in_index_prev[nel]]
                    if cur == a:
                        break
            nv = val + closed
            if target is not None and nv + slack < target:
                continue
            nkey = (tuple(new_outs), negflag or neg)
            old = nxt.get(nkey)
            if old is None or nv > old[0]:
                nxt[nkey] = (nv, key, ci)
    back = {key: (pkey, ci) for key, (_, pkey, ci) in nxt.items()}
    return nxt, back, work


def _step_jit(prev, ins_prev, ins_next, choices, arrivals_old, target, slack, m, left=None):
    """Compiled layer step; states are (rows, values, negative flags) arrays."""
    import numpy as np
    from ._sweepjit import layer_step
    if prev is None:
        return (np.zeros((1, 0), dtype=np.int32), np.zeros(1, dtype=np.int32),
                np.zeros(1, dtype=np.int8))
    rows, vals, negs = prev
    L = 4 * m + 4
    in_idx = np.full(L, -1, dtype=np.int32)
    for i, x in enumerate(ins_prev):
        in_idx[x] = i
    C = len(choices)
    nxt = np.full((C, L), -1, dtype=np.int32)
    fresh = np.zeros((C, L), dtype=np.int8)
    cneg = np.zeros(C, dtype=np.int8)
    for ci, (_, _, M, neg) in enumerate(choices):
        for arr, (nel, fr) in M.items():
            nxt[ci, arr] = nel
            fresh[ci, arr] = 1 if fr else 0
        cneg[ci] = 1 if neg else 0
    out = layer_step(rows, vals, negs, in_idx, np.asarray(ins_next, dtype=np.int32), nxt, fresh,
                     cneg, np.asarray(arrivals_old, dtype=np.int32),
                     -1 if target is None else int(target), int(slack),
                     -1 if left is None else int(left))
    nrows, nvals, nnegs, bstate, bchoice, work, over = out
    back = _Back(bstate, bchoice)
    return (nrows, nvals, nnegs), back, int(work)


class _Back:
    __slots__ = ("bstate", "bchoice")

    def __init__(self, bstate, bchoice):
        self.bstate = bstate
        self.bchoice = bchoice

    def __getitem__(self, idx):
        return int(self.bstate[idx]), int(self.bchoice[idx])


def _cotree(core: Core, order: list[int]) -> set[int]:
    """Edges outside a BFS spanning tree (rooted at the first swept vertex)."""
    n = core.n
    adj = [[] for _ in range(n)]
    for e, (u, v) in enumerate(core.edges):
        adj[u].append((v, e))
        adj[v].append((u, e))
    tree = set()
    seen = {order[0]} if order else set()
    queue = list(seen)
    while queue:
        x = queue.pop(0)
        for y, e in adj[x]:
            if y not in seen:
                seen.add(y)
                tree.add(e)
                queue.append(y)
    return set(range(len(core.edges))) - tree
