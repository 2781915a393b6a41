"""Compiled inner step of the frontier sweep.

One call advances every state of a layer through every local choice at
the next vertex and merges the results in an open-addressing table keyed by
the full frontier row (plus the negative-edge flag), so merging is exact.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _hash_row(row, neg):
    h = np.uint64(1469598103934665603) ^ np.uint64(neg + 7)
    for x in row:
        h ^= np.uint64(x + 1)
        h *= np.uint64(1099511628211)
        h ^= h >> np.uint64(29)
    return h


@njit(cache=True)
def _rebuild(table, rows, negs, count):
    mask = table.shape[0] - 1
    table[:] = -1
    for r in range(count):
        h = _hash_row(rows[r], negs[r]) & np.uint64(mask)
        i = np.int64(h)
        while table[i] >= 0:
            i = (i + 1) & mask
        table[i] = r


@njit(cache=True)
def layer_step(prev_rows, prev_val, prev_neg, in_idx, ins_next, nxt, fresh, cneg,
               arrivals_old, target, slack, budget_left):
    S = prev_rows.shape[0]
    C = nxt.shape[0]
    N = ins_next.shape[0]
    L = nxt.shape[1]
    cap = 1024
    rows = np.empty((cap, N), dtype=np.int32)
    vals = np.empty(cap, dtype=np.int32)
    negs = np.empty(cap, dtype=np.int8)
    bstate = np.empty(cap, dtype=np.int32)
    bchoice = np.empty(cap, dtype=np.int32)
    table = -np.ones(2 * cap, dtype=np.int64)
    count = 0
    mark = np.zeros(L, dtype=np.int64)
    stamp = 0
    work = np.int64(0)
    row = np.empty(N, dtype=np.int32)
    for s in range(S):
        for c in range(C):
            work += 1
            if budget_left >= 0 and work > budget_left:
                return rows[:count], vals[:count], negs[:count], bstate[:count], bchoice[:count], work, True
            stamp += 1
            for i in range(N):
                x = ins_next[i]
                j = in_idx[x]
                cur = prev_rows[s, j] if j >= 0 else x
                while nxt[c, cur] >= 0:
                    mark[cur] = stamp
                    nel = nxt[c, cur]
                    if fresh[c, cur]:
                        cur = nel
                        break
                    cur = prev_rows[s, in_idx[nel]]
                row[i] = cur
            closed = 0
            for a in arrivals_old:
                if mark[a] == stamp:
                    continue
                closed += 1
                cur = a
                while True:
                    mark[cur] = stamp
                    nel = nxt[c, cur]
                    cur = prev_rows[s, in_idx[nel]]
                    if cur == a:
                        break
            nv = prev_val[s] + closed
            if target >= 0 and nv + slack < target:
                continue
            ng = np.int8(1) if (prev_neg[s] != 0 or cneg[c] != 0) else np.int8(0)
            mask = table.shape[0] - 1
            h = _hash_row(row, ng) & np.uint64(mask)
            k = np.int64(h)
            found = -1
            while table[k] >= 0:
                r = table[k]
                if negs[r] == ng:
                    same = True
                    for i in range(N):
                        if rows[r, i] != row[i]:
                            same = False
                            break
                    if same:
                        found = r
                        break
                k = (k + 1) & mask
            if found >= 0:
                if nv > vals[found]:
                    vals[found] = nv
                    bstate[found] = s
                    bchoice[found] = c
                continue
            if count == cap:
                cap *= 2
                rows2 = np.empty((cap, N), dtype=np.int32)
                rows2[:count] = rows[:count]
                rows = rows2
                vals2 = np.empty(cap, dtype=np.int32)
                vals2[:count] = vals[:count]
                vals = vals2
                negs2 = np.empty(cap, dtype=np.int8)
                negs2[:count] = negs[:count]
                negs = negs2
                b1 = np.empty(cap, dtype=np.int32)
                b1[:count] = bstate[:count]
                bstate = b1
                b2 = np.empty(cap, dtype=np.int32)
                b2[:count] = bchoice[:count]
                bchoice = b2
                table = -np.ones(2 * cap, dtype=np.int64)
                _rebuild(table, rows, negs, count)
                mask = table.shape[0] - 1
                k = np.int64(_hash_row(row, ng) & np.uint64(mask))
                while table[k] >= 0:
                    k = (k + 1) & mask
            rows[count] = row
            vals[count] = nv
            negs[count] = ng
            bstate[count] = s
            bchoice[count] = c
            table[k] = count
            count += 1
    return rows[:count], vals[:count], negs[:count], bstate[:count], bchoice[:count], work, False
