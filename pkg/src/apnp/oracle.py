"""Reference solvers used as ground truth.

None of these try to be fast.  ``sweep_apnp`` shares no machinery with the
directed fast solver and is the designated oracle in tests.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Optional

import numpy as np

from apnp.graph import APNPMatrix, Graph, GraphFormatError, RankedGraph

INF = np.iinfo(np.int64).max


class BucketQueue:
    """Monotone bucket queue over integer priorities ``0..size-1``.

    Items are integers ``0..n_items-1``.  ``pos[item]`` is the item's current
    bucket (``INF`` when not queued).  Priorities only ever decrease, so an
    item is appended at most once per priority value; an entry is live only
    while ``pos`` still points at its bucket.  ``pop`` therefore never hands
    out an item twice and never returns a stale entry.
    """

    def __init__(self, size: int, n_items: int) -> None:
        self.buckets: list[Optional[list[int]]] = [None] * size
        self.pos = np.full(n_items, INF, dtype=np.int64)
        self.cursor = 0

    def decrease(self, item: int, prio: int) -> bool:
        if prio >= self.pos[item]:
            return False
        if prio < self.cursor:
            raise ValueError("priority below the queue cursor")
        self.pos[item] = prio
        bucket = self.buckets[prio]
        if bucket is None:
            self.buckets[prio] = [item]
        else:
            bucket.append(item)
        return True

    def decrease_many(self, items: np.ndarray, prios: np.ndarray) -> np.ndarray:
        """Vectorised ``decrease``; returns the positions that improved.

        ``items`` may repeat only if ``prios`` is ascending (first wins).
        """
        if len(items) == 0:
            return items
        better = np.nonzero(prios < self.pos[items])[0]
        if len(better) == 0:
            return better
        its = items[better]
        if len(its) > 1:
            _, first = np.unique(its, return_index=True)
            if len(first) != len(its):
                better = better[np.sort(first)]
                its = items[better]
        ps = prios[better]
        if ps.min() < self.cursor:
            raise ValueError("priority below the queue cursor")
        self.pos[its] = ps
        buckets = self.buckets
        for it, p in zip(its.tolist(), ps.tolist()):
            bucket = buckets[p]
            if bucket is None:
                buckets[p] = [it]
            else:
                bucket.append(it)
        return better

    def pop(self, prio: int) -> list[int]:
        """Remove and return the live items of bucket ``prio``."""
        self.cursor = prio
        bucket = self.buckets[prio]
        if bucket is None:
            return []
        self.buckets[prio] = None
        pos = self.pos
        return [it for it in bucket if pos[it] == prio]


def _out_lists(rg: RankedGraph) -> list[tuple[np.ndarray, np.ndarray]]:
    """Per vertex: (codes ascending, destinations) of its out-edges."""
    order = np.lexsort((np.arange(rg.m), rg.src_of))
    src = rg.src_of[order]
    bounds = np.searchsorted(src, np.arange(rg.n + 1))
    return [
        (order[bounds[v]:bounds[v + 1]], rg.dst_of[order[bounds[v]:bounds[v + 1]]])
        for v in range(rg.n)
    ]


def matrix_from_codes(rg: RankedGraph, d: np.ndarray) -> APNPMatrix:
    """Decode a code matrix (``INF`` = absent); a code names its last edge."""
    r = APNPMatrix.empty(rg.n)
    present = d != INF
    r.present[:] = present
    if rg.m:
        codes = np.where(present, d, 0)
        r.opt[:] = np.where(present, rg.weight_of[codes], 0)
        r.last_edge[:] = np.where(present, rg.edge_of[codes], -1)
    return r


def naive_apnp(
    rg: RankedGraph,
    trace: Optional[Callable[[int, int, int], None]] = None,
) -> APNPMatrix:
    """Dijkstra-type search relaxing every out-edge of each visited pair.

    ``trace(i, j, code)`` is called on every visit, in visiting order.
    """
    n, m = rg.n, rg.m
    q = BucketQueue(max(m, 1), n * n)
    items = rg.src_of * n + rg.dst_of
    for c in range(m):
        q.decrease(int(items[c]), c)
    outs = _out_lists(rg)
    for x in range(m):
        for item in q.pop(x):
            i, j = divmod(item, n)
            if trace is not None:
                trace(i, j, x)
            codes, dsts = outs[j]
            start = int(np.searchsorted(codes, x, side="right"))
            if start == len(codes):
                continue
            q.decrease_many(i * n + dsts[start:], codes[start:])
    return matrix_from_codes(rg, q.pos.reshape(n, n))


def sweep_apnp(rg: RankedGraph) -> APNPMatrix:
    """Insert edges in ascending order and extend every source reaching the tail.

    With distinct codes a non-decreasing walk is strictly increasing, so the
    first time ``s`` reaches ``v`` fixes ``OPT(s, v)``.  Column ``v`` of the
    reach relation is an integer bitset over sources.
    """
    n = rg.n
    reach = [0] * n
    rows: list[int] = []
    cols: list[int] = []
    vals: list[int] = []
    for c, (u, v) in enumerate(zip(rg.src_of.tolist(), rg.dst_of.tolist())):
        new = (reach[u] | (1 << u)) & ~reach[v]
        if not new:
            continue
        reach[v] |= new
        while new:
            low = new & -new
            rows.append(low.bit_length() - 1)
            cols.append(v)
            vals.append(c)
            new ^= low
    d = np.full((n, n), INF, dtype=np.int64)
    d[rows, cols] = vals
    return matrix_from_codes(rg, d)


def undirected_basic(
    g: Graph,
    on_edge: Optional[Callable[[int, np.ndarray], None]] = None,
) -> APNPMatrix:
    """Cubic undirected algorithm: ascending insertion with a reachability matrix.

    ``A[s, v]`` means ``s`` reaches ``v`` using inserted edges (the empty
    walk counts, so ``A`` starts as the identity).  The diagonal answer is the
    lightest edge touching the vertex: walking that edge out and back is the
    cheapest closed non-decreasing walk.  ``on_edge(k, A)`` sees ``A`` after
    the ``k``-th insertion.
    """
    if g.directed:
        raise GraphFormatError("undirected_basic needs an undirected graph")
    if g.has_ties():
        raise GraphFormatError("undirected_basic needs distinct weights")
    n = g.n
    A = np.eye(n, dtype=bool)
    r = APNPMatrix.empty(n)
    for k, e in enumerate(sorted(g.edges, key=lambda e: e.weight)):
        i, j, w = e.src, e.dst, e.weight
        col_i, col_j = A[:, i].copy(), A[:, j].copy()
        to_j = col_i & ~col_j
        to_i = col_j & ~col_i
        A[to_j, j] = True
        A[to_i, i] = True
        for s_mask, v in ((to_j, j), (to_i, i)):
            r.opt[s_mask, v] = w
            r.present[s_mask, v] = True
            r.last_edge[s_mask, v] = e.id
        for v in (i, j):
            if not r.present[v, v]:
                r.opt[v, v] = w
                r.present[v, v] = True
                r.last_edge[v, v] = e.id
        if on_edge is not None:
            on_edge(k, A)
    return r


def brute_force_apnp(g: Graph) -> APNPMatrix:
    """Exhaustive search over (vertex, last edge) states with ``<=`` semantics.

    Works on any graph: ties, multi-edges, directed or undirected.  An
    undirected edge may be traversed either way, including straight back.
    """
    n = g.n
    arcs: list[tuple[int, int, int, int]] = []  # (tail, head, weight, edge id)
    for e in g.edges:
        arcs.append((e.src, e.dst, e.weight, e.id))
        if not g.directed:
            arcs.append((e.dst, e.src, e.weight, e.id))
    out: list[list[int]] = [[] for _ in range(n)]
    for a, (t, _, _, _) in enumerate(arcs):
        out[t].append(a)
    best: dict[tuple[int, int], tuple[int, int]] = {}
    for s in range(n):
        seen = [False] * len(arcs)
        frontier = deque(out[s])
        for a in out[s]:
            seen[a] = True
        while frontier:
            a = frontier.popleft()
            _, h, w, eid = arcs[a]
            cur = best.get((s, h))
            if cur is None or w < cur[0]:
                best[(s, h)] = (w, eid)
            for b in out[h]:
                if not seen[b] and arcs[b][2] >= w:
                    seen[b] = True
                    frontier.append(b)
    r = APNPMatrix.empty(n)
    for (s, h), (w, eid) in best.items():
        r.opt[s, h] = w
        r.present[s, h] = True
        r.last_edge[s, h] = eid
    return r
