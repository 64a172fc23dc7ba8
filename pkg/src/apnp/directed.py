"""Fast directed solver.

A bucket-queue search over weight codes.  Out-edges of a visited pair are
relaxed in three ways depending on where the partition put them:

* low edges (small out-degree source) directly,
* high-low edges through a per-prefix structure that keeps a counting
  product ``C = A B`` current under single-entry updates of ``A``,
* high-high edges in one batch per prefix, by a product of the optimal
  paths with prefix ``[y][0]`` against the edges with prefix ``[y][1]``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from apnp.boolmat import KERNEL_OMEGA, MulStats, default_t, mul_count
from apnp.graph import APNPMatrix, BitString, Graph, RankedGraph, lcp, rank_weights
from apnp.oracle import BucketQueue, matrix_from_codes
from apnp.partition import BalancedSide, PartitionTree, PrefixNode, balance, divide_edges
from apnp.ties import dedupe_multi_high_high

SITE_INIT, SITE_LOW, SITE_HIGHHIGH, SITE_HIGHLOW = 0, 1, 2, 3


@dataclass(frozen=True)
class SolverConfig:
    t: Optional[float] = None
    omega_eff: Optional[float] = None
    kernel: str = "packed"
    debug: bool = False
    block: Optional[int] = None

    def resolved_t(self) -> float:
        if self.t is not None:
            return self.t
        omega = self.omega_eff if self.omega_eff is not None else KERNEL_OMEGA[self.kernel]
        return default_t(omega)


@dataclass
class PrefixCounters:
    prefix: str
    highhigh_relax: int = 0
    highlow_relax: int = 0
    q_additions: int = 0
    visits: int = 0
    n_prefix: int = 0
    n_child1: int = 0


@dataclass
class Stats:
    n: int = 0
    m: int = 0
    b: int = 0
    t: float = 0.0
    threshold: int = 0
    visits: int = 0
    low_relax_total: int = 0
    low_relax_max: int = 0
    highhigh_batches: int = 0
    highhigh_relax_total: int = 0
    highlow_structs: int = 0
    highlow_relax_total: int = 0
    q_additions: int = 0
    q_below_lo: int = 0
    waiting_insertions: int = 0
    waiting_max_per_q: int = 0
    monotone_violations: int = 0
    c_checks: int = 0
    c_mismatches: int = 0
    matmul: MulStats = field(default_factory=MulStats)
    prefixes: dict[str, PrefixCounters] = field(default_factory=dict)

    def prefix(self, node: PrefixNode) -> PrefixCounters:
        key = str(node.prefix)
        if key not in self.prefixes:
            self.prefixes[key] = PrefixCounters(key)
        return self.prefixes[key]

    def lines(self) -> list[tuple[str, int | float]]:
        """Counters as ``(name, value)`` pairs in a fixed order."""
        return [
            ("n", self.n),
            ("m", self.m),
            ("b", self.b),
            ("t", self.t),
            ("threshold", self.threshold),
            ("visits", self.visits),
            ("low_relax_total", self.low_relax_total),
            ("low_relax_max_per_visit", self.low_relax_max),
            ("highhigh_batches", self.highhigh_batches),
            ("highhigh_relax_total", self.highhigh_relax_total),
            ("highlow_structs", self.highlow_structs),
            ("highlow_relax_total", self.highlow_relax_total),
            ("q_additions", self.q_additions),
            ("q_below_lo", self.q_below_lo),
            ("waiting_insertions", self.waiting_insertions),
            ("waiting_max_per_q", self.waiting_max_per_q),
            ("monotone_violations", self.monotone_violations),
            ("c_checks", self.c_checks),
            ("c_mismatches", self.c_mismatches),
            ("matmul_calls", self.matmul.calls),
            ("matmul_cell_ops", self.matmul.cell_ops),
        ]

    def format(self) -> str:
        return "".join(f"{name} {value}\n" for name, value in self.lines())

    def bound_violations(self) -> list[str]:
        """Every work bound that the counters break, as readable messages."""
        cap, b = self.threshold, self.b
        bad = []
        if self.low_relax_max > (b + 1) * cap:
            bad.append(f"low relaxations per visit {self.low_relax_max} > {(b + 1) * cap}")
        if self.waiting_max_per_q > cap:
            bad.append(f"waiting-list insertions per Q addition {self.waiting_max_per_q} > {cap}")
        if self.q_below_lo:
            bad.append(f"{self.q_below_lo} Q entries below their interval")
        if self.monotone_violations:
            bad.append(f"{self.monotone_violations} relaxations at or below the loop value")
        for pc in self.prefixes.values():
            if pc.highhigh_relax > pc.n_child1 * cap:
                bad.append(f"{pc.prefix}: high-high relaxations {pc.highhigh_relax} > {pc.n_child1 * cap}")
            limit = 2 * pc.n_prefix * cap + pc.visits * cap
            if pc.highlow_relax + pc.q_additions > limit:
                bad.append(f"{pc.prefix}: high-low work {pc.highlow_relax + pc.q_additions} > {limit}")
        return bad


class _HighLow:
    """Dynamic product structure for the high-low edges of one prefix."""

    def __init__(self, solver: _Solver, node: PrefixNode) -> None:
        self.solver = solver
        self.node = node
        self.counters = solver.stats.prefix(node)
        rg, n = solver.rg, solver.n
        codes = node.gamma
        src, dst = rg.src_of[codes], rg.dst_of[codes]
        self.side: BalancedSide = balance(src, dst, codes, "out", solver.cap)
        self.ks = np.unique(dst)
        self.kcol = np.full(n, -1, dtype=np.int64)
        self.kcol[self.ks] = np.arange(len(self.ks))
        K, S = len(self.ks), self.side.count
        self.B = np.zeros((K, S), dtype=bool)
        self.B[self.kcol[self.side.other], self.side.segment_of_edge()] = True
        self.segs_of_k = [np.nonzero(self.B[c])[0] for c in range(K)]
        # in-edges of each k inside this set: (source, code)
        by_k: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for c, u, v in zip(codes.tolist(), src.tolist(), dst.tolist()):
            by_k[v].append((u, c))
        self.in_edges = {k: (np.array([u for u, _ in lst], dtype=np.int64), [c for _, c in lst])
                         for k, lst in by_k.items()}
        self.A = ~solver.visited2[:, self.ks]
        self.C = mul_count(self.A, self.B, solver.cfg.kernel, solver.cfg.block, solver.stats.matmul)
        self.W: dict[tuple[int, int], list[int]] = {}
        solver.stats.highlow_structs += 1
        if solver.cfg.debug:
            self.check()

    def check(self) -> None:
        fresh = mul_count(self.A, self.B, self.solver.cfg.kernel, self.solver.cfg.block)
        self.solver.stats.c_checks += 1
        if not np.array_equal(fresh, self.C):
            self.solver.stats.c_mismatches += 1

    def _drop_row_entry(self, i: int, kc: int) -> None:
        self.A[i, kc] = False
        self.C[i, self.segs_of_k[kc]] -= 1

    def visit(self, I: np.ndarray, j: int, x: int) -> None:
        s = self.solver
        n = s.n
        cnt = self.counters
        cnt.visits += len(I)
        # the visited pairs join P
        kc = int(self.kcol[j])
        if kc >= 0:
            rows = I[self.A[I, kc]]
            if len(rows):
                self.A[rows, kc] = False
                self.C[np.ix_(rows, self.segs_of_k[kc])] -= 1
        # drain waiting lists
        if self.W:
            dst_of = s.rg.dst_of
            for i in I.tolist():
                pending = self.W.pop((i, j), None)
                if pending is None:
                    continue
                cnt.highlow_relax += len(pending)
                for c in pending:
                    if c > x:
                        s.relax_one(i, int(dst_of[c]), c, SITE_HIGHLOW, x)
        side = self.side
        for seg in side.segments(j):
            L, R = int(side.L[seg]), int(side.R[seg])
            if x > R:
                continue
            codes, ks = side.edges(seg)
            if x >= L:
                keep = codes > x
                codes, ks = codes[keep], ks[keep]
                rows = I
            else:
                rows = I[self.C[I, seg] > 0]
            if len(rows) == 0 or len(codes) == 0:
                continue
            cnt.highlow_relax += len(rows) * len(codes)
            cols = self.kcol[ks]
            hits = np.nonzero(self.A[np.ix_(rows, cols)])
            for r, e in zip(hits[0].tolist(), hits[1].tolist()):
                i, c, col = int(rows[r]), int(codes[e]), int(cols[e])
                if not self.A[i, col]:
                    continue  # a parallel edge already claimed (i, k)
                k = int(ks[e])
                s.relax_one(i, k, c, SITE_HIGHLOW, x)
                cnt.q_additions += 1
                s.stats.q_additions += 1
                if s.queue.pos[i * n + k] < self.node.lo:
                    s.stats.q_below_lo += 1
                self._drop_row_entry(i, col)
                srcs, in_codes = self.in_edges[k]
                open_ = ~s.visited[i * n + srcs]
                inserted = int(open_.sum())
                for jj, cc in zip(srcs[open_].tolist(), np.asarray(in_codes)[open_].tolist()):
                    self.W.setdefault((i, jj), []).append(cc)
                s.stats.waiting_insertions += inserted
                if inserted > s.stats.waiting_max_per_q:
                    s.stats.waiting_max_per_q = inserted


class _Solver:
    def __init__(self, rg: RankedGraph, cfg: SolverConfig, trace: Optional[Callable[[int, int, int], None]]) -> None:
        self.rg = rg
        self.cfg = cfg
        self.trace = trace
        self.n = n = rg.n
        self.m = rg.m
        self.b = rg.b
        t = cfg.resolved_t()
        self.tree: PartitionTree = divide_edges(rg, t)
        self.cap = self.tree.threshold
        self.stats = Stats(n=n, m=rg.m, b=rg.b, t=t, threshold=self.cap)
        self.queue = BucketQueue(max(rg.m, 1), n * n)
        self.visited = np.zeros(n * n, dtype=bool)
        self.visited2 = self.visited.reshape(n, n)
        self.site = np.full(n * n, -1, dtype=np.int8)
        self._index_low_edges()
        self._schedule()

    def _index_low_edges(self) -> None:
        rg = self.rg
        self.low: list[dict[tuple[int, int], tuple[np.ndarray, np.ndarray]]] = [{} for _ in range(self.n)]
        self.low_depths: list[list[int]] = [[] for _ in range(self.n)]
        for node in self.tree:
            if len(node.low) == 0:
                continue
            srcs = rg.src_of[node.low]
            order = np.argsort(srcs, kind="stable")
            codes, srcs = node.low[order], srcs[order]
            cuts = np.nonzero(np.diff(srcs))[0] + 1
            for part in np.split(np.arange(len(codes)), cuts):
                j = int(srcs[part[0]])
                self.low[j][(node.depth, node.prefix.value)] = (codes[part], rg.dst_of[codes[part]])
                if not self.low_depths[j] or self.low_depths[j][-1] != node.depth:
                    self.low_depths[j].append(node.depth)
        for depths in self.low_depths:
            depths.sort()

    def _schedule(self) -> None:
        """Events per code, ordered by prefix length as they fire."""
        self.events: dict[int, list[tuple[str, PrefixNode]]] = defaultdict(list)
        self.expiry: dict[int, list[PrefixNode]] = defaultdict(list)
        for node in self.tree:
            if len(node.gamma):
                self.events[node.lo].append(("init", node))
                self.expiry[min(node.hi, self.m - 1)].append(node)
            if len(node.high1):
                half = 1 << (self.b - node.depth - 1)
                self.events[node.lo + half].append(("highhigh", node))

    # -- relaxation -----------------------------------------------------------

    def relax_one(self, i: int, k: int, c: int, site: int, x: int) -> None:
        if c <= x:
            self.stats.monotone_violations += 1
        item = i * self.n + k
        if self.queue.decrease(item, c):
            self.site[item] = site

    def relax_block(self, items: np.ndarray, prios: np.ndarray, site: int, x: int) -> None:
        if len(items) == 0:
            return
        if prios.min() <= x:
            self.stats.monotone_violations += int((prios <= x).sum())
        hit = self.queue.decrease_many(items, prios)
        if len(hit):
            self.site[items[hit]] = site

    # -- phases ----------------------------------------------------------------

    def highhigh(self, node: PrefixNode, x: int) -> None:
        rg, n, cap = self.rg, self.n, self.cap
        st = self.stats
        st.highhigh_batches += 1
        counters = st.prefix(node)
        codes = node.high1
        codes = dedupe_multi_high_high(rg.src_of[codes], rg.dst_of[codes], codes)
        src, dst = rg.src_of[codes], rg.dst_of[codes]
        side = balance(src, dst, codes, "in", cap)
        js = np.unique(src)
        jcol = np.full(n, -1, dtype=np.int64)
        jcol[js] = np.arange(len(js))
        lo0, hi0 = node.lo, node.lo + (1 << (self.b - node.depth - 1)) - 1
        dj = self.queue.pos.reshape(n, n)[:, js]
        A = self.visited2[:, js] & (dj >= lo0) & (dj <= hi0)
        if not A.any():
            return
        B = np.zeros((len(js), side.count), dtype=bool)
        B[jcol[side.other], side.segment_of_edge()] = True
        C = mul_count(A, B, self.cfg.kernel, self.cfg.block, st.matmul)
        positive = C > 0
        for k, segs in ((int(v), side.segments(int(v))) for v in np.unique(dst)):
            first, end = segs.start, segs.stop
            block = positive[:, first:end]
            rows = np.nonzero(block.any(axis=1) & ~self.visited2[:, k])[0]
            if len(rows) == 0:
                continue
            r_of_row = first + block[rows].argmax(axis=1)
            for seg in np.unique(r_of_row).tolist():
                rr = rows[r_of_row == seg]
                seg_codes, seg_srcs = side.edges(seg)
                witness = A[np.ix_(rr, jcol[seg_srcs])]
                counters.highhigh_relax += len(rr) * len(seg_codes)
                chosen = seg_codes[witness.argmax(axis=1)]
                # runs before bucket x is visited, so x itself is still open
                self.relax_block(rr * n + k, chosen, SITE_HIGHHIGH, x - 1)
        st.highhigh_relax_total = sum(p.highhigh_relax for p in st.prefixes.values())

    def visit_bucket(self, x: int, items: list[int], live: list[_HighLow]) -> None:
        n, b = self.n, self.b
        st = self.stats
        arr = np.array(items, dtype=np.int64)
        I = arr // n
        j = int(self.rg.dst_of[x])
        self.visited[arr] = True
        st.visits += len(items)
        if self.trace is not None:
            for i in I.tolist():
                self.trace(i, j, x)
        per_visit = 0
        table = self.low[j]
        for depth in self.low_depths[j]:
            hit = table.get((depth, x >> (b - depth)))
            if hit is None:
                continue
            codes, dsts = hit
            per_visit += len(codes)
            keep = codes > x
            if not keep.any():
                continue
            codes, dsts = codes[keep], dsts[keep]
            items2 = (I[:, None] * n + dsts[None, :]).ravel()
            prios = np.broadcast_to(codes, (len(I), len(codes))).ravel()
            self.relax_block(items2, prios, SITE_LOW, x)
        st.low_relax_total += per_visit * len(items)
        if per_visit > st.low_relax_max:
            st.low_relax_max = per_visit
        for hl in live:
            hl.visit(I, j, x)

    def run(self) -> APNPMatrix:
        rg, n = self.rg, self.n
        items = rg.src_of * n + rg.dst_of
        for c in range(self.m):
            if self.queue.decrease(int(items[c]), c):
                self.site[items[c]] = SITE_INIT
        live: dict[tuple[int, int], _HighLow] = {}
        for x in range(self.m):
            for kind, node in self.events.get(x, ()):
                if kind == "init":
                    live[node.key] = _HighLow(self, node)
                else:
                    self.highhigh(node, x)
            bucket = self.queue.pop(x)
            if bucket:
                # the structures alive now are exactly those on prefixes of x
                self.visit_bucket(x, bucket, sorted(live.values(), key=lambda h: h.node.depth))
            for node in self.expiry.get(x, ()):
                hl = live.pop(node.key)
                if self.cfg.debug:
                    hl.check()
        self.stats.highlow_relax_total = sum(p.highlow_relax for p in self.stats.prefixes.values())
        self._count_optimal()
        d = self.queue.pos.reshape(n, n)
        return matrix_from_codes(rg, d)

    def _count_optimal(self) -> None:
        final = np.sort(self.queue.pos[self.visited])
        for node in self.tree:
            pc = self.stats.prefixes.get(str(node.prefix))
            if pc is None:
                continue
            pc.n_prefix = int(np.searchsorted(final, node.hi, "right") - np.searchsorted(final, node.lo, "left"))
            lo1 = node.lo + (1 << (self.b - node.depth - 1)) if node.depth < self.b else node.hi + 1
            pc.n_child1 = int(np.searchsorted(final, node.hi, "right") - np.searchsorted(final, lo1, "left"))


@dataclass
class DirectedRun:
    result: APNPMatrix
    stats: Stats
    tree: PartitionTree
    codes: np.ndarray  # final code per pair, INF where absent
    site: np.ndarray  # relaxation site of the final value


def run_directed(
    rg: RankedGraph,
    cfg: SolverConfig = SolverConfig(),
    trace: Optional[Callable[[int, int, int], None]] = None,
) -> DirectedRun:
    """Solve and keep the solver's internals for inspection."""
    if not rg.base.directed:
        raise ValueError("run_directed needs a directed graph")
    solver = _Solver(rg, cfg, trace)
    result = solver.run()
    n = rg.n
    return DirectedRun(result, solver.stats, solver.tree,
                       solver.queue.pos.reshape(n, n).copy(), solver.site.reshape(n, n).copy())


def solve_directed(rg: RankedGraph, cfg: SolverConfig = SolverConfig()) -> APNPMatrix:
    return run_directed(rg, cfg).result


def solve_directed_graph(g: Graph, cfg: SolverConfig = SolverConfig()) -> APNPMatrix:
    return solve_directed(rank_weights(g), cfg)


def coverage_errors(rg: RankedGraph, run: DirectedRun) -> list[tuple[int, int]]:
    """Pairs whose final relaxation site disagrees with the edge's partition role.

    For a final value set through edge ``(j, k)`` after visiting ``(i, j)``
    with code ``y = lcp(d(i, j), code)``: if the edge is stored as low or
    high-low at depth ``<= |y|`` the site must be that kind, otherwise the
    edge sits in the high-high set of ``[y][1]`` and the site must be the
    batch.  Direct edges must come from initialisation.
    """
    depth, kind = run.tree.home(rg.m)
    b, n = rg.b, rg.n
    bad = []
    rows, cols = np.nonzero(run.result.present)
    for i, k in zip(rows.tolist(), cols.tolist()):
        c = int(run.codes[i, k])
        site = int(run.site[i, k])
        j = int(rg.src_of[c])
        if site == SITE_INIT:
            if j != i:
                bad.append((i, k))
            continue
        y = lcp(BitString(int(run.codes[i, j]), b), BitString(c, b)).length
        if depth[c] <= y:
            expected = SITE_LOW if kind[c] == 0 else SITE_HIGHLOW
        else:
            expected = SITE_HIGHHIGH
        if site != expected:
            bad.append((i, k))
    return bad


def reconstruct_path(result: APNPMatrix, g: Graph, i: int, k: int) -> list[int]:
    """Edge ids of a non-decreasing path from ``i`` to ``k`` ending in ``last_edge``."""
    if not result.present[i, k]:
        raise KeyError(f"no non-decreasing path from {i} to {k}")
    path: list[int] = []
    cur = k
    for _ in range(g.m + 1):
        e = g.edges[int(result.last_edge[i, cur])]
        path.append(e.id)
        prev = e.src if (g.directed or e.dst == cur) else e.dst
        if prev == i:
            return path[::-1]
        if not result.present[i, prev]:
            raise ValueError(f"broken predecessor chain at ({i}, {prev})")
        cur = prev
    raise ValueError("predecessor chain does not terminate")


def is_valid_path(g: Graph, path: list[int], i: int, k: int, weight: int) -> bool:
    """True if ``path`` walks from ``i`` to ``k`` with non-decreasing weights ending at ``weight``."""
    if not path:
        return False
    cur, last = i, None
    for eid in path:
        e = g.edges[eid]
        if e.src == cur:
            nxt = e.dst
        elif not g.directed and e.dst == cur:
            nxt = e.src
        else:
            return False
        if last is not None and e.weight < last:
            return False
        cur, last = nxt, e.weight
    return cur == k and last == weight
