"""Equal-weight reduction.

A graph with repeated weights (or parallel edges) is rewritten into one with
pairwise distinct weights.  Inside each weight class the edges are replaced
by a small gadget routed through one *assembly* vertex per component, so
that every equal-weight run of the original maps to a strictly increasing
run in the rewritten graph.  Answers on the rewritten graph lift back by
relabeling weights.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import groupby
from typing import Callable

import numpy as np

from apnp.graph import APNPMatrix, Edge, Graph, GraphFormatError


@dataclass
class ClassInfo:
    weight: int
    offset: int
    # (assembly, members) per component or strongly connected component
    components: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)


@dataclass
class ReductionMap:
    directed: bool
    new_to_old_weight: dict[int, int]
    classes: list[ClassInfo]
    # (weight, vertex) -> smallest original edge id of that weight into the vertex
    representative: dict[tuple[int, int], int]
    # closed equal-weight walks at an assembly vertex that the gadget cannot express
    diagonal: list[tuple[int, int, int]]  # (vertex, weight, edge id)


def has_ties(g: Graph) -> bool:
    return g.has_ties()


def _classes(g: Graph) -> list[tuple[int, list[Edge]]]:
    ordered = sorted(g.edges, key=lambda e: (e.weight, e.id))
    return [(w, list(group)) for w, group in groupby(ordered, key=lambda e: e.weight)]


def _representatives(g: Graph) -> dict[tuple[int, int], int]:
    rep: dict[tuple[int, int], int] = {}
    for e in g.edges:
        ends = (e.dst,) if g.directed else (e.src, e.dst)
        for v in ends:
            rep.setdefault((e.weight, v), e.id)
    return rep


def tarjan_scc(vertices: list[int], adj: dict[int, list[int]]) -> tuple[dict[int, int], int]:
    """Iterative Tarjan.  Returns ``comp[v]`` and the component count.

    Components are numbered in reverse topological order of the condensation
    (sinks first), as Tarjan emits them.
    """
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    comp: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in vertices:
        if root in index:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, pos = work[-1]
            nbrs = adj.get(v, [])
            if pos < len(nbrs):
                work[-1] = (v, pos + 1)
                u = nbrs[pos]
                if u not in index:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on_stack.add(u)
                    work.append((u, 0))
                elif u in on_stack:
                    low[v] = min(low[v], index[u])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                while True:
                    u = stack.pop()
                    on_stack.discard(u)
                    comp[u] = ncomp
                    if u == v:
                        break
                ncomp += 1
    return comp, ncomp


def reduce_directed(g: Graph) -> tuple[Graph, ReductionMap]:
    if not g.directed:
        raise GraphFormatError("reduce_directed needs a directed graph")
    triples: list[tuple[int, int, int]] = []
    new_to_old: dict[int, int] = {}
    classes: list[ClassInfo] = []
    diagonal: list[tuple[int, int, int]] = []
    offset = 0
    for w, edges in _classes(g):
        info = ClassInfo(w, offset)
        adj: dict[int, list[int]] = defaultdict(list)
        for e in edges:
            adj[e.src].append(e.dst)
        verts = sorted({v for e in edges for v in (e.src, e.dst)})
        comp, ncomp = tarjan_scc(verts, adj)
        members: dict[int, list[int]] = defaultdict(list)
        for v in verts:  # ascending, so members[c][0] is the assembly
            members[comp[v]].append(v)
        assembly = {c: vs[0] for c, vs in members.items()}
        emitted: list[tuple[int, int]] = []
        big = sorted((vs[0], c) for c, vs in members.items() if len(vs) > 1)
        for a, c in big:
            emitted += [(v, a) for v in members[c][1:]]
        # Tarjan numbers sinks first, so descending component id is topological
        dag = [e for e in edges if comp[e.src] != comp[e.dst]]
        dag.sort(key=lambda e: (-comp[e.src], e.id))
        emitted += [(assembly[comp[e.src]], assembly[comp[e.dst]]) for e in dag]
        for a, c in big:
            emitted += [(a, v) for v in members[c][1:]]
            closing = min(e.id for e in edges if e.dst == a and comp[e.src] == c)
            diagonal.append((a, w, closing))
        info.components = sorted((vs[0], tuple(vs)) for vs in members.values())
        base = 2 * offset
        for k, (u, v) in enumerate(emitted):
            triples.append((u, v, base + k))
            new_to_old[base + k] = w
        classes.append(info)
        offset += len(edges)
    h = Graph._unchecked(g.n, True, triples, True)
    return h, ReductionMap(True, new_to_old, classes, _representatives(g), diagonal)


def reduce_undirected(g: Graph) -> tuple[Graph, ReductionMap]:
    if g.directed:
        raise GraphFormatError("reduce_undirected needs an undirected graph")
    triples: list[tuple[int, int, int]] = []
    new_to_old: dict[int, int] = {}
    classes: list[ClassInfo] = []
    offset = 0
    for w, edges in _classes(g):
        info = ClassInfo(w, offset)
        parent: dict[int, int] = {}

        def find(v: int) -> int:
            while parent.setdefault(v, v) != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in edges:
            ra, rb = find(e.src), find(e.dst)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, list[int]] = defaultdict(list)
        for v in sorted(parent):
            groups[find(v)].append(v)
        emitted: list[tuple[int, int]] = []
        for root in sorted(groups):
            vs = groups[root]
            v1 = vs[0]
            emitted += [(v1, v) for v in vs[1:]]
            emitted += [(v, v1) for v in reversed(vs[1:])]
            info.components.append((v1, tuple(vs)))
        for k, (u, v) in enumerate(emitted):
            triples.append((u, v, 2 * offset + k))
            new_to_old[2 * offset + k] = w
        classes.append(info)
        offset += len(edges)
    h = Graph._unchecked(g.n, False, triples, True)
    return h, ReductionMap(False, new_to_old, classes, _representatives(g), [])


def reduce_graph(g: Graph) -> tuple[Graph, ReductionMap]:
    return reduce_directed(g) if g.directed else reduce_undirected(g)


def lift_answers(h_result: APNPMatrix, rmap: ReductionMap) -> APNPMatrix:
    """Relabel synthetic weights back to original ones.

    ``last_edge`` entries become original edges of the same weight into the
    same vertex.  Such an edge is a valid final edge but the lifted matrix
    does not support path reconstruction.
    """
    n = h_result.n
    out = APNPMatrix.empty(n)
    rows, cols = np.nonzero(h_result.present)
    if len(rows):
        to_old, rep = rmap.new_to_old_weight, rmap.representative
        try:
            olds = [to_old[w] for w in h_result.opt[rows, cols].tolist()]
        except KeyError as exc:
            raise KeyError(f"synthetic weight {exc.args[0]} not in reduction map") from None
        out.opt[rows, cols] = olds
        out.present[rows, cols] = True
        out.last_edge[rows, cols] = [rep[(w, k)] for w, k in zip(olds, cols.tolist())]
    for a, w, eid in rmap.diagonal:
        if not out.present[a, a] or w < out.opt[a, a]:
            out.opt[a, a] = w
            out.present[a, a] = True
            out.last_edge[a, a] = eid
    return out


def solve_with_reduction(g: Graph, solve: Callable[[Graph], APNPMatrix]) -> APNPMatrix:
    """Run ``solve`` directly, or on the reduced graph when weights repeat."""
    if not g.has_ties():
        return solve(g)
    h, rmap = reduce_graph(g)
    return lift_answers(solve(h), rmap)


def dedupe_multi_high_high(src: np.ndarray, dst: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """Keep the smallest code among parallel edges; returns kept codes ascending."""
    if len(codes) == 0:
        return codes
    order = np.lexsort((codes, dst, src))
    s, d = src[order], dst[order]
    first = np.ones(len(order), dtype=bool)
    first[1:] = (s[1:] != s[:-1]) | (d[1:] != d[:-1])
    return np.sort(codes[order][first])
