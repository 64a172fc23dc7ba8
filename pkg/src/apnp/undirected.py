"""Near-quadratic undirected solver over persistent bit strings.

``B[v]`` is the set of sources that reach ``v`` so far, as a bit string of
length ``n``.  Edges are inserted by ascending weight; after inserting
``{i, j}`` both endpoints must be reached by the same sources, so the two
strings are repaired one mismatch at a time.  Each repair sets a bit that
was 0, which caps the total work at ``n**2`` repairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from apnp.dynstring import StringFamily
from apnp.graph import APNPMatrix, Graph, GraphFormatError
from apnp.ties import lift_answers, reduce_undirected


@dataclass
class UndirectedStats:
    n: int = 0
    edges: int = 0
    bit_flips: int = 0
    mismatch_searches: int = 0
    max_calls_per_search: int = 0


def solve_undirected(
    g: Graph,
    seed: int = 0,
    debug: bool = False,
    stats: Optional[UndirectedStats] = None,
    on_edge: Optional[Callable[[int, list[list[int]]], None]] = None,
) -> APNPMatrix:
    """Exact answers for an undirected graph.

    Repeated weights go through the equal-weight reduction first.
    ``on_edge(k, columns)`` receives the reach sets after the ``k``-th
    insertion, one list of bits per vertex.
    """
    if g.directed:
        raise GraphFormatError("solve_undirected needs an undirected graph")
    if g.has_ties():
        h, rmap = reduce_undirected(g)
        return lift_answers(solve_undirected(h, seed, debug, stats, on_edge), rmap)
    n = g.n
    st = stats if stats is not None else UndirectedStats()
    st.n = n
    r = APNPMatrix.empty(n)
    if n == 0:
        return r
    fam = StringFamily(seed=seed, debug=debug)
    B = [fam.from_bits([1 if s == v else 0 for s in range(n)]) for v in range(n)]
    for k, e in enumerate(sorted(g.edges, key=lambda e: e.weight)):
        i, j, w = e.src, e.dst, e.weight
        st.edges += 1
        while not fam.equal(B[i], B[j]):
            before = fam.calls.equal + fam.calls.split
            s = fam.first_mismatch(B[i], B[j])
            st.mismatch_searches += 1
            st.max_calls_per_search = max(st.max_calls_per_search, fam.calls.equal + fam.calls.split - before)
            assert s is not None
            # exactly one of the two bits is 0; only that one changes
            if fam.get(B[i], s) == 0:
                B[i] = fam.set_bit(B[i], s, 1)
            else:
                B[j] = fam.set_bit(B[j], s, 1)
            st.bit_flips += 1
            for v in (i, j):
                if not r.present[s, v] or w < r.opt[s, v]:
                    r.opt[s, v] = w
                    r.present[s, v] = True
                    r.last_edge[s, v] = e.id
        if on_edge is not None:
            on_edge(k, [fam.bits(b) for b in B])
    return r
