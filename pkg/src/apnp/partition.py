"""Recursive prefix partition of the edge set and vertex-splitting balance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from apnp.graph import BitString, RankedGraph, code_interval


def degree_threshold(n: int, t: float) -> int:
    """Degree cap ``ceil(n ** (1 - t))``, never below 1."""
    if n <= 1:
        return 1
    # tolerate rounding noise so that e.g. 64 ** 0.5 stays 8
    return max(1, math.ceil(n ** (1.0 - t) - 1e-9))


@dataclass(frozen=True)
class PrefixNode:
    """One node ``[x]`` of the partition; all arrays hold edge codes, ascending."""

    prefix: BitString
    lo: int
    hi: int
    low: np.ndarray
    gamma: np.ndarray
    high0: np.ndarray
    high1: np.ndarray

    @property
    def key(self) -> tuple[int, int]:
        return self.prefix.value, self.prefix.length

    @property
    def depth(self) -> int:
        return self.prefix.length

    @property
    def size(self) -> int:
        return len(self.low) + len(self.gamma) + len(self.high0) + len(self.high1)


@dataclass(frozen=True)
class PartitionTree:
    b: int
    t: float
    threshold: int
    nodes: dict[tuple[int, int], PrefixNode]

    def __iter__(self) -> Iterator[PrefixNode]:
        # deterministic order: by depth, then prefix value
        for key in sorted(self.nodes, key=lambda k: (k[1], k[0])):
            yield self.nodes[key]

    def get(self, prefix: BitString) -> PrefixNode | None:
        return self.nodes.get((prefix.value, prefix.length))

    def dump(self) -> str:
        """One line per node: ``prefix |L| |Gamma| |H0| |H1|``."""
        return "".join(
            f"{node.prefix} {len(node.low)} {len(node.gamma)} {len(node.high0)} {len(node.high1)}\n"
            for node in self
        )

    def home(self, m: int) -> tuple[np.ndarray, np.ndarray]:
        """Per code: depth of the node holding it in L or Gamma, and 0 (L) / 1 (Gamma)."""
        depth = np.full(m, -1, dtype=np.int64)
        kind = np.full(m, -1, dtype=np.int8)
        for node in self.nodes.values():
            depth[node.low] = node.depth
            kind[node.low] = 0
            depth[node.gamma] = node.depth
            kind[node.gamma] = 1
        return depth, kind


def divide_edges(rg: RankedGraph, t: float) -> PartitionTree:
    """Split codes into low, high-low and high-high sets by recursive prefix."""
    n, b = rg.n, rg.b
    thr = degree_threshold(n, t)
    nodes: dict[tuple[int, int], PrefixNode] = {}
    stack = [(BitString(0, 0), np.arange(rg.m, dtype=np.int64))]
    while stack:
        prefix, codes = stack.pop()
        src, dst = rg.src_of[codes], rg.dst_of[codes]
        outdeg = np.bincount(src, minlength=n)
        indeg = np.bincount(dst, minlength=n)
        is_low = outdeg[src] <= thr
        is_gamma = ~is_low & (indeg[dst] <= thr)
        high = codes[~is_low & ~is_gamma]
        if len(high) and prefix.length == b:
            raise AssertionError("a full-length prefix cannot hold high-high edges")
        shift = b - prefix.length - 1
        upper = ((high >> shift) & 1).astype(bool) if len(high) else np.zeros(0, dtype=bool)
        h0, h1 = high[~upper], high[upper]
        lo, hi = code_interval(prefix, b)
        nodes[(prefix.value, prefix.length)] = PrefixNode(
            prefix, lo, hi, codes[is_low], codes[is_gamma], h0, h1
        )
        for bit, part in ((1, h1), (0, h0)):
            if len(part):
                stack.append((prefix + BitString(bit, 1), part))
    return PartitionTree(b, t, thr, nodes)


@dataclass(frozen=True)
class BalancedSide:
    """Vertices split into segments of at most ``cap`` incident edges.

    ``direction == "in"`` groups edges by destination, ``"out"`` by source.
    Segment ``s`` belongs to ``vertex[s]`` and owns ``codes[start[s]:start[s+1]]``
    (ascending) whose opposite endpoints are in ``other``.  ``L`` and ``R``
    are the smallest and largest code of each segment.
    """

    direction: str
    cap: int
    vertex: np.ndarray
    start: np.ndarray
    codes: np.ndarray
    other: np.ndarray
    L: np.ndarray
    R: np.ndarray
    first_seg: dict[int, int]
    end_seg: dict[int, int]

    @property
    def count(self) -> int:
        return len(self.vertex)

    def segments(self, v: int) -> range:
        return range(self.first_seg.get(v, 0), self.end_seg.get(v, 0))

    def edges(self, s: int) -> tuple[np.ndarray, np.ndarray]:
        a, z = self.start[s], self.start[s + 1]
        return self.codes[a:z], self.other[a:z]

    def segment_of_edge(self) -> np.ndarray:
        """Segment index for each position of ``codes``."""
        return np.repeat(np.arange(self.count), np.diff(self.start))


def balance(src: np.ndarray, dst: np.ndarray, codes: np.ndarray, direction: str, cap: int) -> BalancedSide:
    """Cut each vertex's incident edges, sorted by code, into runs of ``cap``."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if direction not in ("in", "out"):
        raise ValueError("direction must be 'in' or 'out'")
    key, opp = (dst, src) if direction == "in" else (src, dst)
    order = np.lexsort((codes, key))
    key, opp, codes = key[order], opp[order], codes[order]
    e = len(codes)
    if e == 0:
        empty = np.zeros(0, dtype=np.int64)
        return BalancedSide(direction, cap, empty, np.zeros(1, dtype=np.int64), empty, empty, empty, empty, {}, {})
    new_group = np.ones(e, dtype=bool)
    new_group[1:] = key[1:] != key[:-1]
    group_start = np.maximum.accumulate(np.where(new_group, np.arange(e), 0))
    rank = np.arange(e) - group_start
    new_seg = new_group | (rank % cap == 0)
    starts = np.nonzero(new_seg)[0]
    start = np.append(starts, e).astype(np.int64)
    vertex = key[starts].astype(np.int64)
    ends = start[1:] - 1
    first_seg: dict[int, int] = {}
    end_seg: dict[int, int] = {}
    for s, v in enumerate(vertex.tolist()):
        first_seg.setdefault(v, s)
        end_seg[v] = s + 1
    return BalancedSide(
        direction, cap, vertex, start, codes.astype(np.int64), opp.astype(np.int64),
        codes[starts].astype(np.int64), codes[ends].astype(np.int64), first_seg, end_seg,
    )
