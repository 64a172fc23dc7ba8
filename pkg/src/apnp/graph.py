"""Graph model, text I/O, weight ranking and binary-prefix helpers.

Weights are plain 64-bit integers and only their order matters.  Solvers
work on :class:`RankedGraph`, where every edge weight is replaced by its
rank (the *code*), a ``b``-bit integer with ``b = max(1, ceil(log2 m))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Optional

import numpy as np

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


class GraphFormatError(ValueError):
    """Raised for malformed graph files or invalid graph data."""


class Edge(NamedTuple):
    src: int
    dst: int
    weight: int
    id: int


@dataclass(frozen=True)
class Graph:
    n: int
    directed: bool
    edges: tuple[Edge, ...]
    multi: bool = False

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphFormatError("vertex count must be non-negative")
        seen: set[tuple[int, int]] = set()
        for pos, e in enumerate(self.edges):
            if e.id != pos:
                raise GraphFormatError(f"edge ids must be dense 0..m-1, got {e.id} at {pos}")
            if not (0 <= e.src < self.n and 0 <= e.dst < self.n):
                raise GraphFormatError(f"edge {pos}: vertex id out of range")
            if e.src == e.dst:
                raise GraphFormatError(f"edge {pos}: self-loop {e.src}")
            if not (INT64_MIN <= e.weight <= INT64_MAX):
                raise GraphFormatError(f"edge {pos}: weight outside int64")
            if not self.multi:
                key = (e.src, e.dst) if self.directed else (min(e.src, e.dst), max(e.src, e.dst))
                if key in seen:
                    raise GraphFormatError(f"edge {pos}: duplicate edge {key} in simple graph")
                seen.add(key)

    @classmethod
    def from_triples(
        cls,
        n: int,
        triples: Iterable[tuple[int, int, int]],
        directed: bool = True,
        multi: bool = False,
    ) -> Graph:
        edges = tuple(Edge(int(u), int(v), int(w), i) for i, (u, v, w) in enumerate(triples))
        return cls(n, directed, edges, multi)

    @classmethod
    def _unchecked(cls, n: int, directed: bool, triples: Iterable[tuple[int, int, int]], multi: bool) -> Graph:
        """Skip validation; for graphs the library builds itself."""
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "directed", directed)
        object.__setattr__(g, "edges", tuple(Edge(u, v, w, i) for i, (u, v, w) in enumerate(triples)))
        object.__setattr__(g, "multi", multi)
        return g

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_ties(self) -> bool:
        return len({e.weight for e in self.edges}) != len(self.edges)

    def triples(self) -> list[tuple[int, int, int]]:
        return [(e.src, e.dst, e.weight) for e in self.edges]


def bit_length_for(m: int) -> int:
    """Number of code bits for ``m`` edges: ``max(1, ceil(log2 m))``."""
    return max(1, (m - 1).bit_length())


@dataclass(frozen=True)
class RankedGraph:
    """A graph whose edges carry distinct codes ``0..m-1`` in weight order.

    The ``*_of`` arrays are indexed by code.
    """

    base: Graph
    b: int
    code: np.ndarray  # edge id -> code
    src_of: np.ndarray
    dst_of: np.ndarray
    weight_of: np.ndarray
    edge_of: np.ndarray

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def m(self) -> int:
        return self.base.m

    def inverse(self, code: int) -> tuple[int, int]:
        return int(self.edge_of[code]), int(self.weight_of[code])


def rank_weights(g: Graph) -> RankedGraph:
    """Assign codes by ascending weight; weights must be pairwise distinct."""
    m = g.m
    weights = np.fromiter((e.weight for e in g.edges), dtype=np.int64, count=m)
    order = np.argsort(weights, kind="stable")
    if m > 1 and np.any(weights[order[1:]] == weights[order[:-1]]):
        raise GraphFormatError("duplicate weights; apply tie reduction first")
    code = np.empty(m, dtype=np.int64)
    code[order] = np.arange(m, dtype=np.int64)
    src = np.fromiter((e.src for e in g.edges), dtype=np.int64, count=m)
    dst = np.fromiter((e.dst for e in g.edges), dtype=np.int64, count=m)
    return RankedGraph(
        base=g,
        b=bit_length_for(m),
        code=code,
        src_of=src[order],
        dst_of=dst[order],
        weight_of=weights[order],
        edge_of=order.astype(np.int64),
    )


# -- binary strings -----------------------------------------------------------


@dataclass(frozen=True, order=False)
class BitString:
    """A 0/1 string stored as an integer value plus a length.

    Comparison is lexicographic on the bit sequence, so a proper prefix
    sorts before its extensions: ``[0111] < [101] < [1010]``.
    """

    value: int = 0
    length: int = 0

    def __post_init__(self) -> None:
        if self.length < 0 or self.value < 0 or self.value >> self.length:
            raise ValueError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def parse(cls, text: str) -> BitString:
        text = text.strip().strip("[]").strip()
        if text and set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(int(text, 2) if text else 0, len(text))

    @classmethod
    def of_code(cls, code: int, b: int) -> BitString:
        return cls(code, b)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.length - 1 - i)) & 1 for i in range(self.length))

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return "[" + "".join(map(str, self.bits)) + "]"

    def __add__(self, other: BitString) -> BitString:
        return BitString((self.value << other.length) | other.value, self.length + other.length)

    def __lt__(self, other: BitString) -> bool:
        return self.bits < other.bits

    def __le__(self, other: BitString) -> bool:
        return self.bits <= other.bits

    def __gt__(self, other: BitString) -> bool:
        return self.bits > other.bits

    def __ge__(self, other: BitString) -> bool:
        return self.bits >= other.bits

    def prefix(self, length: int) -> BitString:
        if not 0 <= length <= self.length:
            raise ValueError("prefix length out of range")
        return BitString(self.value >> (self.length - length), length)

    def is_prefix_of(self, other: BitString) -> bool:
        return self.length <= other.length and other.prefix(self.length) == self


def lcp(a: BitString, b: BitString) -> BitString:
    """Longest common prefix of two bit strings."""
    k = min(a.length, b.length)
    diff = a.prefix(k).value ^ b.prefix(k).value
    # the highest differing bit bounds the common part
    shared = k - diff.bit_length()
    return a.prefix(shared)


def code_interval(prefix: BitString, b: int) -> tuple[int, int]:
    """Smallest and largest ``b``-bit codes starting with ``prefix``."""
    if prefix.length > b:
        raise ValueError("prefix longer than code width")
    free = b - prefix.length
    lo = prefix.value << free
    return lo, lo | ((1 << free) - 1)


# -- results ------------------------------------------------------------------


@dataclass
class APNPMatrix:
    """All-pairs answer: ``opt[i, k]`` is valid where ``present[i, k]``.

    ``last_edge[i, k]`` holds the id of the final edge of an optimal path
    (``-1`` when absent).
    """

    n: int
    opt: np.ndarray = field(repr=False)
    present: np.ndarray = field(repr=False)
    last_edge: np.ndarray = field(repr=False)

    @classmethod
    def empty(cls, n: int) -> APNPMatrix:
        return cls(
            n,
            np.zeros((n, n), dtype=np.int64),
            np.zeros((n, n), dtype=bool),
            np.full((n, n), -1, dtype=np.int64),
        )

    def get(self, i: int, k: int) -> Optional[int]:
        return int(self.opt[i, k]) if self.present[i, k] else None

    def entries(self) -> Iterator[tuple[int, int, int]]:
        rows, cols = np.nonzero(self.present)
        yield from zip(rows.tolist(), cols.tolist(), self.opt[rows, cols].tolist())

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(i, k): w for i, k, w in self.entries()}

    def same_values(self, other: APNPMatrix) -> bool:
        """Equal presence pattern and equal weights (edge choice ignored)."""
        return (
            self.n == other.n
            and np.array_equal(self.present, other.present)
            and np.array_equal(np.where(self.present, self.opt, 0), np.where(other.present, other.opt, 0))
        )

    def check_consistency(self, g: Graph) -> None:
        """Raise AssertionError unless every entry names a fitting last edge."""
        assert np.array_equal(self.present, self.last_edge >= 0)
        for i, k, w in self.entries():
            e = g.edges[int(self.last_edge[i, k])]
            assert e.weight == w, (i, k)
            assert e.dst == k or (not g.directed and e.src == k), (i, k)


# -- text formats -------------------------------------------------------------

_FLAGS = {"multi", "distinct"}


def parse_graph(text: str, distinct: bool = False) -> Graph:
    """Parse ``n m directed|undirected [multi] [distinct]`` plus ``m`` edge lines.

    ``distinct`` (or the header flag of the same name) rejects repeated weights.
    """
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise GraphFormatError("empty input")
    head = lines[0].split()
    if len(head) < 3 or head[2] not in ("directed", "undirected"):
        raise GraphFormatError("line 1: expected 'n m directed|undirected [multi]'")
    flags = set(head[3:])
    if flags - _FLAGS:
        raise GraphFormatError(f"line 1: unknown flags {sorted(flags - _FLAGS)}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphFormatError("line 1: n and m must be integers") from None
    if n < 0 or m < 0:
        raise GraphFormatError("line 1: n and m must be non-negative")
    if len(lines) - 1 != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(lines) - 1}")
    distinct = distinct or "distinct" in flags
    triples = []
    weights: set[int] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 3:
            raise GraphFormatError(f"line {lineno}: expected 'src dst weight'")
        try:
            u, v, w = (int(p) for p in parts)
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer field") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: vertex id out of range")
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop")
        if distinct and w in weights:
            raise GraphFormatError(f"line {lineno}: duplicate weight {w}")
        weights.add(w)
        triples.append((u, v, w))
    try:
        return Graph.from_triples(n, triples, directed=head[2] == "directed", multi="multi" in flags)
    except GraphFormatError as exc:
        raise GraphFormatError(f"invalid graph: {exc}") from None


def format_graph(g: Graph) -> str:
    """Canonical text form; ``parse_graph`` inverts it byte-for-byte."""
    head = f"{g.n} {g.m} {'directed' if g.directed else 'undirected'}"
    if g.multi:
        head += " multi"
    return "".join([head, "\n"] + [f"{e.src} {e.dst} {e.weight}\n" for e in g.edges])


def emit_result(r: APNPMatrix, dense: bool = False) -> str:
    """Result file body: ``i j weight`` lines ordered by ``(i, j)``.

    The sparse form omits pairs without a non-decreasing path; ``dense``
    writes every pair and uses ``inf`` for those.
    """
    if dense:
        out = []
        for i in range(r.n):
            for k in range(r.n):
                w = r.get(i, k)
                out.append(f"{i} {k} {'inf' if w is None else w}\n")
        return "".join(out)
    return "".join(f"{i} {k} {w}\n" for i, k, w in r.entries())


def parse_result(text: str, n: int) -> APNPMatrix:
    r = APNPMatrix.empty(n)
    for line in text.splitlines():
        if not line.strip():
            continue
        i, k, w = line.split()
        if w == "inf":
            continue
        r.opt[int(i), int(k)] = int(w)
        r.present[int(i), int(k)] = True
    return r
