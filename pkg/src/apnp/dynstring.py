"""Persistent 0/1 strings with fast equality tests.

Strings are implicit treaps (one bit per node, random priorities) whose
nodes cache size and a polynomial fingerprint modulo the Mersenne prime
``2**127 - 1``.  Nodes are never mutated, so every handle stays valid.
Equality of fingerprints is trusted (Monte Carlo, collision chance about
``n / 2**127`` per comparison); ``debug=True`` confirms each positive
answer by a full comparison.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

P = (1 << 127) - 1


class _Node:
    __slots__ = ("left", "right", "bit", "prio", "size", "hash")

    def __init__(self, left: Optional[_Node], right: Optional[_Node], bit: int, prio: int, size: int, h: int) -> None:
        self.left = left
        self.right = right
        self.bit = bit
        self.prio = prio
        self.size = size
        self.hash = h


@dataclass
class CallCounts:
    makestring: int = 0
    concatenate: int = 0
    split: int = 0
    equal: int = 0
    set_bit: int = 0


class StringFamily:
    """Factory and operation set for persistent bit strings.

    Handles are opaque node references.  Strings are never empty.
    """

    def __init__(self, seed: int = 0, debug: bool = False) -> None:
        self.rng = random.Random(seed)
        self.base = self.rng.randrange(2, P - 1)
        self.debug = debug
        self.calls = CallCounts()
        self._pow = [1]

    # -- internals ------------------------------------------------------------

    def _power(self, k: int) -> int:
        pw = self._pow
        while len(pw) <= k:
            pw.append(pw[-1] * self.base % P)
        return pw[k]

    def _make(self, left: Optional[_Node], right: Optional[_Node], bit: int, prio: int) -> _Node:
        ls = left.size if left else 0
        rs = right.size if right else 0
        h = left.hash if left else 0
        h = (h * self.base + bit) % P
        if right:
            h = (h * self._power(rs) + right.hash) % P
        return _Node(left, right, bit, prio, ls + rs + 1, h)

    def _merge(self, a: Optional[_Node], b: Optional[_Node]) -> Optional[_Node]:
        if a is None:
            return b
        if b is None:
            return a
        if a.prio > b.prio:
            return self._make(a.left, self._merge(a.right, b), a.bit, a.prio)
        return self._make(self._merge(a, b.left), b.right, b.bit, b.prio)

    def _split(self, t: Optional[_Node], k: int) -> tuple[Optional[_Node], Optional[_Node]]:
        """First ``k`` bits and the rest."""
        if t is None:
            return None, None
        ls = t.left.size if t.left else 0
        if k <= ls:
            a, b = self._split(t.left, k)
            return a, self._make(b, t.right, t.bit, t.prio)
        a, b = self._split(t.right, k - ls - 1)
        return self._make(t.left, a, t.bit, t.prio), b

    def _prefix_hash(self, t: _Node, k: int) -> int:
        """Fingerprint of the first ``k`` bits, without allocating."""
        acc = 0
        while k > 0:
            ls = t.left.size if t.left else 0
            if k <= ls:
                t = t.left
                continue
            lh = t.left.hash if t.left else 0
            acc = (acc * self._power(ls + 1) + lh * self.base + t.bit) % P
            k -= ls + 1
            if k == 0:
                break
            t = t.right
        return acc

    # -- contract -------------------------------------------------------------

    def makestring(self, c: int) -> _Node:
        if c not in (0, 1):
            raise ValueError("bit must be 0 or 1")
        self.calls.makestring += 1
        return _Node(None, None, c, self.rng.getrandbits(62), 1, c)

    def concatenate(self, a: _Node, b: _Node) -> _Node:
        self.calls.concatenate += 1
        out = self._merge(a, b)
        assert out is not None
        return out

    def split(self, a: _Node, i: int) -> tuple[_Node, _Node]:
        """``(a[:i], a[i:])`` for ``1 <= i < len(a)``."""
        if not 1 <= i < a.size:
            raise IndexError(f"split position {i} outside 1..{a.size - 1}")
        self.calls.split += 1
        left, right = self._split(a, i)
        assert left is not None and right is not None
        return left, right

    def equal(self, a: _Node, b: _Node) -> bool:
        self.calls.equal += 1
        same = a is b or (a.size == b.size and a.hash == b.hash)
        if same and self.debug and a is not b and self.bits(a) != self.bits(b):
            raise AssertionError("fingerprint collision")
        return same

    def first_mismatch(self, a: _Node, b: _Node) -> Optional[int]:
        """Smallest index where the strings differ, or None.

        Binary search over prefix length.  Each probe compares the
        fingerprints of two prefixes read off the trees in place, and counts
        as one equality test.
        """
        if a.size != b.size:
            raise ValueError("first_mismatch needs equal lengths")
        if self.equal(a, b):
            return None
        lo, hi = 0, a.size  # prefixes of length lo agree, of length hi differ
        while hi - lo > 1:
            mid = (lo + hi) // 2
            self.calls.equal += 1
            if self._prefix_hash(a, mid) == self._prefix_hash(b, mid):
                lo = mid
            else:
                hi = mid
        if self.debug and self.bits(a)[:lo] != self.bits(b)[:lo]:
            raise AssertionError("fingerprint collision")
        return lo

    def first_mismatch_by_split(self, a: _Node, b: _Node) -> Optional[int]:
        """Same answer, using only ``split`` and ``equal`` on handles."""
        if a.size != b.size:
            raise ValueError("first_mismatch needs equal lengths")
        if self.equal(a, b):
            return None
        offset = 0
        while a.size > 1:
            half = a.size // 2
            a1, a2 = self.split(a, half)
            b1, b2 = self.split(b, half)
            if self.equal(a1, b1):
                a, b, offset = a2, b2, offset + half
            else:
                a, b = a1, b1
        return offset

    def set_bit(self, a: _Node, i: int, v: int) -> _Node:
        """Copy of ``a`` with bit ``i`` set to ``v`` (path copying)."""
        if not 0 <= i < a.size:
            raise IndexError(f"bit index {i} outside 0..{a.size - 1}")
        if v not in (0, 1):
            raise ValueError("bit must be 0 or 1")
        self.calls.set_bit += 1

        def go(t: _Node, k: int) -> _Node:
            ls = t.left.size if t.left else 0
            if k < ls:
                return self._make(go(t.left, k), t.right, t.bit, t.prio)  # type: ignore[arg-type]
            if k == ls:
                return self._make(t.left, t.right, v, t.prio)
            return self._make(t.left, go(t.right, k - ls - 1), t.bit, t.prio)  # type: ignore[arg-type]

        return go(a, i)

    # -- helpers ----------------------------------------------------------------

    def from_bits(self, bits: list[int] | str) -> _Node:
        """Build a string from fresh nodes by balanced concatenation."""
        vals = [int(ch) for ch in bits]
        if not vals:
            raise ValueError("strings are non-empty")
        level = [self.makestring(v) for v in vals]
        while len(level) > 1:
            nxt = [self.concatenate(level[k], level[k + 1]) for k in range(0, len(level) - 1, 2)]
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        return level[0]

    def bits(self, a: _Node) -> list[int]:
        out: list[int] = []
        stack: list[_Node] = []
        t: Optional[_Node] = a
        while stack or t is not None:
            while t is not None:
                stack.append(t)
                t = t.left
            t = stack.pop()
            out.append(t.bit)
            t = t.right
        return out

    def text(self, a: _Node) -> str:
        return "".join(map(str, self.bits(a)))

    def get(self, a: _Node, i: int) -> int:
        t = a
        while True:
            ls = t.left.size if t.left else 0
            if i < ls:
                t = t.left  # type: ignore[assignment]
            elif i == ls:
                return t.bit
            else:
                i -= ls + 1
                t = t.right  # type: ignore[assignment]

    @staticmethod
    def length(a: _Node) -> int:
        return a.size
