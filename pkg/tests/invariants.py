"""Structural checks shared by unit and acceptance tests."""

import math

import numpy as np

from apnp.graph import BitString, code_interval


def check_tree(rg, tree):
    """Raise AssertionError on any broken partition invariant."""
    thr = tree.threshold
    seen = np.zeros(rg.m, dtype=np.int64)
    for node in tree:
        lo, hi = code_interval(node.prefix, rg.b)
        assert (node.lo, node.hi) == (lo, hi)
        codes = np.concatenate([node.low, node.gamma, node.high0, node.high1])
        assert np.all((codes >= lo) & (codes <= hi))
        src, dst = rg.src_of[codes], rg.dst_of[codes]
        outdeg = np.bincount(src, minlength=rg.n)
        indeg = np.bincount(dst, minlength=rg.n)
        assert np.all(outdeg[rg.src_of[node.low]] <= thr)
        assert np.all(outdeg[rg.src_of[node.gamma]] > thr)
        assert np.all(indeg[rg.dst_of[node.gamma]] <= thr)
        for part in (node.high0, node.high1):
            assert np.all(outdeg[rg.src_of[part]] > thr)
            assert np.all(indeg[rg.dst_of[part]] > thr)
        shift = rg.b - node.depth - 1
        if len(node.high0) or len(node.high1):
            assert np.all(((node.high0 >> shift) & 1) == 0)
            assert np.all(((node.high1 >> shift) & 1) == 1)
        for bit, part in ((0, node.high0), (1, node.high1)):
            child = tree.get(node.prefix + BitString(bit, 1))
            if len(part):
                assert child is not None
                kids = np.concatenate([child.low, child.gamma, child.high0, child.high1])
                assert np.array_equal(np.sort(kids), np.sort(part))
            else:
                assert child is None
        seen[node.low] += 1
        seen[node.gamma] += 1
    assert np.all(seen == 1)


def check_balance(src, dst, codes, direction, cap, side):
    key = dst if direction == "in" else src
    assert side.count == len(side.vertex)
    total = 0
    for v in np.unique(key).tolist():
        segs = list(side.segments(v))
        assert segs, v
        mine = np.sort(codes[key == v])
        got = []
        for r, s in enumerate(segs):
            c, _ = side.edges(s)
            assert 1 <= len(c) <= cap
            if r < len(segs) - 1:
                assert len(c) == cap
            assert np.all(np.diff(c) > 0)
            assert side.L[s] == c[0] and side.R[s] == c[-1]
            if r:
                assert side.R[segs[r - 1]] < side.L[s]
            got.extend(c.tolist())
        assert got == mine.tolist()
        total += len(segs)
    assert total == side.count
    incomplete = sum(1 for v in np.unique(key) if np.sum(key == v) % cap)
    assert side.count <= math.ceil(len(codes) / cap) + incomplete
    opp = src if direction == "in" else dst
    by_code = dict(zip(codes.tolist(), opp.tolist()))
    assert [by_code[c] for c in side.codes.tolist()] == side.other.tolist()
