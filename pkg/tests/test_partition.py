import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apnp.graph import BitString, Graph, rank_weights
from apnp.partition import balance, degree_threshold, divide_edges
from invariants import check_balance, check_tree
from strategies import graphs


def test_threshold_values():
    assert degree_threshold(64, 0.5) == 8
    assert degree_threshold(16, 1.0) == 1
    assert degree_threshold(10, 0.0) == 10
    assert degree_threshold(8, 2 / 3) == 2
    assert degree_threshold(1, 0.5) == 1


def test_all_low_root():
    rg = rank_weights(Graph.from_triples(4, [(0, 1, 1), (1, 2, 2), (2, 3, 3), (3, 0, 4)]))
    tree = divide_edges(rg, 0.5)
    root = tree.get(BitString(0, 0))
    assert sorted(root.low.tolist()) == [0, 1, 2, 3]
    assert len(root.gamma) == 0 and len(tree.nodes) == 1


def test_complete_bipartite_two_by_two():
    g = Graph.from_triples(4, [(0, 2, 0), (1, 3, 1), (0, 3, 2), (1, 2, 3)])
    rg = rank_weights(g)
    tree = divide_edges(rg, 1.0)
    assert tree.threshold == 1
    root = tree.get(BitString(0, 0))
    assert len(root.low) == 0 and len(root.gamma) == 0
    assert len(root.high0) == 2 and len(root.high1) == 2
    check_tree(rg, tree)


def test_star_goes_to_gamma():
    g = Graph.from_triples(8, [(0, k, k) for k in range(1, 5)])
    tree = divide_edges(rank_weights(g), 2 / 3)
    assert tree.threshold == 2
    root = tree.get(BitString(0, 0))
    assert sorted(root.gamma.tolist()) == [0, 1, 2, 3]
    assert len(root.low) == 0


def test_dump_lists_every_node():
    g = Graph.from_triples(4, [(0, 2, 0), (1, 3, 1), (0, 3, 2), (1, 2, 3)])
    lines = divide_edges(rank_weights(g), 1.0).dump().splitlines()
    assert lines[0] == "[] 0 0 2 2"
    assert len(lines) == 3


def test_home_covers_all_codes():
    g = Graph.from_triples(4, [(0, 2, 0), (1, 3, 1), (0, 3, 2), (1, 2, 3)])
    rg = rank_weights(g)
    depth, kind = divide_edges(rg, 1.0).home(rg.m)
    assert np.all(depth >= 0) and np.all(kind >= 0)


@settings(max_examples=150, deadline=None)
@given(graphs(directed=True, max_n=10), st.sampled_from([0.0, 0.25, 0.5, 0.75, 1.0]))
def test_partition_invariants(g, t):
    rg = rank_weights(g)
    check_tree(rg, divide_edges(rg, t))


def test_balance_five_in_edges():
    src, dst, codes = np.arange(5), np.full(5, 9), np.array([4, 0, 3, 1, 2])
    side = balance(src, dst, codes, "in", 2)
    assert [len(side.edges(s)[0]) for s in side.segments(9)] == [2, 2, 1]
    assert side.L.tolist() == [0, 2, 4] and side.R.tolist() == [1, 3, 4]
    check_balance(src, dst, codes, "in", 2, side)


def test_balance_low_degree_identity():
    src, dst, codes = np.array([0, 1, 2]), np.array([1, 2, 0]), np.array([5, 3, 7])
    side = balance(src, dst, codes, "out", 2)
    assert side.count == 3
    assert sorted(side.vertex.tolist()) == [0, 1, 2]


def test_balance_two_vertices():
    src = np.array([0, 0, 0, 1, 1, 1, 1])
    dst = np.arange(2, 9)
    codes = np.arange(7)
    side = balance(src, dst, codes, "out", 2)
    assert side.count == 4
    assert side.count <= math.ceil(7 / 2) + 2
    check_balance(src, dst, codes, "out", 2, side)


def test_balance_empty_and_bad_args():
    e = np.zeros(0, dtype=np.int64)
    assert balance(e, e, e, "in", 3).count == 0
    with pytest.raises(ValueError):
        balance(e, e, e, "in", 0)
    with pytest.raises(ValueError):
        balance(e, e, e, "sideways", 1)


@st.composite
def edge_sets(draw):
    n = draw(st.integers(1, 12))
    e = draw(st.integers(0, 40))
    src = np.array(draw(st.lists(st.integers(0, n - 1), min_size=e, max_size=e)), dtype=np.int64)
    dst = np.array(draw(st.lists(st.integers(0, n - 1), min_size=e, max_size=e)), dtype=np.int64)
    codes = np.array(draw(st.permutations(range(e))), dtype=np.int64)
    return src, dst, codes


@settings(max_examples=200, deadline=None)
@given(edge_sets(), st.integers(1, 6), st.sampled_from(["in", "out"]))
def test_balance_invariants(es, cap, direction):
    src, dst, codes = es
    check_balance(src, dst, codes, direction, cap, balance(src, dst, codes, direction, cap))
