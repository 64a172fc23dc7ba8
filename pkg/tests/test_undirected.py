import numpy as np
import pytest
from hypothesis import given, settings

from apnp.graph import Graph, GraphFormatError
from apnp.oracle import brute_force_apnp, undirected_basic
from apnp.undirected import UndirectedStats, solve_undirected
from strategies import graphs


def und(n, triples):
    return Graph.from_triples(n, triples, directed=False)


def test_path():
    g = und(3, [(0, 1, 1), (1, 2, 3)])
    r = solve_undirected(g)
    assert r.same_values(undirected_basic(g))
    assert r.get(0, 1) == 1 and r.get(1, 0) == 1
    assert r.get(0, 2) == 3 and r.get(1, 2) == 3 and r.get(2, 1) == 3
    assert r.get(2, 0) is None


def test_no_edges():
    assert solve_undirected(und(4, [])).as_dict() == {}
    assert solve_undirected(und(0, [])).as_dict() == {}


def test_equal_weight_clique():
    g = und(4, [(u, v, 6) for u in range(4) for v in range(u + 1, 4)])
    r = solve_undirected(g)
    assert r.as_dict() == {(i, k): 6 for i in range(4) for k in range(4)}
    assert r.same_values(brute_force_apnp(g))


def test_rejects_directed():
    with pytest.raises(GraphFormatError):
        solve_undirected(Graph.from_triples(2, [(0, 1, 1)]))


def lockstep(g, seed=0):
    fast_cols, basic_cols = [], []
    solve_undirected(g, seed=seed, on_edge=lambda k, cols: fast_cols.append(np.array(cols, dtype=bool)))
    undirected_basic(g, on_edge=lambda k, A: basic_cols.append(A.T.copy()))
    return fast_cols, basic_cols


def test_reach_sets_match_after_each_edge():
    g = und(5, [(0, 1, 4), (1, 2, 2), (2, 3, 9), (3, 4, 1), (0, 4, 7), (1, 3, 5)])
    fast, basic = lockstep(g)
    assert len(fast) == len(basic) == g.m
    for a, b in zip(fast, basic):
        assert np.array_equal(a, b)


def test_stats_bounds():
    rng = np.random.default_rng(4)
    n = 20
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    w = rng.permutation(len(pairs))
    g = und(n, [(u, v, int(x)) for (u, v), x in zip(pairs, w)])
    st = UndirectedStats()
    solve_undirected(g, stats=st, debug=True)
    assert st.n == n and st.edges == g.m
    assert st.bit_flips <= n * n
    assert st.bit_flips == st.mismatch_searches
    assert st.max_calls_per_search <= 2 * 5 + 4


@settings(max_examples=200, deadline=None)
@given(graphs(directed=False, max_n=10))
def test_matches_basic(g):
    st = UndirectedStats()
    r = solve_undirected(g, stats=st, debug=True)
    assert r.same_values(undirected_basic(g))
    r.check_consistency(g)
    assert st.bit_flips <= g.n * g.n


@settings(max_examples=60, deadline=None)
@given(graphs(directed=False, max_n=8))
def test_lockstep_property(g):
    fast, basic = lockstep(g)
    for a, b in zip(fast, basic):
        assert np.array_equal(a, b)


@settings(max_examples=150, deadline=None)
@given(graphs(directed=False, max_n=7, distinct=False, max_weight=3))
def test_ties_match_brute_force(g):
    assert solve_undirected(g).same_values(brute_force_apnp(g))
