import random
from types import SimpleNamespace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dagpart.errors import CycleError
from dagpart.graph import DirectedGraph, build_quotient, is_acyclic, random_topological_order, topological_order

from oracles import all_topological_orders, has_cycle


def blocks(block_of):
    return SimpleNamespace(block_of=block_of, k=max(block_of) + 1)


@st.composite
def small_digraphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=min(len(pairs), 3 * n))) if pairs else []
    return DirectedGraph.from_edges(n, [(u, v, 1) for u, v in chosen])


@st.composite
def small_dags(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    perm = draw(st.permutations(range(n)))
    return DirectedGraph.from_edges(n, [(perm[u], perm[v], 1) for u, v in chosen])


def test_fixtures_acyclic(chain3, diamond):
    assert is_acyclic(chain3)
    assert is_acyclic(diamond)


def test_two_cycle_detected():
    g = DirectedGraph.from_edges(2, [(0, 1, 1), (1, 0, 1)])
    assert not is_acyclic(g)
    with pytest.raises(CycleError):
        topological_order(g)
    with pytest.raises(CycleError):
        random_topological_order(g, random.Random(0))


def test_chain_order_is_unique(chain3):
    for seed in range(20):
        assert list(random_topological_order(chain3, random.Random(seed)).order) == [0, 1, 2]


def test_diamond_orders_match_enumeration(diamond):
    expected = {tuple(o) for o in all_topological_orders(diamond)}
    assert expected == {(0, 1, 2, 3), (0, 2, 1, 3)}
    seen = {random_topological_order(diamond, random.Random(s)).order for s in range(1000)}
    assert seen == expected


def test_random_order_support_is_every_order():
    g = DirectedGraph.from_edges(5, [(0, 2, 1), (1, 2, 1), (2, 3, 1)])
    expected = {tuple(o) for o in all_topological_orders(g)}
    seen = {random_topological_order(g, random.Random(s)).order for s in range(3000)}
    assert seen == expected


def test_quotient_examples(diamond, chain3):
    q = build_quotient(diamond, blocks([0, 0, 1, 1]))
    assert q.node_weight == (2, 2)
    assert q.edges() == [(0, 1, 3)]
    q = build_quotient(chain3, blocks([0, 1, 2]))
    assert q.edges() == [(0, 1, 1), (1, 2, 1)]
    q = build_quotient(diamond, blocks([0, 1, 1, 0]))
    assert sorted(q.edges()) == [(0, 1, 3), (1, 0, 4)]
    assert not is_acyclic(q)


def test_from_edges_merges_parallel_edges(caplog):
    g = DirectedGraph.from_edges(2, [(0, 1, 2), (0, 1, 3)])
    assert g.edges() == [(0, 1, 5)]
    assert "merged" in caplog.text


@pytest.mark.parametrize("edge", [(0, 0, 1), (0, 5, 1), (0, 1, 0), (0, 1, -2)])
def test_from_edges_rejects(edge):
    with pytest.raises(ValueError):
        DirectedGraph.from_edges(2, [edge])


@settings(max_examples=300, deadline=None)
@given(small_digraphs())
def test_acyclicity_agrees_with_dfs(g):
    assert is_acyclic(g) == (not has_cycle(g.n, list(zip(g.edge_src, g.edge_dst))))


@settings(max_examples=200, deadline=None)
@given(small_dags(), st.integers(0, 2**32))
def test_random_order_is_topological(g, seed):
    order = random_topological_order(g, random.Random(seed))
    assert order.is_valid_for(g)
    assert list(order.order) in all_topological_orders(g)


@settings(max_examples=200, deadline=None)
@given(small_dags(), st.data())
def test_quotient_conserves_weight(g, data):
    k = data.draw(st.integers(1, 4))
    block_of = data.draw(st.lists(st.integers(0, k - 1), min_size=g.n, max_size=g.n))
    q = build_quotient(g, SimpleNamespace(block_of=block_of, k=k))
    assert q.total_node_weight == g.total_node_weight
    crossing = sum(w for u, v, w in g.edges() if block_of[u] != block_of[v])
    assert q.total_edge_weight == crossing
