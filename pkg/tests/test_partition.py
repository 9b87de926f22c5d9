import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dagpart.errors import MismatchedGraph
from dagpart.generate import random_dag
from dagpart.graph import DirectedGraph
from dagpart.partition import Partition, check_feasibility, max_block_load, partition_distance

import oracles


def test_cut_examples(diamond, chain3):
    assert Partition(diamond, [0, 0, 1, 1], 2).cut_value == 3
    assert Partition(chain3, [0, 0, 0], 1).cut_value == 0
    assert Partition(diamond, [0, 1, 2, 3], 4).cut_value == 7


def test_feasibility_examples(diamond):
    r = check_feasibility(diamond, Partition(diamond, [0, 0, 1, 1], 2, 0.03))
    assert r.l_max == pytest.approx(2.06)
    assert r.overloaded_blocks == [] and r.quotient_acyclic and r.feasible
    r = check_feasibility(diamond, Partition(diamond, [0, 1, 1, 0], 2, 0.03))
    assert not r.quotient_acyclic and not r.feasible


def test_overload_reported(diamond):
    r = check_feasibility(diamond, Partition(diamond, [0, 0, 0, 1], 2, 0.03))
    assert r.overloaded_blocks == [0]
    assert not r.feasible


def test_distance_examples(diamond):
    a = Partition(diamond, [0, 0, 1, 1], 2)
    b = Partition(diamond, [0, 1, 0, 1], 2)
    c = Partition(diamond, [0, 1, 1, 1], 2)
    assert partition_distance(a, b) == 4
    # cut sets {0->2, 1->3} and {0->1, 0->2} share one edge: 2 + 2 - 2*1
    assert partition_distance(a, c) == 2
    assert partition_distance(a, a) == 0


def test_distance_rejects_other_graph(diamond, chain3):
    with pytest.raises(MismatchedGraph):
        partition_distance(Partition(diamond, [0, 0, 1, 1], 2), Partition(chain3, [0, 0, 1], 2))


def test_rejects_bad_block_ids(diamond):
    with pytest.raises(ValueError):
        Partition(diamond, [0, 0, 2, 1], 2)
    with pytest.raises(ValueError):
        Partition(diamond, [0, 0, 1], 2)


def test_max_block_load():
    assert max_block_load(10, 3, 0.0) == 4
    assert max_block_load(10, 3, 0.5) == 6


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 12), st.integers(1, 4), st.data())
def test_move_keeps_cached_state_exact(seed, n, k, data):
    g = random_dag(n, 0.4, seed, max_node_weight=3)
    rng = random.Random(seed)
    p = Partition(g, [rng.randrange(k) for _ in range(n)], k)
    for _ in range(data.draw(st.integers(1, 20))):
        v, t = rng.randrange(n), rng.randrange(k)
        before = p.cut_value
        gain = p.move(v, t)
        assert p.cut_value == before - gain
        assert p.cut_value == oracles.cut(g, p.block_of)
        assert p.block_load == oracles.loads(g, p.block_of, k)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 10), st.integers(1, 4))
def test_feasibility_matches_oracle(seed, n, k):
    g = random_dag(n, 0.3, seed, max_node_weight=2)
    rng = random.Random(seed)
    block_of = [rng.randrange(k) for _ in range(n)]
    p = Partition(g, block_of, k, 0.03)
    assert check_feasibility(g, p).feasible == oracles.feasible(g, block_of, k, 0.03)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_distance_is_a_metric(seed):
    rng = random.Random(seed)
    g = random_dag(8, 0.4, seed)
    a, b, c = (Partition(g, [rng.randrange(3) for _ in range(8)], 3) for _ in range(3))
    d = partition_distance
    assert d(a, b) == d(b, a)
    assert d(a, c) <= d(a, b) + d(b, c)


def test_zero_weight_nodes_are_allowed():
    g = DirectedGraph.from_edges(3, [(0, 1, 1)], node_weight=[0, 1, 1])
    assert Partition(g, [0, 1, 1], 2).block_load == [0, 2]
