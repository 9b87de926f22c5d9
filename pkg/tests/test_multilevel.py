import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dagpart.errors import InfeasibleSplit
from dagpart.generate import layered_random_dag, random_dag
from dagpart.graph import DirectedGraph
from dagpart.multilevel import PipelineConfig, initial_partition, multilevel_partition, single_level_partition
from dagpart.partition import Partition, check_feasibility

import oracles


def test_chain_exact_split(chain3):
    p = initial_partition(chain3, 3, 0.0, random.Random(0))
    assert p.block_of == [0, 1, 2]
    assert p.cut_value == 2


def test_diamond_initial_cuts(diamond):
    cuts = {initial_partition(diamond, 2, 0.03, random.Random(s)).cut_value for s in range(50)}
    assert cuts == {3, 4}


def test_diamond_single_level_reaches_optimum(diamond):
    assert oracles.brute_force_opt(diamond, 2, 0.03) == 3
    assert single_level_partition(diamond, PipelineConfig(2, repetitions=20)).cut_value == 3


def test_chain_two_way(chain3):
    assert single_level_partition(chain3, PipelineConfig(2)).cut_value == 1


@pytest.mark.parametrize("seed", range(5))
def test_diamond_multilevel_optimum(diamond, seed):
    assert multilevel_partition(diamond, PipelineConfig(2, seed=seed)).cut_value == 3


def test_heavy_node_infeasible():
    g = DirectedGraph.from_edges(3, [(0, 1, 1)], node_weight=[10, 1, 1])
    with pytest.raises(InfeasibleSplit):
        initial_partition(g, 2, 0.03, random.Random(0))


def test_uneven_weights_fall_back_to_l_max():
    # average-sized blocks need three runs here; L_max-sized ones fit in two
    g = DirectedGraph.from_edges(3, [(0, 1, 1), (1, 2, 1)], node_weight=[3, 2, 3])
    p = initial_partition(g, 2, 0.5, random.Random(0))
    assert check_feasibility(g, p).feasible
    assert sorted(p.block_load) == [3, 5]


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(0)
    with pytest.raises(ValueError):
        PipelineConfig(2, local_search="h7")
    with pytest.raises(ValueError):
        PipelineConfig(2, epsilon=-0.1)


def test_seeded_runs_repeat():
    g = layered_random_dag(200, 15, 0.1, 5)
    a = multilevel_partition(g, PipelineConfig(4, seed=3))
    b = multilevel_partition(g, PipelineConfig(4, seed=3))
    assert a.block_of == b.block_of


def test_seed_partition_is_improved_not_replaced():
    g = layered_random_dag(150, 12, 0.15, 2)
    start = single_level_partition(g, PipelineConfig(4, seed=9))
    out = multilevel_partition(g, PipelineConfig(4, seed=1), seed_partition=start)
    assert out.cut_value <= start.cut_value


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 120), st.sampled_from([2, 4, 8]))
def test_pipelines_feasible_and_ordered(seed, n, k):
    g = layered_random_dag(n, max(2, n // 8), 0.2, seed, max_edge_weight=3)
    cfg = PipelineConfig(k, seed=seed % 1000, repetitions=2)
    sl = single_level_partition(g, cfg)
    ml = multilevel_partition(g, cfg)
    for p in (sl, ml):
        assert oracles.feasible(g, p.block_of, k, 0.03)
    # same seed: the multi-level start is the single-level result
    assert ml.cut_value <= sl.cut_value


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 8), st.sampled_from([2, 3]))
def test_never_below_optimum(seed, n, k):
    g = random_dag(n, 0.4, seed, max_edge_weight=4)
    opt = oracles.brute_force_opt(g, k, 0.03)
    p = multilevel_partition(g, PipelineConfig(k, seed=seed % 100))
    assert p.cut_value >= opt
