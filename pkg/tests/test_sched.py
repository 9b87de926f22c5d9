import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dagpart.errors import CycleError
from dagpart.generate import layered_random_dag
from dagpart.graph import DirectedGraph, is_acyclic
from dagpart.partition import Partition
from dagpart.sched import (
    capacity_config,
    critical_path_estimate,
    gang_plan,
    sas_list_schedule,
    schedule_gangs,
    two_pass_schedule,
)

import oracles


def timed_diamond(times=(5, 3, 2, 7)):
    return DirectedGraph.from_edges(4, [(0, 1, 1), (0, 2, 2), (1, 3, 1), (2, 3, 3)], exec_time=list(times))


def test_critical_path_examples():
    g = timed_diamond()
    assert critical_path_estimate(g, Partition(g, [0, 0, 1, 1], 2)) == 12
    assert critical_path_estimate(g, Partition(g, [0, 0, 0, 0], 1)) == 7
    z = timed_diamond((0, 0, 0, 0))
    assert critical_path_estimate(z, Partition(z, [0, 0, 1, 1], 2)) == 0


def test_critical_path_with_programs():
    g = timed_diamond()
    # programs {0,1} (8) and {2} (2) in gang 0, {3} (7) in gang 1
    assert critical_path_estimate(g, Partition(g, [0, 0, 0, 1], 2), [0, 0, 1, 2]) == 15


def test_gang_plan_order_and_times():
    g = timed_diamond()
    plan = gang_plan(g, Partition(g, [1, 1, 0, 0], 2))
    assert plan.gangs == (1, 0)
    assert plan.program_time == (5, 3, 2, 7)


def test_program_spanning_gangs_rejected():
    g = timed_diamond()
    with pytest.raises(ValueError):
        gang_plan(g, Partition(g, [0, 0, 1, 1], 2), [0, 0, 0, 1])


def test_sas_examples():
    assert sas_list_schedule([5, 3], [], 1) == 8
    assert sas_list_schedule([5, 3], [], 2) == 5
    assert sas_list_schedule([2, 2, 3], [(0, 1)], 2) == 4


def _list_schedule_from_order(times, deps, processors, order):
    """Plain event simulation for a fixed priority list."""
    n = len(times)
    preds = {v: {a for a, b in deps if b == v} for v in range(n)}
    finish = {}
    free_at = [0.0] * processors
    started = set()
    now = 0.0
    running = []
    while len(finish) < n:
        ready = [v for v in order if v not in started and preds[v] <= {u for u, f in finish.items() if f <= now}]
        for v in ready:
            slots = [i for i, t in enumerate(free_at) if t <= now]
            if not slots:
                break
            free_at[slots[0]] = now + times[v]
            started.add(v)
            running.append((now + times[v], v))
        running.sort()
        t, v = running.pop(0)
        finish[v] = t
        now = max(now, t)
        while running and running[0][0] <= now:
            t2, v2 = running.pop(0)
            finish[v2] = t2
    return max(finish.values(), default=0.0)


def test_sas_chain_example_matches_best_list_order():
    times, deps = [2, 2, 3], [(0, 1)]
    best = min(
        _list_schedule_from_order(times, deps, 2, list(order)) for order in itertools.permutations(range(3))
    )
    assert best == 4 == sas_list_schedule(times, deps, 2)


def test_sas_cycle():
    with pytest.raises(CycleError):
        sas_list_schedule([1, 1], [(0, 1), (1, 0)], 2)


def test_sas_processors():
    with pytest.raises(ValueError):
        sas_list_schedule([1], [], 0)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 12), st.integers(1, 4))
def test_sas_matches_priority_list_reference(seed, n, procs):
    rng = random.Random(seed)
    times = [rng.choice([0.5, 1.0, 2.0, 3.0]) for _ in range(n)]
    deps = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.25]
    succ = {v: [b for a, b in deps if a == v] for v in range(n)}
    prio = [0.0] * n
    for v in reversed(range(n)):
        prio[v] = times[v] + max((prio[s] for s in succ[v]), default=0.0)
    order = sorted(range(n), key=lambda v: (-prio[v], v))
    got = sas_list_schedule(times, deps, procs)
    assert got == pytest.approx(_list_schedule_from_order(times, deps, procs, order))
    assert got >= max(times) - 1e-12
    assert got >= sum(times) / procs - 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 4))
def test_critical_path_oracle_random(seed, k):
    rng = random.Random(seed)
    g = layered_random_dag(rng.randint(2, 40), 4, 0.3, rng, max_exec_time=3.0)
    p = Partition(g, [rng.randrange(k) for _ in range(g.n)], k)
    assert critical_path_estimate(g, p) == pytest.approx(oracles.critical_path(g, p.block_of, k))


def test_capacity_config():
    k, eps = capacity_config(100, 30)
    assert k == 4
    assert (1 + eps) * 25 == pytest.approx(30)


def test_two_pass_flow():
    g = layered_random_dag(80, 8, 0.2, 1, max_exec_time=1.0)
    res = two_pass_schedule(g, program_memory=10, processors=3, seed=2, repetitions=1)
    assert max(res.programs.block_load) <= 10
    assert len(res.makespans) == len(res.plan.gangs)
    for gang in res.plan.gangs:
        assert len(res.plan.gang_programs(gang)) <= 3
    assert is_acyclic_gangs(g, res)


def is_acyclic_gangs(g, res):
    from dagpart.graph import build_quotient

    node_gangs = Partition(g, [res.gangs.block_of[b] for b in res.programs.block_of], res.gangs.k)
    return is_acyclic(build_quotient(g, node_gangs))


def test_schedule_gangs_serial_gang():
    g = timed_diamond()
    spans = schedule_gangs(g, Partition(g, [0, 0, 0, 0], 1), 1)
    assert spans == [17]
