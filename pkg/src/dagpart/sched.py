"""Gang cost model and a single-appearance list scheduler.

Blocks of a gang-pass partition are gangs, executed one after another in a
topological order of the quotient graph.  Inside a gang every program runs on
its own processor, so the slowest program bounds the gang's duration.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import CycleError
from .graph import DirectedGraph, build_quotient, topological_order
from .partition import Partition


@dataclass(frozen=True)
class GangPlan:
    gangs: tuple[int, ...]  # block ids in execution order
    program_of: tuple[int, ...]  # per node
    program_time: tuple[float, ...]  # per program
    gang_of_program: tuple[int, ...]

    def gang_programs(self, gang: int) -> list[int]:
        return [q for q, b in enumerate(self.gang_of_program) if b == gang]


def _program_times(g: DirectedGraph, program_of: Sequence[int]) -> list[float]:
    times = [0.0] * (max(program_of, default=-1) + 1)
    for v, q in enumerate(program_of):
        times[q] += g.exec_time[v]
    return times


def gang_plan(g: DirectedGraph, p: Partition, program_of: Sequence[int] | None = None) -> GangPlan:
    """Order gangs topologically and attach per-program execution times.

    By default every node is its own program.  A program must not span gangs.
    """
    if program_of is None:
        program_of = list(range(g.n))
    times = _program_times(g, program_of)
    gang_of_program = [-1] * len(times)
    for v, q in enumerate(program_of):
        b = p.block_of[v]
        if gang_of_program[q] not in (-1, b):
            raise ValueError(f"program {q} appears in two gangs")
        gang_of_program[q] = b
    order = topological_order(build_quotient(g, p)).order
    return GangPlan(tuple(order), tuple(program_of), tuple(times), tuple(gang_of_program))


def critical_path_estimate(g: DirectedGraph, p: Partition, program_of: Sequence[int] | None = None) -> float:
    """Sum over gangs of the longest program execution time in the gang."""
    if program_of is None:
        longest = [0.0] * p.k
        for v, b in enumerate(p.block_of):
            t = g.exec_time[v]
            if t > longest[b]:
                longest[b] = t
        return sum(longest)
    times = _program_times(g, program_of)
    longest = [0.0] * p.k
    for v, q in enumerate(program_of):
        b = p.block_of[v]
        if times[q] > longest[b]:
            longest[b] = times[q]
    return sum(longest)


def sas_list_schedule(
    exec_times: Sequence[float],
    dependencies: Sequence[tuple[int, int]],
    processors: int,
) -> float:
    """Makespan of a list schedule for one gang.

    Programs are prioritized by the longest execution-time path to a sink
    (own time included), ties by lower program id.  Whenever a processor is
    free, the highest-priority program whose predecessors have finished
    starts on it.  Each program runs once, on a single processor.
    """
    if processors < 1:
        raise ValueError("processors must be >= 1")
    n = len(exec_times)
    deps = sorted(set(dependencies))
    succ: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for a, b in deps:
        succ[a].append(b)
        indeg[b] += 1
    dep_graph = DirectedGraph.from_edges(n, [(a, b, 1) for a, b in deps])
    try:
        order = topological_order(dep_graph).order
    except CycleError as exc:
        raise CycleError("gang dependencies contain a cycle") from exc
    priority = [0.0] * n
    for v in reversed(order):
        tail = max((priority[s] for s in succ[v]), default=0.0)
        priority[v] = exec_times[v] + tail

    ready = [(-priority[v], v) for v in range(n) if indeg[v] == 0]
    heapq.heapify(ready)
    running: list[tuple[float, int]] = []
    free = processors
    now = 0.0
    makespan = 0.0
    done = 0
    while done < n:
        while free and ready:
            _, v = heapq.heappop(ready)
            finish = now + exec_times[v]
            heapq.heappush(running, (finish, v))
            free -= 1
        now, v = heapq.heappop(running)
        finished = [v]
        while running and running[0][0] == now:
            finished.append(heapq.heappop(running)[1])
        for v in finished:
            free += 1
            done += 1
            makespan = max(makespan, now)
            for s in succ[v]:
                indeg[s] -= 1
                if indeg[s] == 0:
                    heapq.heappush(ready, (-priority[s], s))
    return makespan


def schedule_gangs(g: DirectedGraph, p: Partition, processors: int, program_of: Sequence[int] | None = None) -> list[float]:
    """SAS makespan estimate of every gang, in execution order."""
    plan = gang_plan(g, p, program_of)
    makespans = []
    for gang in plan.gangs:
        programs = plan.gang_programs(gang)
        local = {q: i for i, q in enumerate(programs)}
        deps = set()
        for u, v in zip(g.edge_src, g.edge_dst):
            a, b = plan.program_of[u], plan.program_of[v]
            if a != b and a in local and b in local:
                deps.add((local[a], local[b]))
        times = [plan.program_time[q] for q in programs]
        makespans.append(sas_list_schedule(times, sorted(deps), processors) if programs else 0.0)
    return makespans


def capacity_config(total_weight: float, capacity: float) -> tuple[int, float]:
    """``(k, eps)`` whose balance bound ``(1+eps) * ceil(total/k)`` equals ``capacity``."""
    if capacity <= 0:
        raise ValueError("capacity must be positive")
    k = max(1, math.ceil(total_weight / capacity))
    avg = math.ceil(total_weight / k)
    return k, max(0.0, capacity / avg - 1) if avg else 0.0


@dataclass(frozen=True)
class TwoPassResult:
    programs: Partition  # program pass over the kernel graph
    gangs: Partition  # gang pass over the program quotient graph
    plan: GangPlan
    makespans: tuple[float, ...]


def two_pass_schedule(
    g: DirectedGraph,
    program_memory: float,
    processors: int,
    seed: int = 0,
    repetitions: int = 4,
) -> TwoPassResult:
    """Program pass with ``L_max`` = program memory, then a gang pass over the
    program quotient with unit program weights and ``L_max`` = processors.

    Returns the SAS makespan estimate per gang; DMA transfers are not modeled.
    """
    from .multilevel import PipelineConfig, multilevel_partition

    k1, eps1 = capacity_config(g.total_node_weight, program_memory)
    programs = multilevel_partition(g, PipelineConfig(k1, eps1, seed, repetitions))
    quotient = build_quotient(g, programs)
    unit = DirectedGraph(
        [1 if load > 0 else 0 for load in quotient.node_weight], quotient.exec_time, quotient.edge_src, quotient.edge_dst, quotient.edge_weight
    )
    k2, eps2 = capacity_config(unit.total_node_weight, processors)
    gangs_q = multilevel_partition(unit, PipelineConfig(k2, eps2, seed, repetitions))
    node_gangs = Partition(g, [gangs_q.block_of[b] for b in programs.block_of], k2, eps2)
    plan = gang_plan(g, node_gangs, programs.block_of)
    makespans = tuple(schedule_gangs(g, node_gangs, processors, programs.block_of))
    return TwoPassResult(programs, gangs_q, plan, makespans)
