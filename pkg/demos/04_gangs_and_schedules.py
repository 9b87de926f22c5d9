"""
From partitions to gang schedules
=================================

Nodes carry execution times. A gang runs one program per processor, so its
duration is set by its slowest program; summing over gangs gives the
critical-path estimate that the fitness function can weigh against the cut.
"""

import random

from dagpart import DirectedGraph, EvoConfig, evolve_run, layered_random_dag, two_pass_schedule
from dagpart.sched import critical_path_estimate, sas_list_schedule

rng = random.Random(3)
base = layered_random_dag(200, 12, 0.15, rng, max_edge_weight=3)
# a few heavy kernels among many light ones; gangs holding several heavy ones are cheaper
times = [40.0 if rng.random() < 0.06 else 1.0 for _ in range(base.n)]
g = DirectedGraph(base.node_weight, times, base.edge_src, base.edge_dst, base.edge_weight)

# pure cut vs cut + critical path
for beta in (0.0, 5.0):
    res = evolve_run(g, EvoConfig(k=6, alpha=1.0, beta=beta, generations=40, time_budget=None, population_size=4, seed=0))
    p = res.best.partition
    print(f"beta={beta}: cut {p.cut_value:g}, critical path {critical_path_estimate(g, p):.2f}")

# the list scheduler on its own: a chain a->b next to an independent c, two processors
print("toy makespan:", sas_list_schedule([2, 2, 3], [(0, 1)], processors=2))

# program pass under a memory bound, then gangs of at most 4 programs
plan = two_pass_schedule(g, program_memory=12, processors=4, seed=0, repetitions=2)
print("programs:", plan.programs.k, "gangs:", len(plan.plan.gangs))
print("per-gang makespans:", [round(x, 2) for x in plan.makespans])
print("total:", round(sum(plan.makespans), 2))
