"""
Acyclic partitioning on a four-node diamond
===========================================

A tiny graph is enough to see both constraints at work.
"""

from dagpart import DirectedGraph, Partition, build_quotient, check_feasibility, is_acyclic
from dagpart import PipelineConfig, multilevel_partition, single_level_partition

# nodes 0..3, edge weights on the arcs
g = DirectedGraph.from_edges(4, [(0, 1, 1), (0, 2, 2), (1, 3, 1), (2, 3, 3)])

# two balanced 2-way splits; ceil(4/2) * 1.03 = 2.06, so two nodes per block
good = Partition(g, [0, 0, 1, 1], k=2)
bad = Partition(g, [0, 1, 1, 0], k=2)

print("good cut:", good.cut_value, check_feasibility(g, good))
print("bad cut: ", bad.cut_value, check_feasibility(g, bad))

# the second split is balanced too, but its blocks feed each other
q = build_quotient(g, bad)
print("quotient edges of the bad split:", q.edges(), "acyclic:", is_acyclic(q))

# both drivers find the optimum (cut 3) here
cfg = PipelineConfig(k=2, seed=1, repetitions=8)
print("single-level:", single_level_partition(g, cfg))
print("multi-level: ", multilevel_partition(g, cfg))
