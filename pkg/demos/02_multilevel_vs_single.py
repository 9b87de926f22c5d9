"""
Single-level against multi-level on layered DAGs
================================================

Same seed for both drivers. The multi-level run starts from the
single-level result and refines it on every level of a hierarchy whose
contractions never merge across a cut edge.
"""

import math
import random
import time

from dagpart import PipelineConfig, layered_random_dag, multilevel_partition, single_level_partition

rows = []
for i in range(8):
    g = layered_random_dag(800, 40, 0.12, random.Random(i), max_edge_weight=5)
    cfg = PipelineConfig(k=4, seed=i)
    t0 = time.perf_counter()
    sl = single_level_partition(g, cfg).cut_value
    t1 = time.perf_counter()
    ml = multilevel_partition(g, cfg).cut_value
    t2 = time.perf_counter()
    rows.append((sl, ml))
    print(f"instance {i}: m={g.m:5d}  single {sl:6g} ({t1 - t0:.2f}s)  multi {ml:6g} ({t2 - t1:.2f}s)")

geo = lambda xs: math.exp(sum(map(math.log, xs)) / len(xs))
sl_gm, ml_gm = geo([r[0] for r in rows]), geo([r[1] for r in rows])
print(f"geometric means: single {sl_gm:.1f}, multi {ml_gm:.1f} ({100 * (1 - ml_gm / sl_gm):.1f}% better)")
