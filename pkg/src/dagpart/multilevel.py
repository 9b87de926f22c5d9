"""Single-level and multi-level acyclic partitioning.

The multi-level scheme is inverted with respect to classic partitioners: a
feasible partition of the finest graph is computed first, then the graph is
coarsened with that partition's cut edges barred from contraction.  The
partition is therefore valid on every level, and local search runs on the
way back up.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Collection

from .coarsen import coarsen_to_bottom, project_partition, restrict_partition
from .errors import InfeasibleSplit
from .graph import DirectedGraph, random_topological_order
from .partition import Partition, max_block_load
from .refine import HEURISTICS, local_search

LOCAL_SEARCH_CHOICES = HEURISTICS + ("random",)


@dataclass(frozen=True)
class PipelineConfig:
    k: int
    epsilon: float = 0.03
    seed: int = 0
    repetitions: int = 4
    local_search: str = "random"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.local_search not in LOCAL_SEARCH_CHOICES:
            raise ValueError(f"local_search must be one of {LOCAL_SEARCH_CHOICES}")


def pick_heuristic(choice: str, rng: random.Random) -> str:
    return rng.choice(HEURISTICS) if choice == "random" else choice


def _split(weights: list[float], k: int, cap: float) -> list[int] | None:
    """Cut the weight sequence into at most ``k`` runs of load <= ``cap``."""
    blocks = []
    b = 0
    load = 0
    for c in weights:
        if load + c > cap and load > 0:
            b += 1
            load = 0
            if b >= k:
                return None
        blocks.append(b)
        load += c
    return blocks


def initial_partition(g: DirectedGraph, k: int, epsilon: float, rng: random.Random) -> Partition:
    """Consecutive blocks of a random topological order.

    Blocks are filled up to the average load ``ceil(c(V)/k)``.  When that
    needs more than ``k`` blocks (possible with uneven node weights), blocks
    are filled up to ``L_max`` instead, which uses the fewest blocks.
    """
    topo = random_topological_order(g, rng)
    order = topo.order
    weights = [g.node_weight[v] for v in order]
    l_max = max_block_load(g.total_node_weight, k, epsilon)
    heaviest = max(weights, default=0)
    if heaviest > l_max:
        raise InfeasibleSplit(f"node weight {heaviest} exceeds L_max={l_max}")
    target = math.ceil(g.total_node_weight / k)
    blocks = _split(weights, k, max(target, heaviest))
    if blocks is None:
        blocks = _split(weights, k, l_max)
    if blocks is None:
        raise InfeasibleSplit(f"no consecutive {k}-way split within L_max={l_max}")
    block_of = [0] * g.n
    for v, b in zip(order, blocks):
        block_of[v] = b
    return Partition(g, block_of, k, epsilon)


def _single_level(
    g: DirectedGraph, k: int, epsilon: float, repetitions: int, choice: str, rng: random.Random
) -> Partition:
    best: Partition | None = None
    failure: InfeasibleSplit | None = None
    for _ in range(repetitions):
        try:
            p = initial_partition(g, k, epsilon, rng)
        except InfeasibleSplit as exc:
            failure = exc
            continue
        p = local_search(pick_heuristic(choice, rng), g, p, rng)
        if best is None or p.cut_value < best.cut_value:
            best = p
    if best is None:
        assert failure is not None
        raise failure
    return best


def single_level_partition(g: DirectedGraph, cfg: PipelineConfig, rng: random.Random | None = None) -> Partition:
    """Best of ``cfg.repetitions`` runs of initial partitioning plus local search."""
    rng = random.Random(cfg.seed) if rng is None else rng
    return _single_level(g, cfg.k, cfg.epsilon, cfg.repetitions, cfg.local_search, rng)


def vcycle(
    g: DirectedGraph,
    start: Partition,
    blocked: Collection[int],
    heuristic: str,
    rng: random.Random,
) -> Partition:
    """Coarsen with ``blocked`` edges kept, install ``start`` at the coarsest
    level and refine on every level back to ``g``.

    ``start``'s cut edges must be a subset of ``blocked``.
    """
    levels = coarsen_to_bottom(g, blocked, rng)
    coarse = levels[-1].coarse_graph if levels else g
    p = restrict_partition(levels, start)
    p = local_search(heuristic, coarse, p, rng)
    for level in reversed(levels):
        p = project_partition(level, p)
        p = local_search(heuristic, level.fine_graph, p, rng)
    return p


def _multilevel(
    g: DirectedGraph,
    k: int,
    epsilon: float,
    repetitions: int,
    choice: str,
    rng: random.Random,
    seed_partition: Partition | None = None,
) -> Partition:
    if seed_partition is None:
        start = _single_level(g, k, epsilon, repetitions, choice, rng)
    else:
        start = seed_partition
    return vcycle(g, start, start.cut_edge_set(), pick_heuristic(choice, rng), rng)


def multilevel_partition(
    g: DirectedGraph,
    cfg: PipelineConfig,
    seed_partition: Partition | None = None,
    rng: random.Random | None = None,
) -> Partition:
    """Single-level start (or ``seed_partition``) improved by one V-cycle.

    With the same ``cfg.seed`` the starting partition equals
    :func:`single_level_partition`'s result, so the output is never worse.
    """
    rng = random.Random(cfg.seed) if rng is None else rng
    return _multilevel(g, cfg.k, cfg.epsilon, cfg.repetitions, cfg.local_search, rng, seed_partition)
