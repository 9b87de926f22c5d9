"""Random layered DAGs, a stand-in for benchmark instances."""

from __future__ import annotations

import random

from .graph import DirectedGraph


def layered_random_dag(
    n: int,
    layers: int,
    density: float,
    rng: random.Random | int | None = None,
    max_edge_weight: int = 1,
    max_exec_time: float = 0.0,
    skip_probability: float = 0.1,
) -> DirectedGraph:
    """Nodes split into ``layers`` nonempty layers; edges point to later layers.

    Each pair of nodes in consecutive layers is joined with probability
    ``density``.  With probability ``skip_probability`` an edge jumps further
    ahead than the next layer.  Every node outside the first layer gets at
    least one predecessor in an earlier layer.  Edge weights are uniform
    integers in ``[1, max_edge_weight]``; node weights are 1.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    layers = max(1, min(layers, n))
    # layer sizes: every layer nonempty, rest spread at random
    cuts = sorted(rng.sample(range(1, n), layers - 1)) if layers > 1 else []
    bounds = [0] + cuts + [n]
    layer_nodes = [list(range(bounds[i], bounds[i + 1])) for i in range(layers)]
    edges: set[tuple[int, int]] = set()
    for i in range(1, layers):
        prev = layer_nodes[i - 1]
        for v in layer_nodes[i]:
            chosen = [u for u in prev if rng.random() < density]
            if not chosen:
                chosen = [rng.choice(prev)]
            for u in chosen:
                if rng.random() < skip_probability and i > 1:
                    u = rng.choice(layer_nodes[rng.randrange(0, i - 1)])
                edges.add((u, v))
    ordered = sorted(edges)
    weighted = [(u, v, rng.randint(1, max_edge_weight)) for u, v in ordered]
    exec_time = [round(rng.uniform(0, max_exec_time), 6) if max_exec_time > 0 else 0 for _ in range(n)]
    return DirectedGraph.from_edges(n, weighted, exec_time=exec_time)


def random_dag(n: int, edge_probability: float, rng: random.Random | int | None = None,
               max_edge_weight: int = 5, max_node_weight: int = 1) -> DirectedGraph:
    """Erdos-Renyi style DAG over a random node permutation."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    perm = list(range(n))
    rng.shuffle(perm)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_probability:
                edges.append((perm[i], perm[j], rng.randint(1, max_edge_weight)))
    weights = [rng.randint(1, max_node_weight) for _ in range(n)]
    return DirectedGraph.from_edges(n, edges, node_weight=weights)
