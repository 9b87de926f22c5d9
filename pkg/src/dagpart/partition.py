"""Partition state, balance/acyclicity checks and partition distance."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import MismatchedGraph
from .graph import DirectedGraph, build_quotient, is_acyclic


def max_block_load(total_weight: float, k: int, epsilon: float) -> float:
    """Balance bound ``(1 + eps) * ceil(total / k)``."""
    return (1 + epsilon) * math.ceil(total_weight / k)


class Partition:
    """Assignment of every node of ``graph`` to one of ``k`` blocks.

    Block loads and the cut value are cached and kept current by :meth:`move`.
    Empty blocks are allowed.
    """

    __slots__ = ("graph", "k", "epsilon", "block_of", "block_load", "cut_value", "_l_max")

    def __init__(self, graph: DirectedGraph, block_of: Sequence[int], k: int, epsilon: float = 0.03):
        if len(block_of) != graph.n:
            raise ValueError(f"block assignment has {len(block_of)} entries, graph has {graph.n} nodes")
        if k < 1:
            raise ValueError("k must be >= 1")
        self.graph = graph
        self.k = k
        self.epsilon = epsilon
        self.block_of = list(block_of)
        for b in self.block_of:
            if not 0 <= b < k:
                raise ValueError(f"block id {b} outside [0, {k - 1}]")
        self._l_max = max_block_load(graph.total_node_weight, k, epsilon)
        self.recompute()

    def recompute(self) -> None:
        """Rebuild cached loads and cut from scratch."""
        g = self.graph
        loads = [0] * self.k
        for v, b in enumerate(self.block_of):
            loads[b] += g.node_weight[v]
        self.block_load = loads
        self.cut_value = edge_cut(g, self)

    @property
    def l_max(self) -> float:
        return self._l_max

    def copy(self) -> "Partition":
        p = Partition.__new__(Partition)
        p.graph = self.graph
        p.k = self.k
        p.epsilon = self.epsilon
        p.block_of = list(self.block_of)
        p.block_load = list(self.block_load)
        p.cut_value = self.cut_value
        p._l_max = self._l_max
        return p

    def move(self, v: int, target: int) -> float:
        """Move ``v`` into block ``target``; returns the cut decrease."""
        block_of = self.block_of
        source = block_of[v]
        if source == target:
            return 0
        gain = 0
        for u, w, _ in self.graph.succ[v]:
            bu = block_of[u]
            if bu == target:
                gain += w
            elif bu == source:
                gain -= w
        for u, w, _ in self.graph.pred[v]:
            bu = block_of[u]
            if bu == target:
                gain += w
            elif bu == source:
                gain -= w
        c = self.graph.node_weight[v]
        self.block_load[source] -= c
        self.block_load[target] += c
        block_of[v] = target
        self.cut_value -= gain
        return gain

    def cut_edge_set(self) -> frozenset[int]:
        g = self.graph
        b = self.block_of
        return frozenset(
            eid for eid, (u, v) in enumerate(zip(g.edge_src, g.edge_dst)) if b[u] != b[v]
        )

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for v, b in enumerate(self.block_of):
            out[b].append(v)
        return out

    def is_feasible(self) -> bool:
        return check_feasibility(self.graph, self).feasible

    def __repr__(self) -> str:
        return f"Partition(k={self.k}, cut={self.cut_value}, loads={self.block_load})"


@dataclass
class FeasibilityReport:
    l_max: float
    overloaded_blocks: list[int] = field(default_factory=list)
    quotient_acyclic: bool = True

    @property
    def feasible(self) -> bool:
        return not self.overloaded_blocks and self.quotient_acyclic


def edge_cut(g: DirectedGraph, p: Partition) -> float:
    b = p.block_of
    return sum(w for u, v, w in zip(g.edge_src, g.edge_dst, g.edge_weight) if b[u] != b[v])


def check_feasibility(g: DirectedGraph, p: Partition) -> FeasibilityReport:
    l_max = max_block_load(g.total_node_weight, p.k, p.epsilon)
    loads = [0] * p.k
    for v, b in enumerate(p.block_of):
        loads[b] += g.node_weight[v]
    over = [i for i, load in enumerate(loads) if load > l_max]
    return FeasibilityReport(l_max, over, is_acyclic(build_quotient(g, p)))


def partition_distance(p1: Partition, p2: Partition) -> int:
    """Size of the symmetric difference of the two cut-edge sets."""
    if not p1.graph.same_edges(p2.graph):
        raise MismatchedGraph("partitions are over different edge sets")
    return len(p1.cut_edge_set() ^ p2.cut_edge_set())
