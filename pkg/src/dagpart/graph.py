"""Weighted directed graphs, Kahn-style ordering and quotient construction.

Node ids are ``0..n-1``.  Every edge carries a stable integer id (its index in
``edge_src``/``edge_dst``/``edge_weight``), which partitions use to name cut
edges.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CycleError

log = logging.getLogger(__name__)

Adjacency = tuple[tuple[tuple[int, float, int], ...], ...]


class DirectedGraph:
    """Immutable weighted digraph ``G = (V, E, c, w)``.

    ``succ[v]`` and ``pred[v]`` hold ``(neighbor, edge_weight, edge_id)``
    triples.  Use :meth:`from_edges` to build one; parallel edges are merged
    by adding their weights.
    """

    __slots__ = (
        "n",
        "m",
        "node_weight",
        "exec_time",
        "edge_src",
        "edge_dst",
        "edge_weight",
        "succ",
        "pred",
        "_total_node_weight",
    )

    def __init__(
        self,
        node_weight: Sequence[float],
        exec_time: Sequence[float],
        edge_src: Sequence[int],
        edge_dst: Sequence[int],
        edge_weight: Sequence[float],
    ):
        # Trusted constructor: edges must already be merged and loop-free.
        n = len(node_weight)
        self.n = n
        self.m = len(edge_src)
        self.node_weight = tuple(node_weight)
        self.exec_time = tuple(exec_time)
        self.edge_src = tuple(edge_src)
        self.edge_dst = tuple(edge_dst)
        self.edge_weight = tuple(edge_weight)
        succ: list[list[tuple[int, float, int]]] = [[] for _ in range(n)]
        pred: list[list[tuple[int, float, int]]] = [[] for _ in range(n)]
        for eid, (u, v, w) in enumerate(zip(self.edge_src, self.edge_dst, self.edge_weight)):
            succ[u].append((v, w, eid))
            pred[v].append((u, w, eid))
        self.succ: Adjacency = tuple(tuple(s) for s in succ)
        self.pred: Adjacency = tuple(tuple(p) for p in pred)
        self._total_node_weight = sum(self.node_weight)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int, float]],
        node_weight: Sequence[float] | None = None,
        exec_time: Sequence[float] | None = None,
    ) -> "DirectedGraph":
        """Build a graph from ``(u, v, w)`` triples over nodes ``0..n-1``.

        Edge ids follow first appearance.  Duplicated ``(u, v)`` pairs are
        merged with weight addition and reported with a warning.
        """
        if node_weight is None:
            node_weight = [1] * n
        if exec_time is None:
            exec_time = [0] * n
        if len(node_weight) != n or len(exec_time) != n:
            raise ValueError("node annotations must have length n")
        for c in node_weight:
            if c < 0:
                raise ValueError(f"negative node weight {c}")
        index: dict[tuple[int, int], int] = {}
        src: list[int] = []
        dst: list[int] = []
        wts: list[float] = []
        merged = 0
        for u, v, w in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not w > 0:
                raise ValueError(f"edge ({u}, {v}) has non-positive weight {w}")
            eid = index.get((u, v))
            if eid is None:
                index[(u, v)] = len(src)
                src.append(u)
                dst.append(v)
                wts.append(w)
            else:
                wts[eid] += w
                merged += 1
        if merged:
            log.warning("merged %d parallel edge(s) by weight addition", merged)
        return cls(node_weight, exec_time, src, dst, wts)

    @property
    def total_node_weight(self) -> float:
        return self._total_node_weight

    @property
    def total_edge_weight(self) -> float:
        return sum(self.edge_weight)

    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.edge_src, self.edge_dst, self.edge_weight))

    def out_degree(self, v: int) -> int:
        return len(self.succ[v])

    def in_degree(self, v: int) -> int:
        return len(self.pred[v])

    def edge_id(self, u: int, v: int) -> int:
        for x, _, eid in self.succ[u]:
            if x == v:
                return eid
        raise KeyError((u, v))

    def same_edges(self, other: "DirectedGraph") -> bool:
        """True when both graphs share the same edge universe (ids and endpoints)."""
        return (
            self is other
            or (self.n == other.n and self.edge_src == other.edge_src and self.edge_dst == other.edge_dst)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (
            self.node_weight == other.node_weight
            and self.exec_time == other.exec_time
            and self.edge_src == other.edge_src
            and self.edge_dst == other.edge_dst
            and self.edge_weight == other.edge_weight
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class TopologicalOrder:
    order: tuple[int, ...]
    position: tuple[int, ...]

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "TopologicalOrder":
        position = [0] * len(order)
        for i, v in enumerate(order):
            position[v] = i
        return cls(tuple(order), tuple(position))

    def is_valid_for(self, g: DirectedGraph) -> bool:
        if sorted(self.order) != list(range(g.n)):
            return False
        pos = self.position
        return all(pos[u] < pos[v] for u, v in zip(g.edge_src, g.edge_dst))


def _kahn(g: DirectedGraph, rng: random.Random | None) -> list[int]:
    indeg = [len(p) for p in g.pred]
    ready = [v for v in range(g.n) if indeg[v] == 0]
    out: list[int] = []
    succ = g.succ
    while ready:
        if rng is None:
            v = ready.pop()
        else:
            i = rng.randrange(len(ready))
            ready[i], ready[-1] = ready[-1], ready[i]
            v = ready.pop()
        out.append(v)
        for x, _, _ in succ[v]:
            indeg[x] -= 1
            if indeg[x] == 0:
                ready.append(x)
    return out


def is_acyclic(g: DirectedGraph) -> bool:
    """Kahn peeling: acyclic iff every node is eventually removed."""
    return len(_kahn(g, None)) == g.n


def topological_order(g: DirectedGraph) -> TopologicalOrder:
    order = _kahn(g, None)
    if len(order) != g.n:
        raise CycleError(f"graph has a cycle through {g.n - len(order)} node(s)")
    return TopologicalOrder.from_order(order)


def random_topological_order(g: DirectedGraph, rng: random.Random) -> TopologicalOrder:
    """Kahn's algorithm removing a uniformly random indegree-zero node each step."""
    order = _kahn(g, rng)
    if len(order) != g.n:
        raise CycleError(f"graph has a cycle through {g.n - len(order)} node(s)")
    return TopologicalOrder.from_order(order)


def build_quotient(g: DirectedGraph, p) -> DirectedGraph:
    """Weighted quotient graph: one node per block, inter-block weights summed.

    ``p`` is anything exposing ``block_of`` and ``k``.
    """
    k = p.k
    block_of = p.block_of
    loads = [0] * k
    times = [0] * k
    for v in range(g.n):
        b = block_of[v]
        loads[b] += g.node_weight[v]
        times[b] += g.exec_time[v]
    index: dict[tuple[int, int], int] = {}
    src: list[int] = []
    dst: list[int] = []
    wts: list[float] = []
    for u, v, w in zip(g.edge_src, g.edge_dst, g.edge_weight):
        a, b = block_of[u], block_of[v]
        if a == b:
            continue
        eid = index.get((a, b))
        if eid is None:
            index[(a, b)] = len(src)
            src.append(a)
            dst.append(b)
            wts.append(w)
        else:
            wts[eid] += w
    return DirectedGraph(loads, times, src, dst, wts)
