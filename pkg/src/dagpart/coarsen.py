"""Edge rating, GPA matching, contraction and partition projection.

Matching runs on the undirected view of the graph: antiparallel edges between
``u`` and ``v`` (which only exist on coarse levels) merge into one undirected
edge whose weight is the sum of both directions.  Coarse graphs may contain
directed cycles; partitions are carried through the hierarchy instead of being
computed on it, with cut edges barred from contraction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Collection

from .graph import DirectedGraph
from .partition import Partition

Pair = tuple[int, int]


def _rating_weight(c: float) -> float:
    return c if c > 0 else 1


def expansion_star2(w: float, cu: float, cv: float) -> float:
    return w * w / (_rating_weight(cu) * _rating_weight(cv))


def undirected_pairs(g: DirectedGraph, blocked: Collection[int] = ()) -> dict[Pair, list]:
    """Map ``(min, max)`` node pairs to ``[weight, first_edge_id, blocked]``."""
    pairs: dict[Pair, list] = {}
    for eid, (u, v, w) in enumerate(zip(g.edge_src, g.edge_dst, g.edge_weight)):
        key = (u, v) if u < v else (v, u)
        entry = pairs.get(key)
        is_blocked = eid in blocked
        if entry is None:
            pairs[key] = [w, eid, is_blocked]
        else:
            entry[0] += w
            entry[2] = entry[2] or is_blocked
    return pairs


def rate_edge(g: DirectedGraph, u: int, v: int) -> float:
    """expansion*2 rating of the undirected pair ``{u, v}``.

    Both edge directions contribute to the pair weight.  A zero node weight
    counts as one in the denominator.
    """
    w = 0
    for x, wx, _ in g.succ[u]:
        if x == v:
            w += wx
    for x, wx, _ in g.pred[u]:
        if x == v:
            w += wx
    if w == 0:
        raise KeyError(f"no edge between {u} and {v}")
    return expansion_star2(w, g.node_weight[u], g.node_weight[v])


def rated_pairs(g: DirectedGraph, blocked: Collection[int] = ()) -> dict[Pair, float]:
    """Ratings of every matchable (unblocked) undirected pair."""
    c = g.node_weight
    return {
        key: expansion_star2(w, c[key[0]], c[key[1]])
        for key, (w, _, is_blocked) in undirected_pairs(g, blocked).items()
        if not is_blocked
    }


@dataclass(frozen=True)
class Matching:
    pairs: tuple[Pair, ...]
    partner: tuple[int, ...]
    rating: float = 0.0

    def __len__(self) -> int:
        return len(self.pairs)

    def is_valid(self) -> bool:
        seen: set[int] = set()
        for u, v in self.pairs:
            if u == v or u in seen or v in seen:
                return False
            seen.update((u, v))
            if self.partner[u] != v or self.partner[v] != u:
                return False
        return sum(1 for p in self.partner if p >= 0) == 2 * len(self.pairs)


def _path_dp(weights: list[float]) -> list[bool]:
    """Maximum-weight matching on a path given its edge weights in order."""
    L = len(weights)
    best = [0.0] * (L + 1)
    for i in range(1, L + 1):
        take = weights[i - 1] + (best[i - 2] if i >= 2 else 0.0)
        best[i] = take if take > best[i - 1] else best[i - 1]
    chosen = [False] * L
    i = L
    while i >= 1:
        take = weights[i - 1] + (best[i - 2] if i >= 2 else 0.0)
        if take > best[i - 1]:
            chosen[i - 1] = True
            i -= 2
        else:
            i -= 1
    return chosen


def gpa_matching(
    g: DirectedGraph, blocked: Collection[int] = (), rng: random.Random | None = None
) -> Matching:
    """Global Path Algorithm matching on the undirected view of ``g``.

    Edges are scanned by decreasing rating.  An edge is kept when both
    endpoints are path ends and it either joins two paths or closes an even
    cycle.  Each resulting path and cycle is then matched optimally by
    dynamic programming.  Edges listed in ``blocked`` are never matched.
    Rating ties are broken by edge id, or by a random permutation when
    ``rng`` is given.
    """
    n = g.n
    c = g.node_weight
    scan = []
    for (u, v), (w, eid, is_blocked) in undirected_pairs(g, blocked).items():
        if is_blocked:
            continue
        scan.append((-expansion_star2(w, c[u], c[v]), eid, u, v))
    if rng is not None:
        tiebreak = list(range(len(scan)))
        rng.shuffle(tiebreak)
        scan = [(r, t, u, v) for (r, _, u, v), t in zip(scan, tiebreak)]
    scan.sort()

    deg = [0] * n
    other_end = list(range(n))
    length = [0] * n
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for neg_rating, _, u, v in scan:
        if deg[u] >= 2 or deg[v] >= 2:
            continue
        if other_end[u] == v:
            # u and v end the same path; closing it must give an even cycle
            if length[u] % 2 == 0:
                continue
        else:
            a, b = other_end[u], other_end[v]
            total = length[u] + length[v] + 1
            other_end[a] = b
            other_end[b] = a
            length[a] = length[b] = total
        rating = -neg_rating
        adj[u].append((v, rating))
        adj[v].append((u, rating))
        deg[u] += 1
        deg[v] += 1

    partner = [-1] * n
    pairs: list[Pair] = []
    total_rating = 0.0
    visited = [False] * n

    def walk(start: int, closed: bool) -> tuple[list[int], list[float]]:
        nodes = [start]
        weights: list[float] = []
        visited[start] = True
        prev, cur = -1, start
        while True:
            step = None
            for x, r in adj[cur]:
                if x != prev and not visited[x]:
                    step = (x, r)
                    break
            if step is None:
                if closed:
                    for x, r in adj[cur]:
                        if x == start and cur != start:
                            weights.append(r)
                            break
                return nodes, weights
            prev, cur = cur, step[0]
            visited[cur] = True
            nodes.append(cur)
            weights.append(step[1])

    def take(nodes: list[int], chosen: list[bool], weights: list[float]) -> None:
        nonlocal total_rating
        for i, flag in enumerate(chosen):
            if flag:
                a, b = nodes[i], nodes[(i + 1) % len(nodes)]
                partner[a] = b
                partner[b] = a
                pairs.append((a, b) if a < b else (b, a))
                total_rating += weights[i]

    for v in range(n):
        if deg[v] == 1 and not visited[v]:
            nodes, weights = walk(v, False)
            take(nodes, _path_dp(weights), weights)
    for v in range(n):
        if deg[v] == 2 and not visited[v]:
            nodes, weights = walk(v, True)
            # weights[i] joins nodes[i] and nodes[i+1]; the last one closes the cycle.
            # Any matching misses one of two adjacent edges, so drop each in turn.
            drop_last = _path_dp(weights[:-1]) + [False]
            drop_first = [False] + _path_dp(weights[1:])
            score_last = sum(w for w, f in zip(weights, drop_last) if f)
            score_first = sum(w for w, f in zip(weights, drop_first) if f)
            take(nodes, drop_last if score_last >= score_first else drop_first, weights)

    pairs.sort()
    return Matching(tuple(pairs), tuple(partner), total_rating)


@dataclass(frozen=True)
class HierarchyLevel:
    fine_graph: DirectedGraph
    coarse_graph: DirectedGraph
    fine_to_coarse: tuple[int, ...]
    matching: Matching
    blocked: frozenset[int] = frozenset()  # coarse edge ids that merge a blocked fine edge


def contract(g: DirectedGraph, m: Matching, blocked: Collection[int] = ()) -> HierarchyLevel:
    """Contract every matched pair into one node.

    Node weights and execution times add up, edges inside a pair vanish and
    parallel edges of equal direction merge by weight addition.  A coarse
    edge is blocked iff one of its fine edges is.
    """
    n = g.n
    fine_to_coarse = [-1] * n
    nxt = 0
    for v in range(n):
        if fine_to_coarse[v] < 0:
            fine_to_coarse[v] = nxt
            p = m.partner[v]
            if p >= 0:
                fine_to_coarse[p] = nxt
            nxt += 1
    weight = [0] * nxt
    times = [0] * nxt
    for v in range(n):
        x = fine_to_coarse[v]
        weight[x] += g.node_weight[v]
        times[x] += g.exec_time[v]
    index: dict[Pair, int] = {}
    src: list[int] = []
    dst: list[int] = []
    wts: list[float] = []
    coarse_blocked: set[int] = set()
    for eid, (u, v, w) in enumerate(zip(g.edge_src, g.edge_dst, g.edge_weight)):
        a, b = fine_to_coarse[u], fine_to_coarse[v]
        if a == b:
            continue
        ce = index.get((a, b))
        if ce is None:
            ce = index[(a, b)] = len(src)
            src.append(a)
            dst.append(b)
            wts.append(w)
        else:
            wts[ce] += w
        if eid in blocked:
            coarse_blocked.add(ce)
    coarse = DirectedGraph(weight, times, src, dst, wts)
    return HierarchyLevel(g, coarse, tuple(fine_to_coarse), m, frozenset(coarse_blocked))


def coarsen_to_bottom(
    g: DirectedGraph, blocked: Collection[int] = (), rng: random.Random | None = None
) -> list[HierarchyLevel]:
    """Match and contract until no matchable edge is left (finest level first)."""
    levels: list[HierarchyLevel] = []
    current, current_blocked = g, frozenset(blocked)
    while True:
        m = gpa_matching(current, current_blocked, rng)
        if not m.pairs:
            return levels
        level = contract(current, m, current_blocked)
        levels.append(level)
        current, current_blocked = level.coarse_graph, level.blocked


def project_partition(level: HierarchyLevel, coarse_p: Partition) -> Partition:
    """Fine nodes inherit the block of the coarse node they were merged into."""
    cb = coarse_p.block_of
    blocks = [cb[x] for x in level.fine_to_coarse]
    return Partition(level.fine_graph, blocks, coarse_p.k, coarse_p.epsilon)


def restrict_partition(levels: list[HierarchyLevel], p: Partition) -> Partition:
    """Carry a finest-level partition down to the coarsest graph.

    Requires that no coarse node mixes blocks, i.e. every cut edge of ``p``
    was blocked during coarsening.
    """
    if not levels:
        return p.copy()
    blocks = list(p.block_of)
    for level in levels:
        coarse = [-1] * level.coarse_graph.n
        for v, x in enumerate(level.fine_to_coarse):
            b = blocks[v]
            if coarse[x] < 0:
                coarse[x] = b
            elif coarse[x] != b:
                raise ValueError("partition cuts an edge that was contracted")
        blocks = coarse
    return Partition(levels[-1].coarse_graph, blocks, p.k, p.epsilon)
