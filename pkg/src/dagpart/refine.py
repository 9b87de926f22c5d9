"""Acyclicity-preserving local search.

Three heuristics improve a feasible partition without breaking balance or
quotient acyclicity:

* :func:`refine_h1` keeps a topological order of the blocks fixed and only
  moves nodes inside their *movable interval*, which keeps every inter-block
  edge a forward edge (a sufficient condition).
* :func:`refine_h2` additionally accepts moves outside the interval when an
  exact Kahn check on the updated quotient graph finds no cycle.
* :func:`refine_h3_fm` runs pairwise Fiduccia-Mattheyses passes with the
  interval condition, rolling back to the best prefix of each pass.

All three return a new :class:`~dagpart.partition.Partition` whose cut is not
larger than the input cut. ``on_move(partition, node, source, target)`` is
called after every applied move (FM tentative moves and rollbacks included).
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import CycleError
from .graph import DirectedGraph, TopologicalOrder, build_quotient, random_topological_order, topological_order
from .partition import Partition

MoveHook = Optional[Callable[[Partition, int, int, int], None]]

HEURISTICS = ("h1", "h2", "h3")


@dataclass(frozen=True)
class MoveCandidate:
    node: int
    from_block: int
    to_block: int
    gain: float


@dataclass(frozen=True)
class BlockOrder:
    """Block permutation in which every quotient edge points forward."""

    order: tuple[int, ...]
    position: tuple[int, ...]


def block_order(p: Partition, rng: random.Random | None = None) -> BlockOrder:
    q = build_quotient(p.graph, p)
    try:
        topo: TopologicalOrder = random_topological_order(q, rng) if rng is not None else topological_order(q)
    except CycleError as exc:
        raise CycleError("quotient graph is cyclic; no block order exists") from exc
    return BlockOrder(topo.order, topo.position)


def _tolerance(g: DirectedGraph) -> float:
    # absorbs float noise in gain sums for non-integral edge weights
    return 1e-12 * max(1.0, g.total_edge_weight)


def movable_interval(p: Partition, order: BlockOrder, v: int) -> tuple[int, int]:
    """Block-order positions ``[A, B]`` that ``v`` may move to.

    ``A`` is the largest position among predecessor blocks and ``B`` the
    smallest among successor blocks, clamped to ``v``'s own position when a
    neighbor shares its block.
    """
    pos = order.position
    b = p.block_of
    g = p.graph
    own = pos[b[v]]
    lo = 0
    for u, _, _ in g.pred[v]:
        x = pos[b[u]]
        if x > lo:
            lo = x
    hi = p.k - 1
    for u, _, _ in g.succ[v]:
        x = pos[b[u]]
        if x < hi:
            hi = x
    assert lo <= own <= hi, "block order has a back edge"
    return lo, hi


def _connections(g: DirectedGraph, block_of: list[int], v: int) -> dict[int, float]:
    conn: dict[int, float] = {}
    for u, w, _ in g.succ[v]:
        b = block_of[u]
        conn[b] = conn.get(b, 0) + w
    for u, w, _ in g.pred[v]:
        b = block_of[u]
        conn[b] = conn.get(b, 0) + w
    return conn


def move_candidates(p: Partition, order: BlockOrder, v: int) -> list[MoveCandidate]:
    """Interval moves of ``v`` that respect the balance bound (any gain)."""
    g = p.graph
    lo, hi = movable_interval(p, order, v)
    own = p.block_of[v]
    conn = _connections(g, p.block_of, v)
    stay = conn.get(own, 0)
    c = g.node_weight[v]
    out = []
    for pos in range(lo, hi + 1):
        t = order.order[pos]
        if t != own and p.block_load[t] + c <= p.l_max:
            out.append(MoveCandidate(v, own, t, conn.get(t, 0) - stay))
    return out


def _neighbors(g: DirectedGraph, v: int):
    for u, _, _ in g.succ[v]:
        yield u
    for u, _, _ in g.pred[v]:
        yield u


def _greedy(
    p: Partition, rng: random.Random, admit, on_move: MoveHook, after_move=None, local_admit: bool = True
) -> Partition:
    """Apply best admissible positive-gain moves until none is left.

    ``admit(v, target)`` decides acyclicity; balance is checked here.  Entries
    blocked by balance (or by a non-local ``admit``) are parked and re-queued
    after the next move, since another move may unblock them.
    """
    g = p.graph
    tol = _tolerance(g)
    block_of = p.block_of
    c = g.node_weight
    version = [0] * g.n
    heap: list = []

    def push(v: int) -> None:
        conn = _connections(g, block_of, v)
        own = block_of[v]
        stay = conn.get(own, 0)
        ver = version[v]
        for t, w in conn.items():
            gain = w - stay
            if t != own and gain > tol:
                heapq.heappush(heap, (-gain, rng.random(), v, t, ver))

    for v in range(g.n):
        push(v)
    parked: list = []
    while heap:
        entry = heapq.heappop(heap)
        _, _, v, t, ver = entry
        if ver != version[v]:
            continue
        if p.block_load[t] + c[v] > p.l_max:
            parked.append(entry)
            continue
        if not admit(v, t):
            # a local test only changes when a neighbor moves, which re-pushes v
            if not local_admit:
                parked.append(entry)
            continue
        source = block_of[v]
        p.move(v, t)
        if after_move is not None:
            after_move(v, source, t)
        if on_move is not None:
            on_move(p, v, source, t)
        version[v] += 1
        touched = {v}
        touched.update(_neighbors(g, v))
        for u in touched:
            if u != v:
                version[u] += 1
            push(u)
        for e in parked:
            if e[4] == version[e[2]]:
                heapq.heappush(heap, e)
        parked.clear()
    p.recompute()
    return p


def refine_h1(g: DirectedGraph, p: Partition, rng: random.Random, on_move: MoveHook = None) -> Partition:
    """Greedy highest-gain moves restricted to movable intervals."""
    q = p.copy()
    if q.k < 2 or g.m == 0:
        return q
    order = block_order(q, rng)
    pos = order.position

    def admit(v: int, t: int) -> bool:
        lo, hi = movable_interval(q, order, v)
        return lo <= pos[t] <= hi

    return _greedy(q, rng, admit, on_move)


class _QuotientCounts:
    """Edge multiplicities between blocks, for exact cycle checks."""

    def __init__(self, p: Partition):
        k = p.k
        self.k = k
        self.count = [[0] * k for _ in range(k)]
        g = p.graph
        b = p.block_of
        for u, v in zip(g.edge_src, g.edge_dst):
            if b[u] != b[v]:
                self.count[b[u]][b[v]] += 1

    def delta(self, p: Partition, v: int, t: int) -> dict[tuple[int, int], int]:
        g = p.graph
        b = p.block_of
        s = b[v]
        d: dict[tuple[int, int], int] = {}
        for u, _, _ in g.succ[v]:
            bu = b[u]
            if bu != s:
                d[(s, bu)] = d.get((s, bu), 0) - 1
            if bu != t:
                d[(t, bu)] = d.get((t, bu), 0) + 1
        for u, _, _ in g.pred[v]:
            bu = b[u]
            if bu != s:
                d[(bu, s)] = d.get((bu, s), 0) - 1
            if bu != t:
                d[(bu, t)] = d.get((bu, t), 0) + 1
        return d

    def stays_acyclic(self, d: dict[tuple[int, int], int]) -> bool:
        count = self.count
        if all(count[a][b] > 0 or x <= 0 for (a, b), x in d.items()):
            # no new quotient edge: the edge set only shrinks
            return True
        k = self.k
        adj = [[b for b in range(k) if count[a][b] + d.get((a, b), 0) > 0] for a in range(k)]
        indeg = [0] * k
        for a in range(k):
            for b in adj[a]:
                indeg[b] += 1
        ready = [a for a in range(k) if indeg[a] == 0]
        seen = 0
        while ready:
            a = ready.pop()
            seen += 1
            for b in adj[a]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
        return seen == k

    def apply(self, d: dict[tuple[int, int], int]) -> None:
        for (a, b), x in d.items():
            self.count[a][b] += x


def refine_h2(g: DirectedGraph, p: Partition, rng: random.Random, on_move: MoveHook = None) -> Partition:
    """Greedy moves admitted by the interval test or, failing that, by Kahn."""
    q = p.copy()
    if q.k < 2 or g.m == 0:
        return q
    quotient = _QuotientCounts(q)
    order = block_order(q, rng)
    pending: list = [None, False]  # quotient delta of the admitted move, reorder flag

    def admit(v: int, t: int) -> bool:
        lo, hi = movable_interval(q, order, v)
        d = quotient.delta(q, v, t)
        if lo <= order.position[t] <= hi:
            pending[:] = [d, False]
            return True
        if quotient.stays_acyclic(d):
            pending[:] = [d, True]
            return True
        return False

    def after_move(v: int, s: int, t: int) -> None:
        nonlocal order
        quotient.apply(pending[0])
        if pending[1]:
            order = block_order(q, rng)

    return _greedy(q, rng, admit, on_move, after_move, local_admit=False)


def _fm_pass(
    q: Partition,
    lo: int,
    hi: int,
    pos: tuple[int, ...],
    members: list[set[int]],
    rng: random.Random,
    on_move: MoveHook,
    tol: float,
) -> bool:
    """One FM pass between blocks ``lo`` and ``hi`` (``pos[lo] < pos[hi]``).

    Returns True iff a nonempty move prefix with strictly smaller cut was kept.
    """
    g = q.graph
    block_of = q.block_of
    c = g.node_weight
    pos_lo, pos_hi = pos[lo], pos[hi]
    limit = 2 * g.n / q.k

    def target_of(v: int) -> int:
        # -1 when v is locked in its block by the interval condition
        b = block_of[v]
        if b == lo:
            for u, _, _ in g.succ[v]:
                if pos[block_of[u]] < pos_hi:
                    return -1
            return hi
        if b == hi:
            for u, _, _ in g.pred[v]:
                if pos[block_of[u]] > pos_lo:
                    return -1
            return lo
        return -1

    def gain_of(v: int, t: int) -> tuple[float, bool]:
        s = block_of[v]
        gain = 0
        touches = False
        for u, w, _ in g.succ[v]:
            bu = block_of[u]
            if bu == t:
                gain += w
                touches = True
            elif bu == s:
                gain -= w
        for u, w, _ in g.pred[v]:
            bu = block_of[u]
            if bu == t:
                gain += w
                touches = True
            elif bu == s:
                gain -= w
        return gain, touches

    heap: list = []
    version: dict[int, int] = {}

    def push(v: int, need_boundary: bool) -> None:
        t = target_of(v)
        if t < 0:
            return
        gain, touches = gain_of(v, t)
        if need_boundary and not touches:
            return
        heapq.heappush(heap, (-gain, rng.random(), v, version.get(v, 0)))

    for b in (lo, hi):
        for v in members[b]:
            push(v, True)

    moved: set[int] = set()
    moves: list[tuple[int, int, int]] = []
    cut = best = q.cut_value
    best_len = 0
    since_best = 0
    while heap:
        neg_gain, _, v, ver = heapq.heappop(heap)
        if v in moved or ver != version.get(v, 0):
            continue
        t = target_of(v)
        if t < 0 or q.block_load[t] + c[v] > q.l_max:
            continue
        s = block_of[v]
        q.move(v, t)
        members[s].discard(v)
        members[t].add(v)
        if on_move is not None:
            on_move(q, v, s, t)
        moved.add(v)
        moves.append((v, s, t))
        cut += neg_gain
        if cut < best - tol:
            best = cut
            best_len = len(moves)
            since_best = 0
        else:
            since_best += 1
            if since_best >= limit:
                break
        for u in _neighbors(g, v):
            if u in moved:
                continue
            bu = block_of[u]
            if bu != lo and bu != hi:
                continue
            version[u] = version.get(u, 0) + 1
            push(u, False)

    for v, s, t in reversed(moves[best_len:]):
        q.move(v, s)
        members[t].discard(v)
        members[s].add(v)
        if on_move is not None:
            on_move(q, v, t, s)
    return best_len > 0


def refine_h3_fm(g: DirectedGraph, p: Partition, rng: random.Random, on_move: MoveHook = None) -> Partition:
    """Pairwise Fiduccia-Mattheyses refinement with rollback to the best prefix.

    Passes run on quotient-adjacent block pairs in random order; a pair is
    eligible while one of its blocks is active, and a pass that keeps moves
    reactivates both blocks for the next round.
    """
    q = p.copy()
    k = q.k
    if k < 2 or g.m == 0:
        return q
    tol = _tolerance(g)
    members: list[set[int]] = [set() for _ in range(k)]
    for v, b in enumerate(q.block_of):
        members[b].add(v)
    active = set(range(k))
    while active:
        order = block_order(q, rng)
        pos = order.position
        quotient = build_quotient(g, q)
        pairs = sorted({(min(a, b), max(a, b)) for a, b in zip(quotient.edge_src, quotient.edge_dst)})
        rng.shuffle(pairs)
        next_active: set[int] = set()
        for a, b in pairs:
            if a not in active and b not in active:
                continue
            lo, hi = (a, b) if pos[a] < pos[b] else (b, a)
            if _fm_pass(q, lo, hi, pos, members, rng, on_move, tol):
                next_active.update((a, b))
        active = next_active
    q.recompute()
    return q


_BY_NAME = {"h1": refine_h1, "h2": refine_h2, "h3": refine_h3_fm}


def local_search(name: str, g: DirectedGraph, p: Partition, rng: random.Random, on_move: MoveHook = None) -> Partition:
    try:
        fn = _BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown local search {name!r}; expected one of {HEURISTICS}") from None
    return fn(g, p, rng, on_move)
