"""Memetic search over acyclic partitions.

Every operator is a V-cycle of the multi-level scheme: the cut edges of the
parents are barred from contraction, a parent (or a fresh partition) is
installed on the coarsest graph and local search runs on the way up.  Islands
keep separate populations and trade their best individuals by randomized
rumor spreading.
"""

from __future__ import annotations

import logging
import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import InfeasibleSplit, PopulationTooSmall
from .graph import DirectedGraph
from .multilevel import LOCAL_SEARCH_CHOICES, _multilevel, pick_heuristic, vcycle
from .partition import Partition, check_feasibility
from .sched import critical_path_estimate

log = logging.getLogger(__name__)

OPERATORS = ("recombine", "cross_recombine", "mutate_fresh", "mutate_self")
DEFAULT_RATES = {"recombine": 0.5, "cross_recombine": 0.1, "mutate_fresh": 0.2, "mutate_self": 0.2}


@dataclass
class EvoConfig:
    k: int
    epsilon: float = 0.03
    population_size: int = 10
    time_budget: float | None = 10.0
    generations: int | None = None
    islands: int = 1
    alpha: float = 1.0
    beta: float = 0.0
    seed: int = 0
    exchange_period: int = 10
    repetitions: int = 4
    local_search: str = "random"
    operator_rates: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_RATES))
    logical_clock: bool = False

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.islands < 1:
            raise ValueError("islands must be >= 1")
        if self.alpha < 0 or self.beta < 0 or (self.alpha == 0 and self.beta == 0):
            raise ValueError("alpha and beta must be >= 0 and not both zero")
        if self.time_budget is None and self.generations is None:
            raise ValueError("set a time budget, a generation count, or both")
        if self.local_search not in LOCAL_SEARCH_CHOICES:
            raise ValueError(f"local_search must be one of {LOCAL_SEARCH_CHOICES}")
        unknown = set(self.operator_rates) - set(OPERATORS)
        if unknown:
            raise ValueError(f"unknown operators {sorted(unknown)}")
        if sum(self.operator_rates.values()) <= 0:
            raise ValueError("operator rates must not all be zero")


@dataclass
class Individual:
    partition: Partition
    cut: float
    fitness: float
    creation_time: float = 0.0
    _cut_edges: frozenset[int] | None = field(default=None, repr=False, compare=False)

    @property
    def cut_edges(self) -> frozenset[int]:
        if self._cut_edges is None:
            self._cut_edges = self.partition.cut_edge_set()
        return self._cut_edges


@dataclass(frozen=True)
class ConvergenceEvent:
    t: float
    cut: float
    instance: str
    seed: int
    island: int


@dataclass
class EvoResult:
    best: Individual
    events: list[ConvergenceEvent]
    generations: int
    operator_counts: dict[str, int]


def fitness(g: DirectedGraph, p: Partition, alpha: float = 1.0, beta: float = 0.0) -> float:
    """``alpha * cut + beta * critical_path_estimate``."""
    value = alpha * p.cut_value if alpha else 0.0
    if beta:
        value += beta * critical_path_estimate(g, p)
    return value


def make_individual(g: DirectedGraph, p: Partition, cfg: EvoConfig, t: float = 0.0) -> Individual:
    return Individual(p, p.cut_value, fitness(g, p, cfg.alpha, cfg.beta), t)


def tournament_select(pop: Sequence[Individual], rng: random.Random) -> Individual:
    """Fitter of two distinct random individuals; ties go either way."""
    if len(pop) < 2:
        raise PopulationTooSmall(f"tournament needs two individuals, population has {len(pop)}")
    a, b = rng.sample(range(len(pop)), 2)
    x, y = pop[a], pop[b]
    if x.fitness == y.fitness:
        return x if rng.random() < 0.5 else y
    return x if x.fitness < y.fitness else y


def _better_by_cut(p1: Individual, p2: Individual, rng: random.Random) -> Individual:
    if p1.cut == p2.cut:
        return p1 if rng.random() < 0.5 else p2
    return p1 if p1.cut < p2.cut else p2


def recombine(g: DirectedGraph, p1: Individual, p2: Individual, cfg: EvoConfig, rng: random.Random) -> Individual:
    """Offspring never cuts more than the better parent."""
    blocked = p1.cut_edges | p2.cut_edges
    start = _better_by_cut(p1, p2, rng).partition
    child = vcycle(g, start, blocked, pick_heuristic(cfg.local_search, rng), rng)
    return make_individual(g, child, cfg)


def sample_cross_parameters(k: int, epsilon: float, rng: random.Random) -> tuple[int, float]:
    """``k'`` uniform on the integers of ``[k/4, 4k]`` (at least 2), ``eps'`` on ``[eps, 4 eps]``."""
    lo = max(2, math.ceil(k / 4))
    hi = max(lo, 4 * k)
    return rng.randint(lo, hi), rng.uniform(epsilon, 4 * epsilon)


def cross_recombine(g: DirectedGraph, p1: Individual, cfg: EvoConfig, rng: random.Random) -> Individual:
    """Recombine with a fresh ``k'``-partition built under a relaxed bound.

    The helper partition only contributes its cut edges; ``p1`` seeds the
    coarsest level, so the offspring is a ``k``-partition no worse than it.
    """
    k2, eps2 = sample_cross_parameters(cfg.k, cfg.epsilon, rng)
    try:
        helper = _multilevel(g, k2, eps2, cfg.repetitions, cfg.local_search, rng).cut_edge_set()
    except InfeasibleSplit:
        log.debug("cross recombine: no %d-way split at eps=%.3f, self-recombining", k2, eps2)
        helper = frozenset()
    blocked = p1.cut_edges | helper
    child = vcycle(g, p1.partition, blocked, pick_heuristic(cfg.local_search, rng), rng)
    return make_individual(g, child, cfg)


def mutate(g: DirectedGraph, p1: Individual, variant: str, cfg: EvoConfig, rng: random.Random) -> Individual:
    """``fresh``: install a new multi-level partition on the coarsest level of a
    recombination with ``p1`` (may be worse).  ``self``: recombine ``p1`` with itself.
    """
    if variant == "self":
        return recombine(g, p1, p1, cfg, rng)
    if variant != "fresh":
        raise ValueError(f"unknown mutation variant {variant!r}")
    fresh = _multilevel(g, cfg.k, cfg.epsilon, cfg.repetitions, cfg.local_search, rng)
    blocked = p1.cut_edges | fresh.cut_edge_set()
    child = vcycle(g, fresh, blocked, pick_heuristic(cfg.local_search, rng), rng)
    return make_individual(g, child, cfg)


def evict_insert(pop: list[Individual], offspring: Individual) -> list[Individual]:
    """Replace the member most similar to ``offspring`` among those whose cut
    is not better; discard the offspring when every member is better.
    """
    best_i = -1
    best_d = -1
    for i, x in enumerate(pop):
        if x.cut >= offspring.cut:
            d = len(x.cut_edges ^ offspring.cut_edges)
            if best_i < 0 or d < best_d:
                best_i, best_d = i, d
    if best_i < 0:
        return pop
    out = list(pop)
    out[best_i] = offspring
    return out


def _best(pop: Sequence[Individual]) -> Individual:
    return min(pop, key=lambda x: (x.fitness, x.cut))


class _Island:
    def __init__(self, index: int, g: DirectedGraph, cfg: EvoConfig, clock: Callable[[int], float], instance: str):
        self.index = index
        self.g = g
        self.cfg = cfg
        self.clock = clock
        self.instance = instance
        self.rng = random.Random(f"{cfg.seed}/island/{index}")
        self.population: list[Individual] = []
        self.events: list[ConvergenceEvent] = []
        self.generation = 0
        self.inbox: list[tuple[int, ...]] = []
        self.eligible: set[int] = set()
        self.best_key: tuple[float, float] | None = None
        rates = cfg.operator_rates
        self.ops = [op for op in OPERATORS if rates.get(op, 0) > 0]
        self.weights = [rates[op] for op in self.ops]
        self.counts = {op: 0 for op in OPERATORS}

    def _record(self, ind: Individual) -> None:
        ind.creation_time = self.clock(self.generation)
        self.events.append(
            ConvergenceEvent(ind.creation_time, ind.cut, self.instance, self.cfg.seed, self.index)
        )

    def _check(self, ind: Individual) -> None:
        report = check_feasibility(self.g, ind.partition)
        assert report.feasible, f"infeasible individual: {report}"

    def initialize(self) -> None:
        cfg = self.cfg
        for i in range(cfg.population_size):
            # seeds are distinct across islands; island 0 / member 0 uses cfg.seed itself
            rng = random.Random(cfg.seed + self.index * cfg.population_size + i)
            p = _multilevel(self.g, cfg.k, cfg.epsilon, cfg.repetitions, cfg.local_search, rng)
            ind = make_individual(self.g, p, cfg)
            self._check(ind)
            self._record(ind)
            self.population.append(ind)
        self._update_best()

    def _update_best(self) -> bool:
        b = _best(self.population)
        key = (b.fitness, b.cut)
        if self.best_key is None or key < self.best_key:
            self.best_key = key
            self.eligible = {j for j in range(self.cfg.islands) if j != self.index}
            return True
        return False

    def step(self) -> None:
        g, cfg, rng, pop = self.g, self.cfg, self.rng, self.population
        op = rng.choices(self.ops, self.weights)[0]
        if op == "recombine":
            child = recombine(g, tournament_select(pop, rng), tournament_select(pop, rng), cfg, rng)
        elif op == "cross_recombine":
            child = cross_recombine(g, tournament_select(pop, rng), cfg, rng)
        else:
            variant = "fresh" if op == "mutate_fresh" else "self"
            child = mutate(g, rng.choice(pop), variant, cfg, rng)
        self.counts[op] += 1
        self.generation += 1
        self._check(child)
        self._record(child)
        self.population = evict_insert(pop, child)
        self._update_best()

    def send(self, islands: list["_Island"]) -> None:
        if not self.eligible:
            return
        target = self.rng.choice(sorted(self.eligible))
        self.eligible.discard(target)
        islands[target].inbox.append(tuple(_best(self.population).partition.block_of))

    def receive(self) -> None:
        cfg = self.cfg
        for blocks in self.inbox:
            p = Partition(self.g, blocks, cfg.k, cfg.epsilon)
            ind = make_individual(self.g, p, cfg, self.clock(self.generation))
            self.population = evict_insert(self.population, ind)
        self.inbox.clear()
        self._update_best()


def evolve_run(g: DirectedGraph, cfg: EvoConfig, instance: str = "") -> EvoResult:
    """Run the island model until the time budget or generation count is spent.

    Islands advance one generation each in turn within this process; every
    ``exchange_period`` generations each island sends its best individual to a
    random island that has not yet received it.  The wall clock is read
    between generations only.  With ``cfg.logical_clock`` timestamps are
    generation numbers, which makes the event log reproducible.
    """
    start = time.perf_counter()

    def clock(generation: int) -> float:
        if cfg.logical_clock:
            return float(generation)
        return time.perf_counter() - start

    islands = [_Island(i, g, cfg, clock, instance) for i in range(cfg.islands)]
    for island in islands:
        island.initialize()
    generation = 0
    while True:
        if cfg.generations is not None and generation >= cfg.generations:
            break
        if cfg.time_budget is not None and time.perf_counter() - start >= cfg.time_budget:
            break
        for island in islands:
            island.step()
        generation += 1
        if cfg.islands > 1 and generation % cfg.exchange_period == 0:
            for island in islands:
                island.send(islands)
            for island in islands:
                island.receive()
    events = sorted(
        (e for island in islands for e in island.events), key=lambda e: (e.t, e.island)
    )
    counts = {op: sum(i.counts[op] for i in islands) for op in OPERATORS}
    best = _best([_best(i.population) for i in islands])
    log.info("evolution finished after %d generations, best cut %s, operators %s", generation, best.cut, counts)
    return EvoResult(best, events, generation, counts)
