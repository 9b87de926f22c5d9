"""Convergence curves and performance plots from partitioning event logs.

Per instance, the events of all islands are merged by time and turned into a
running minimum.  Repetitions are averaged entry by entry, times are
normalized by the instance's reference time, and the instances are combined
into an event-based geometric mean curve.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import EmptyInstance, MissingValue

Point = tuple[float, float]


def running_min(events: Iterable[Sequence[float]]) -> list[Point]:
    """Sort ``(t, cut, ...)`` events by time and replace each cut by the prefix minimum."""
    out: list[Point] = []
    best = math.inf
    for e in sorted(events, key=lambda e: e[0]):
        t, cut = e[0], e[1]
        if cut < best:
            best = cut
        out.append((t, best))
    return out


def normalize(series: Sequence[Point], t_ref: float) -> list[Point]:
    if t_ref <= 0:
        raise ValueError("normalization time must be positive")
    return [(t / t_ref, c) for t, c in series]


def average_repetitions(runs: Sequence[Sequence[Point]]) -> list[Point]:
    """Average running-minimum sequences of several repetitions by entry index.

    Shorter sequences are padded with their last entry so that every index
    averages over all repetitions.
    """
    runs = [r for r in runs if r]
    if not runs:
        return []
    length = max(len(r) for r in runs)
    out = []
    for i in range(length):
        ts = [r[min(i, len(r) - 1)][0] for r in runs]
        cs = [r[min(i, len(r) - 1)][1] for r in runs]
        out.append((sum(ts) / len(ts), sum(cs) / len(cs)))
    return out


class _GeoMean:
    """Geometric mean that supports replacing one member; zeros are counted apart."""

    def __init__(self, values: Sequence[float]):
        self.n = len(values)
        self.zeros = 0
        self.log_sum = 0.0
        for v in values:
            self._add(v, 1)

    def _add(self, v: float, sign: int) -> None:
        if v == 0:
            self.zeros += sign
        else:
            self.log_sum += sign * math.log(v)

    def replace(self, old: float, new: float) -> None:
        self._add(old, -1)
        self._add(new, 1)

    @property
    def value(self) -> float:
        if self.zeros:
            return 0.0
        return math.exp(self.log_sum / self.n)


def geometric_mean(values: Sequence[float]) -> float:
    if any(v == 0 for v in values):
        return 0.0
    return math.exp(sum(math.log(v) for v in values) / len(values))


def merge_geometric(series: Mapping[str, Sequence[Point]]) -> list[Point]:
    """Event-based geometric mean over instances.

    Starts from the geometric mean of every instance's first value and, for
    each entry in the merged time-sorted sequence, swaps that instance's
    contribution for the entry's value before emitting ``(t_n, mean)``.
    """
    if not series:
        raise EmptyInstance("no instances given")
    for name, s in series.items():
        if not s:
            raise EmptyInstance(f"instance {name!r} has no entries")
    ordered = {name: sorted(s, key=lambda e: e[0]) for name, s in series.items()}
    names = list(ordered)
    current = {name: ordered[name][0][1] for name in names}
    mean = _GeoMean([current[name] for name in names])
    merged = sorted(
        ((t, c, i) for i, name in enumerate(names) for t, c in ordered[name]), key=lambda e: (e[0], e[2])
    )
    out: list[Point] = []
    for t, c, i in merged:
        name = names[i]
        mean.replace(current[name], c)
        current[name] = c
        out.append((t, mean.value))
    return out


@dataclass(frozen=True)
class LogRecord:
    t: float
    cut: float
    instance: str
    seed: int
    island: int


def convergence_curve(
    records: Iterable[LogRecord], reference_times: Mapping[str, float] | None = None
) -> list[Point]:
    """Full pipeline from a convergence log to the ``S_g`` curve.

    ``seed`` identifies the repetition; all islands of one repetition are
    merged before the running minimum is taken.  Instances without a
    reference time are normalized by 1.
    """
    by_rep: dict[str, dict[int, list[tuple[float, float]]]] = defaultdict(lambda: defaultdict(list))
    for r in records:
        by_rep[r.instance][r.seed].append((r.t, r.cut))
    reference_times = reference_times or {}
    per_instance = {}
    for inst, reps in by_rep.items():
        runs = [running_min(reps[s]) for s in sorted(reps)]
        per_instance[inst] = normalize(average_repetitions(runs), reference_times.get(inst, 1.0))
    return merge_geometric(per_instance)


def performance_ratios(results: Mapping[str, Mapping[str, float]]) -> dict[str, list[float]]:
    """Per algorithm, the sorted ratios ``best cut on instance / algorithm's cut``.

    ``results[algorithm][instance]`` is that algorithm's best cut.  A ratio of
    one means the algorithm matched the best result on that instance.
    """
    if not results:
        return {}
    instances = set()
    for table in results.values():
        instances.update(table)
    for algo, table in results.items():
        missing = instances - set(table)
        if missing:
            raise MissingValue(f"{algo!r} has no value for {sorted(missing)}")
    out: dict[str, list[float]] = {}
    for algo, table in results.items():
        ratios = []
        for inst in instances:
            best = min(results[a][inst] for a in results)
            mine = table[inst]
            ratios.append(1.0 if mine == best else best / mine)
        out[algo] = sorted(ratios)
    return out
