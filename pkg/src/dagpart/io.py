"""Text formats: graph files, partition files and experiment CSVs.

Graph file::

    % comment
    n m
    c t d s1 w1 ... sd wd      # one line per node, successors 1-indexed

Partition file: one 0-indexed block id per line, node order.
"""

from __future__ import annotations

import csv
import logging
import os
from numbers import Real
from typing import Iterable, Mapping, Sequence

from .errors import DanglingEdge, ParseError
from .graph import DirectedGraph
from .report import LogRecord

log = logging.getLogger(__name__)

LOG_COLUMNS = ("t_seconds", "cut", "instance", "seed", "island")
SG_COLUMNS = ("t_n", "geo_mean_cut")
RATIO_COLUMNS = ("algorithm", "rank", "ratio")

PathLike = str | os.PathLike


def _number(token: str, line: int, what: str) -> int | float:
    try:
        return int(token)
    except ValueError:
        pass
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"bad {what} {token!r}", line) from None
    if value != value or value in (float("inf"), float("-inf")):
        raise ParseError(f"bad {what} {token!r}", line)
    return value


def loads_graph(text: str) -> DirectedGraph:
    rows = [
        (i, line.split())
        for i, line in enumerate(text.splitlines(), 1)
        if line.strip() and not line.lstrip().startswith("%")
    ]
    if not rows:
        raise ParseError("missing header", 1)
    hline, header = rows[0]
    if len(header) != 2:
        raise ParseError("header must be 'n m'", hline)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError("header must hold two integers", hline) from None
    if n < 0 or m < 0:
        raise ParseError("negative size in header", hline)
    body = rows[1:]
    if len(body) != n:
        line = body[n][0] if len(body) > n else (body[-1][0] if body else hline)
        raise ParseError(f"expected {n} node lines, found {len(body)}", line)

    node_weight: list[int | float] = []
    exec_time: list[int | float] = []
    weights: dict[tuple[int, int], int | float] = {}
    order: list[tuple[int, int]] = []
    declared = 0
    for v, (line, tok) in enumerate(body):
        if len(tok) < 3:
            raise ParseError("node line needs 'c t d'", line)
        c = _number(tok[0], line, "node weight")
        t = _number(tok[1], line, "execution time")
        if c < 0:
            raise ParseError(f"negative node weight {tok[0]}", line)
        if t < 0:
            raise ParseError(f"negative execution time {tok[1]}", line)
        try:
            d = int(tok[2])
        except ValueError:
            raise ParseError(f"bad successor count {tok[2]!r}", line) from None
        if d < 0 or len(tok) != 3 + 2 * d:
            raise ParseError(f"successor count {d} does not match {len(tok) - 3} trailing fields", line)
        declared += d
        node_weight.append(c)
        exec_time.append(t)
        for j in range(d):
            s_tok, w_tok = tok[3 + 2 * j], tok[4 + 2 * j]
            try:
                s = int(s_tok)
            except ValueError:
                raise ParseError(f"bad successor id {s_tok!r}", line) from None
            if not 1 <= s <= n:
                raise DanglingEdge(f"successor {s} outside 1..{n}", line)
            w = _number(w_tok, line, "edge weight")
            if w <= 0:
                raise ParseError(f"edge weight must be positive, got {w_tok}", line)
            u, x = v, s - 1
            if u == x:
                raise ParseError(f"self-loop on node {s}", line)
            if (u, x) in weights:
                log.warning("line %d: duplicate edge %d->%d merged", line, u + 1, s)
                weights[(u, x)] += w
            else:
                weights[(u, x)] = w
                order.append((u, x))
    if declared != m:
        raise ParseError(f"header declares {m} edges, node lines list {declared}", hline)
    src = [u for u, _ in order]
    dst = [x for _, x in order]
    return DirectedGraph(node_weight, exec_time, src, dst, [weights[e] for e in order])


def parse_graph(path: PathLike) -> DirectedGraph:
    with open(path, encoding="utf-8") as fh:
        return loads_graph(fh.read())


def _fmt(x: Real) -> str:
    # repr keeps floats exact; ints stay ints
    return repr(x) if isinstance(x, float) else str(x)


def dumps_graph(g: DirectedGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    for v in range(g.n):
        parts = [_fmt(g.node_weight[v]), _fmt(g.exec_time[v]), str(len(g.succ[v]))]
        for s, w, _ in g.succ[v]:
            parts += [str(s + 1), _fmt(w)]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def write_graph(g: DirectedGraph, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_graph(g))


def read_partition(path: PathLike, n: int | None = None) -> list[int]:
    blocks = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("%"):
                continue
            try:
                b = int(s)
            except ValueError:
                raise ParseError(f"bad block id {s!r}", i) from None
            if b < 0:
                raise ParseError(f"negative block id {b}", i)
            blocks.append(b)
    if n is not None and len(blocks) != n:
        raise ParseError(f"partition has {len(blocks)} entries, graph has {n} nodes", len(blocks))
    return blocks


def write_partition(block_of: Sequence[int], path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(f"{b}\n" for b in block_of)


def _write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_convergence_log(events: Iterable, path: PathLike) -> None:
    """``events`` need ``t, cut, instance, seed, island`` attributes."""
    _write_csv(path, LOG_COLUMNS, ((repr(float(e.t)), _fmt(e.cut), e.instance, e.seed, e.island) for e in events))


def read_convergence_log(path: PathLike) -> list[LogRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != LOG_COLUMNS:
            raise ParseError(f"expected columns {','.join(LOG_COLUMNS)}", 1)
        out = []
        for i, row in enumerate(reader, 2):
            try:
                out.append(
                    LogRecord(float(row["t_seconds"]), float(row["cut"]), row["instance"], int(row["seed"]), int(row["island"]))
                )
            except (TypeError, ValueError):
                raise ParseError("malformed log row", i) from None
    return out


def write_sg_csv(curve: Iterable[tuple[float, float]], path: PathLike) -> None:
    _write_csv(path, SG_COLUMNS, ((repr(t), repr(c)) for t, c in curve))


def write_ratio_csv(ratios: Mapping[str, Sequence[float]], path: PathLike) -> None:
    rows = ((algo, rank, repr(r)) for algo in sorted(ratios) for rank, r in enumerate(ratios[algo], 1))
    _write_csv(path, RATIO_COLUMNS, rows)


def read_results_csv(path: PathLike) -> dict[str, dict[str, float]]:
    """``algorithm,instance,cut`` rows into ``{algorithm: {instance: cut}}``."""
    out: dict[str, dict[str, float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        need = {"algorithm", "instance", "cut"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise ParseError("results need columns algorithm,instance,cut", 1)
        for i, row in enumerate(reader, 2):
            try:
                out.setdefault(row["algorithm"], {})[row["instance"]] = float(row["cut"])
            except ValueError:
                raise ParseError("malformed results row", i) from None
    return out


def read_times_csv(path: PathLike) -> dict[str, float]:
    """``instance,t`` rows: per-instance normalization times."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"instance", "t"} <= set(reader.fieldnames):
            raise ParseError("times need columns instance,t", 1)
        return {row["instance"]: float(row["t"]) for row in reader}


__all__ = [
    "loads_graph", "parse_graph", "dumps_graph", "write_graph",
    "read_partition", "write_partition",
    "write_convergence_log", "read_convergence_log",
    "write_sg_csv", "write_ratio_csv", "read_results_csv", "read_times_csv",
]
