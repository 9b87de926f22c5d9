"""``dagpart`` command-line driver."""

from __future__ import annotations

import argparse
import logging
import os
import random
import sys
from typing import Sequence

from . import io as dio
from .errors import DagPartError
from .evolve import EvoConfig, evolve_run
from .generate import layered_random_dag
from .multilevel import LOCAL_SEARCH_CHOICES, PipelineConfig, multilevel_partition, single_level_partition
from .partition import Partition, check_feasibility
from .report import convergence_curve, performance_ratios
from .sched import critical_path_estimate

log = logging.getLogger("dagpart")

SWEEP_K = (2, 4, 8, 16, 32)


def _partition_once(g, args, k: int):
    """Returns ``(partition, events)``; events are empty outside evo mode."""
    if args.mode == "single":
        cfg = PipelineConfig(k, args.epsilon, args.seed, args.repetitions, args.local_search)
        return single_level_partition(g, cfg), []
    if args.mode == "multi":
        cfg = PipelineConfig(k, args.epsilon, args.seed, args.repetitions, args.local_search)
        return multilevel_partition(g, cfg), []
    # a generation count makes timestamps logical, so runs are reproducible
    logical = args.generations is not None
    cfg = EvoConfig(
        k=k,
        epsilon=args.epsilon,
        population_size=args.population,
        time_budget=None if logical else args.time_budget,
        generations=args.generations,
        islands=args.islands,
        alpha=args.alpha,
        beta=args.beta,
        seed=args.seed,
        repetitions=args.repetitions,
        local_search=args.local_search,
        logical_clock=logical,
    )
    instance = args.instance or os.path.splitext(os.path.basename(args.graph))[0]
    result = evolve_run(g, cfg, instance=instance)
    return result.best.partition, result.events


def _suffixed(path: str, k: int) -> str:
    root, ext = os.path.splitext(path)
    return f"{root}.k{k}{ext}"


def cmd_partition(args) -> int:
    g = dio.parse_graph(args.graph)
    ks = SWEEP_K if args.sweep else (args.k,)
    if args.k is None and not args.sweep:
        raise SystemExit("partition: give --k or --sweep")
    for k in ks:
        p, events = _partition_once(g, args, k)
        report = check_feasibility(g, p)
        assert report.feasible, f"internal error: infeasible partition {report}"
        out = _suffixed(args.output, k) if args.sweep else args.output
        dio.write_partition(p.block_of, out)
        if args.convergence_log and args.mode == "evo":
            dio.write_convergence_log(events, _suffixed(args.convergence_log, k) if args.sweep else args.convergence_log)
        print(f"k={k} cut={p.cut_value:g} written to {out}")
    return 0


def cmd_evaluate(args) -> int:
    g = dio.parse_graph(args.graph)
    blocks = dio.read_partition(args.partition, g.n)
    k = args.k if args.k is not None else max(blocks, default=-1) + 1
    if any(b >= k for b in blocks):
        raise DagPartError(f"block id outside 0..{k - 1}")
    p = Partition(g, blocks, k, args.epsilon)
    report = check_feasibility(g, p)
    print(f"cut {p.cut_value:g}")
    print(f"l_max {report.l_max:g}")
    print(f"overloaded {' '.join(map(str, report.overloaded_blocks)) or 'none'}")
    print(f"quotient_acyclic {str(report.quotient_acyclic).lower()}")
    print(f"feasible {str(report.feasible).lower()}")
    print(f"critical_path {critical_path_estimate(g, p):g}")
    return 0 if report.feasible else 1


def cmd_report(args) -> int:
    if not (args.sg_output or args.ratio_output):
        raise SystemExit("report: give --sg-output and/or --ratio-output")
    if args.sg_output:
        if not args.log:
            raise SystemExit("report: --sg-output needs --log")
        records = [r for path in args.log for r in dio.read_convergence_log(path)]
        times = dio.read_times_csv(args.times) if args.times else None
        dio.write_sg_csv(convergence_curve(records, times), args.sg_output)
    if args.ratio_output:
        if not args.results:
            raise SystemExit("report: --ratio-output needs --results")
        dio.write_ratio_csv(performance_ratios(dio.read_results_csv(args.results)), args.ratio_output)
    return 0


def cmd_gen(args) -> int:
    g = layered_random_dag(
        args.nodes, args.layers, args.density, random.Random(args.seed), max_edge_weight=args.max_weight,
        max_exec_time=args.max_exec_time,
    )
    dio.write_graph(g, args.output)
    print(f"n={g.n} m={g.m} written to {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dagpart", description="Acyclic partitioning of directed graphs.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="partition a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--sweep", action="store_true", help=f"run every k in {SWEEP_K}; outputs get a .k<k> suffix")
    p.add_argument("--epsilon", type=float, default=0.03)
    p.add_argument("--mode", choices=("single", "multi", "evo"), default="multi")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-budget", type=float, default=10.0, help="seconds (evo)")
    p.add_argument("--generations", type=int, help="fixed generation count (evo); timestamps become generation numbers")
    p.add_argument("--islands", type=int, default=1)
    p.add_argument("--population", type=int, default=10)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--repetitions", type=int, default=4)
    p.add_argument("--local-search", choices=LOCAL_SEARCH_CHOICES, default="random")
    p.add_argument("--instance", help="instance name in the log (default: graph file stem)")
    p.add_argument("--output", required=True)
    p.add_argument("--convergence-log")
    p.set_defaults(func=cmd_partition)

    e = sub.add_parser("evaluate", help="cut, feasibility and critical path of a partition")
    e.add_argument("--graph", required=True)
    e.add_argument("--partition", required=True)
    e.add_argument("--k", type=int, help="block count (default: largest id + 1)")
    e.add_argument("--epsilon", type=float, default=0.03)
    e.set_defaults(func=cmd_evaluate)

    r = sub.add_parser("report", help="convergence and performance-ratio CSVs")
    r.add_argument("--log", nargs="+", help="convergence log CSVs")
    r.add_argument("--times", help="CSV instance,t of normalization times")
    r.add_argument("--results", help="CSV algorithm,instance,cut")
    r.add_argument("--sg-output")
    r.add_argument("--ratio-output")
    r.set_defaults(func=cmd_report)

    gn = sub.add_parser("gen", help="write a random layered DAG")
    gn.add_argument("--nodes", type=int, required=True)
    gn.add_argument("--layers", type=int, required=True)
    gn.add_argument("--density", type=float, required=True)
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--max-weight", type=int, default=1)
    gn.add_argument("--max-exec-time", type=float, default=0.0)
    gn.add_argument("--output", required=True)
    gn.set_defaults(func=cmd_gen)
    return ap


def run_cli(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * args.verbose
    logging.basicConfig(level=max(level, logging.DEBUG), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (DagPartError, ValueError, OSError) as exc:
        print(f"dagpart {args.command}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
