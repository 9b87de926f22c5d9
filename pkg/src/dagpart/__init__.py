"""Balanced acyclic partitioning of directed acyclic graphs."""

from .coarsen import HierarchyLevel, Matching, coarsen_to_bottom, contract, expansion_star2, gpa_matching, project_partition
from .errors import (
    CycleError,
    DagPartError,
    DanglingEdge,
    EmptyInstance,
    InfeasibleSplit,
    MismatchedGraph,
    MissingValue,
    ParseError,
    PopulationTooSmall,
)
from .evolve import EvoConfig, EvoResult, Individual, cross_recombine, evict_insert, evolve_run, fitness, mutate, recombine
from .generate import layered_random_dag, random_dag
from .graph import DirectedGraph, TopologicalOrder, build_quotient, is_acyclic, random_topological_order, topological_order
from .io import parse_graph, read_partition, write_graph, write_partition
from .multilevel import PipelineConfig, initial_partition, multilevel_partition, single_level_partition, vcycle
from .partition import FeasibilityReport, Partition, check_feasibility, edge_cut, max_block_load, partition_distance
from .refine import block_order, local_search, movable_interval, refine_h1, refine_h2, refine_h3_fm
from .report import average_repetitions, merge_geometric, performance_ratios, running_min
from .sched import critical_path_estimate, sas_list_schedule, two_pass_schedule

__version__ = "0.1.0"
