"""Minimum interval separator timelines in temporal directed graphs."""

from .core import (
    Instance,
    Interval,
    SeparatorTimeline,
    Step,
    TemporalGraph,
    TemporalPath,
    build_graph,
    separates,
    timeline_length,
    traveling_time,
)
from .pathfind import (
    PathCount,
    count_paths_exact,
    count_walks,
    enumerate_paths,
    find_violating_path,
    is_valid_separator,
    min_traveling_time,
)
from .solver import (
    SolveReport,
    SolverConfig,
    brute_force_min,
    solve_exact,
    solve_greedy,
    solve_master,
)

__all__ = [
    "Instance",
    "Interval",
    "PathCount",
    "SeparatorTimeline",
    "SolveReport",
    "SolverConfig",
    "Step",
    "TemporalGraph",
    "TemporalPath",
    "brute_force_min",
    "build_graph",
    "count_paths_exact",
    "count_walks",
    "enumerate_paths",
    "find_violating_path",
    "is_valid_separator",
    "min_traveling_time",
    "separates",
    "solve_exact",
    "solve_greedy",
    "solve_master",
    "timeline_length",
    "traveling_time",
]
