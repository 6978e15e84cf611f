"""Minimum-length separator timelines.

:func:`solve_exact` is a lazy constraint generation loop: solve a 0-1 covering
master over the path rows generated so far, turn its solution into a timeline,
ask :func:`~tempsep.pathfind.find_violating_path` for a path the timeline
misses, add that path's row, repeat.  A row is the set of ``(vertex, time)``
pairs at which the path leaves an internal vertex.

The master keeps one interval hull per vertex and pays its full width, which
is the same as requiring that selected timestamps of a vertex be contiguous.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Optional, Protocol

from .core import (
    Instance,
    Interval,
    SeparatorTimeline,
    TemporalPath,
    timeline_length,
)
from .pathfind import collect_paths, find_violating_path, find_violating_paths, is_valid_separator

log = logging.getLogger(__name__)

Pair = tuple[int, int]
Row = frozenset[Pair]
Hulls = dict[int, tuple[int, int]]


class Unseparable(Exception):
    """The source has a direct temporal arc to the target."""


class Infeasible(Exception):
    pass


class LimitsExceeded(Exception):
    pass


class TimeoutExceeded(Exception):
    """Carries the best valid (not proven optimal) report found so far."""

    def __init__(self, report: SolveReport):
        super().__init__(f"timed out after {report.wall_time:.1f}s (incumbent SL={report.length})")
        self.report = report


class _MasterTimeout(Exception):
    pass


@dataclass
class SolverConfig:
    timeout: float = 3600.0
    path_limit: int = 200
    brute_force_limits: tuple[int, int] = (7, 8)
    backend: str = "bnb"
    batch_size: int = 1


@dataclass
class SolveReport:
    timeline: SeparatorTimeline
    length: int
    separator_vertices: int
    avg_interval: float
    generated_constraints: int
    branch_nodes: int
    wall_time: float
    optimal: bool
    mode: str = "exact"

    @classmethod
    def build(cls, timeline: SeparatorTimeline, *, rows: int, nodes: int, started: float,
              optimal: bool, mode: str) -> SolveReport:
        length = timeline_length(timeline)
        nsep = len(timeline.separator_vertices())
        return cls(
            timeline=timeline,
            length=length,
            separator_vertices=nsep,
            avg_interval=length / nsep if nsep else 0.0,
            generated_constraints=rows,
            branch_nodes=nodes,
            wall_time=time.perf_counter() - started,
            optimal=optimal,
            mode=mode,
        )


def path_row(path: TemporalPath) -> Row:
    return frozenset((s.u, s.time) for s in path.internal_steps())


@dataclass
class MasterProblem:
    """Path rows over binary ``x[v, t]``; minimise total selected timestamps."""

    num_vertices: int
    horizon: int
    rows: list[Row] = field(default_factory=list)
    _seen: set[Row] = field(default_factory=set, repr=False)

    def add_row(self, row: Iterable[Pair]) -> bool:
        row = frozenset(row)
        if not row:
            raise Infeasible("empty constraint row")
        for v, t in row:
            if not (0 <= v < self.num_vertices and 1 <= t <= self.horizon):
                raise ValueError(f"pair {(v, t)} outside the decision grid")
        if row in self._seen:
            return False
        self._seen.add(row)
        self.rows.append(row)
        return True


def hull_cost(hulls: Hulls) -> int:
    return sum(hi - lo + 1 for lo, hi in hulls.values())


def covers(hulls: Hulls, row: Iterable[Pair]) -> bool:
    for v, t in row:
        h = hulls.get(v)
        if h is not None and h[0] <= t <= h[1]:
            return True
    return False


def hulls_to_timeline(n: int, hulls: Hulls) -> SeparatorTimeline:
    return SeparatorTimeline.from_mapping(n, {v: Interval(lo, hi) for v, (lo, hi) in hulls.items()})


def timeline_to_hulls(timeline: SeparatorTimeline) -> Hulls:
    return {v: (iv.lo, iv.hi) for v, iv in enumerate(timeline.intervals) if iv is not None}


@dataclass
class MasterResult:
    hulls: Hulls
    cost: int
    nodes: int
    optimal: bool = True


class MasterBackend(Protocol):
    def solve(self, problem: MasterProblem, *, lower_bound: int = 0,
              upper_bound: Optional[int] = None, hint: Optional[Hulls] = None,
              deadline: Optional[float] = None) -> MasterResult: ...


def _extend_cheapest(hulls: Hulls, row: Iterable[Pair]) -> None:
    best = None
    for v, t in sorted(row):
        h = hulls.get(v)
        if h is None:
            extra, new = 1, (t, t)
        else:
            new = (min(h[0], t), max(h[1], t))
            extra = (new[1] - new[0]) - (h[1] - h[0])
        if best is None or extra < best[0]:
            best = (extra, v, new)
    assert best is not None
    hulls[best[1]] = best[2]


def _repair(hulls: Hulls, rows: Sequence[Row]) -> Hulls:
    out = dict(hulls)
    for row in rows:
        if not covers(out, row):
            _extend_cheapest(out, row)
    return out


class BranchAndBound:
    """Exact hitting set with per-vertex contiguity, by branching on row members.

    Each node picks the uncovered row with fewest members and tries each
    ``(v, t)`` in it, cheapest hull extension first.  The bound adds to the
    current hull cost the larger of two packings of uncovered rows: rows with
    pairwise disjoint pairs (one new timestamp each), and rows with pairwise
    disjoint vertex sets (each pays its cheapest extension).
    """

    check_every = 2048

    def solve(self, problem: MasterProblem, *, lower_bound: int = 0,
              upper_bound: Optional[int] = None, hint: Optional[Hulls] = None,
              deadline: Optional[float] = None) -> MasterResult:
        rows = [tuple(sorted(r)) for r in problem.rows]
        for r in rows:
            if not r:
                raise Infeasible("empty constraint row")
        self.rows = rows
        self.deadline = deadline
        self.nodes = 0
        self.lower = lower_bound
        self.best_cost: float = float("inf")
        self.best: Optional[Hulls] = None
        if hint is not None:
            start = _repair(hint, problem.rows)
            self.best, self.best_cost = start, hull_cost(start)
        if upper_bound is not None and upper_bound < self.best_cost:
            self.best_cost = upper_bound
            self.best = None
        if self.best is not None and self.best_cost <= self.lower:
            return MasterResult(self.best, int(self.best_cost), 0)
        self._done = False
        self._search({}, 0, list(range(len(rows))))
        if self.best is None:
            raise Infeasible("no assignment within the incumbent bound")
        return MasterResult(self.best, hull_cost(self.best), self.nodes)

    def _bound(self, hulls: Hulls, uncovered: list[int]) -> int:
        rows = self.rows
        order = sorted(uncovered, key=lambda i: len(rows[i]))
        used_pairs: set[Pair] = set()
        pair_pack = 0
        used_vertices: set[int] = set()
        vertex_pack = 0
        for i in order:
            r = rows[i]
            if used_pairs.isdisjoint(r):
                used_pairs.update(r)
                pair_pack += 1
            vs = {v for v, _ in r}
            if used_vertices.isdisjoint(vs):
                used_vertices.update(vs)
                vertex_pack += min(_extra(hulls, v, t) for v, t in r)
        return max(pair_pack, vertex_pack)

    def _search(self, hulls: Hulls, cost: int, uncovered: list[int]) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % self.check_every == 0:
            if time.perf_counter() > self.deadline:
                raise _MasterTimeout
        rows = self.rows
        still = [i for i in uncovered if not covers(hulls, rows[i])]
        if not still:
            if cost < self.best_cost:
                self.best_cost = cost
                self.best = dict(hulls)
                if cost <= self.lower:
                    self._done = True
            return
        if cost + self._bound(hulls, still) >= self.best_cost:
            return
        branch = min(still, key=lambda i: (len(rows[i]), i))
        moves = sorted((_extra(hulls, v, t), v, t) for v, t in rows[branch])
        for extra, v, t in moves:
            if cost + extra >= self.best_cost:
                break
            old = hulls.get(v)
            hulls[v] = (t, t) if old is None else (min(old[0], t), max(old[1], t))
            self._search(hulls, cost + extra, still)
            if old is None:
                del hulls[v]
            else:
                hulls[v] = old
            if self._done:
                return


def _extra(hulls: Hulls, v: int, t: int) -> int:
    h = hulls.get(v)
    if h is None:
        return 1
    if t < h[0]:
        return h[0] - t
    if t > h[1]:
        return t - h[1]
    return 0


class MilpBackend:
    """Master as a 0-1 program for HiGHS (via scipy), with the pairwise
    contiguity inequalities ``x[v,a] + x[v,b] - 1 <= x[v,a+1]`` for ``a < b``.

    Only timestamps between a vertex's first and last row occurrence get a
    variable; selecting anything outside that range cannot help.
    """

    def solve(self, problem: MasterProblem, *, lower_bound: int = 0,
              upper_bound: Optional[int] = None, hint: Optional[Hulls] = None,
              deadline: Optional[float] = None) -> MasterResult:
        import numpy as np
        from scipy.optimize import Bounds, LinearConstraint, milp
        from scipy.sparse import coo_matrix

        span: dict[int, list[int]] = {}
        for row in problem.rows:
            for v, t in row:
                lo_hi = span.setdefault(v, [t, t])
                lo_hi[0] = min(lo_hi[0], t)
                lo_hi[1] = max(lo_hi[1], t)
        col: dict[Pair, int] = {}
        for v in sorted(span):
            for t in range(span[v][0], span[v][1] + 1):
                col[(v, t)] = len(col)
        if not col:
            return MasterResult({}, 0, 0)

        data, ri, ci, lbs, ubs = [], [], [], [], []
        r = 0
        for row in problem.rows:
            for p in row:
                ri.append(r); ci.append(col[p]); data.append(1.0)
            lbs.append(1.0); ubs.append(np.inf)
            r += 1
        for v in sorted(span):
            lo, hi = span[v]
            for a in range(lo, hi - 1):
                for b in range(a + 2, hi + 1):
                    ri += [r, r, r]
                    ci += [col[(v, a)], col[(v, b)], col[(v, a + 1)]]
                    data += [1.0, 1.0, -1.0]
                    lbs.append(-np.inf); ubs.append(1.0)
                    r += 1
        matrix = coo_matrix((data, (ri, ci)), shape=(r, len(col))).tocsr()
        options = {}
        if deadline is not None:
            options["time_limit"] = max(1.0, deadline - time.perf_counter())
        res = milp(
            c=np.ones(len(col)),
            constraints=LinearConstraint(matrix, lbs, ubs),
            integrality=np.ones(len(col)),
            bounds=Bounds(0, 1),
            options=options,
        )
        if res.x is None:
            if res.status == 1:
                raise _MasterTimeout
            raise Infeasible(res.message)
        if res.status == 1:
            raise _MasterTimeout
        hulls: Hulls = {}
        for (v, t), j in col.items():
            if res.x[j] > 0.5:
                h = hulls.get(v)
                hulls[v] = (t, t) if h is None else (min(h[0], t), max(h[1], t))
        return MasterResult(hulls, hull_cost(hulls), 0)


BACKENDS: dict[str, type] = {"bnb": BranchAndBound, "milp": MilpBackend}


def make_backend(name: str) -> MasterBackend:
    try:
        return BACKENDS[name]()
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; choose from {sorted(BACKENDS)}") from None


def solve_master(problem: MasterProblem, incumbent_bound: Optional[int] = None,
                 backend: Optional[MasterBackend] = None) -> dict[int, Interval]:
    """Minimum-cost contiguous selection hitting every row of ``problem``.

    Solutions costing more than ``incumbent_bound`` are pruned; Infeasible is
    raised when nothing within the bound exists.
    """
    backend = backend or BranchAndBound()
    upper = None if incumbent_bound is None else incumbent_bound + 1
    result = backend.solve(problem, upper_bound=upper)
    if incumbent_bound is not None and result.cost > incumbent_bound:
        raise Infeasible(f"no assignment of cost <= {incumbent_bound}")
    return {v: Interval(lo, hi) for v, (lo, hi) in sorted(result.hulls.items())}


def check_separable(instance: Instance) -> None:
    z = instance.target
    for step in instance.graph.out_steps[instance.source]:
        if step.v == z:
            raise Unseparable(
                f"direct temporal arc {instance.graph.vertex_names[instance.source]}->"
                f"{instance.graph.vertex_names[z]} at time {step.time}"
            )


def _finish(instance: Instance, report: SolveReport) -> SolveReport:
    if not is_valid_separator(instance, report.timeline):
        raise AssertionError("solver produced a timeline that misses a feasible path")
    return report


def solve_exact(instance: Instance, config: Optional[SolverConfig] = None) -> SolveReport:
    config = config or SolverConfig()
    started = time.perf_counter()
    deadline = started + config.timeout
    check_separable(instance)
    n = instance.graph.vertex_count
    backend = make_backend(config.backend)
    problem = MasterProblem(n, instance.horizon)
    hulls: Hulls = {}
    cost = 0
    nodes = 0
    while True:
        timeline = hulls_to_timeline(n, hulls)
        if config.batch_size > 1:
            paths = find_violating_paths(instance, timeline, config.batch_size)
        else:
            p = find_violating_path(instance, timeline)
            paths = [] if p is None else [p]
        if not paths:
            break
        # paths differing only in the source arc share a row
        added = [problem.add_row(path_row(p)) for p in paths]
        if not any(added):
            raise AssertionError(f"violating path produced a repeated row: {paths[0]}")
        try:
            result = backend.solve(problem, lower_bound=cost, hint=hulls, deadline=deadline)
        except _MasterTimeout:
            incumbent = _repair_until_valid(instance, hulls, problem)
            report = SolveReport.build(hulls_to_timeline(n, incumbent), rows=len(problem.rows),
                                       nodes=nodes, started=started, optimal=False, mode="exact")
            raise TimeoutExceeded(_finish(instance, report)) from None
        nodes += result.nodes
        hulls, cost = result.hulls, result.cost
        log.debug("rows=%d cost=%d nodes=%d", len(problem.rows), cost, result.nodes)
        if time.perf_counter() > deadline:
            incumbent = _repair_until_valid(instance, hulls, problem)
            report = SolveReport.build(hulls_to_timeline(n, incumbent), rows=len(problem.rows),
                                       nodes=nodes, started=started, optimal=False, mode="exact")
            raise TimeoutExceeded(_finish(instance, report))
    report = SolveReport.build(hulls_to_timeline(n, hulls), rows=len(problem.rows), nodes=nodes,
                               started=started, optimal=True, mode="exact")
    return _finish(instance, report)


def _repair_until_valid(instance: Instance, hulls: Hulls,
                        problem: Optional[MasterProblem] = None) -> Hulls:
    out = dict(hulls)
    n = instance.graph.vertex_count
    while True:
        p = find_violating_path(instance, hulls_to_timeline(n, out))
        if p is None:
            return out
        row = path_row(p)
        if problem is not None:
            problem.add_row(row)
        _extend_cheapest(out, row)


def greedy_cover(rows: Sequence[Row], hulls: Optional[Hulls] = None) -> Hulls:
    """Repeatedly take the hull extension covering most rows per added unit."""
    hulls = dict(hulls or {})
    uncovered = {i for i, r in enumerate(rows) if not covers(hulls, r)}
    by_vertex: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
    for i, r in enumerate(rows):
        per: dict[int, list[int]] = {}
        for v, t in r:
            per.setdefault(v, []).append(t)
        for v, ts in per.items():
            by_vertex.setdefault(v, []).append((i, tuple(ts)))
    while uncovered:
        best = None
        candidates = sorted({p for i in uncovered for p in rows[i]})
        for v, t in candidates:
            h = hulls.get(v)
            new = (t, t) if h is None else (min(h[0], t), max(h[1], t))
            added = (new[1] - new[0] + 1) - (0 if h is None else h[1] - h[0] + 1)
            if added <= 0:
                continue
            gain = sum(
                1 for i, ts in by_vertex[v]
                if i in uncovered and any(new[0] <= x <= new[1] for x in ts)
            )
            key = (gain / added, -v, -t)
            if best is None or key > best[0]:
                best = (key, v, new)
        assert best is not None
        _, v, new = best
        hulls[v] = new
        uncovered = {i for i in uncovered if not covers(hulls, rows[i])}
    return hulls


def solve_greedy(instance: Instance, path_limit: int = 200) -> SolveReport:
    if path_limit < 1:
        raise ValueError("path_limit must be >= 1")
    started = time.perf_counter()
    check_separable(instance)
    n = instance.graph.vertex_count
    paths, _ = collect_paths(instance, path_limit)
    rows = list(dict.fromkeys(path_row(p) for p in paths))
    hulls = greedy_cover(rows)
    while True:
        p = find_violating_path(instance, hulls_to_timeline(n, hulls))
        if p is None:
            break
        rows.append(path_row(p))
        hulls = greedy_cover(rows, hulls)
    report = SolveReport.build(hulls_to_timeline(n, hulls), rows=len(rows), nodes=0,
                               started=started, optimal=False, mode="greedy")
    return _finish(instance, report)


def brute_force_min(instance: Instance, limits: Optional[tuple[int, int]] = (7, 8),
                    canonical: bool = False) -> SolveReport:
    """Exhaustive minimum separator, for checking the other solvers.

    Every d-feasible path is enumerated up front.  Assignments of one interval
    (or none) per internal vertex are tried in order of total length, and the
    first that separates every enumerated path is returned.  Vertices on no
    feasible path are left empty, since an interval there never helps.

    With ``canonical=True`` an interval's endpoints are restricted to the
    vertex's departure times on feasible paths; any separator shrinks to such
    a form without losing validity, so the optimum is unchanged.  This keeps
    large horizons tractable.
    """
    started = time.perf_counter()
    check_separable(instance)
    graph = instance.graph
    if limits is not None:
        max_v, max_t = limits
        if graph.vertex_count > max_v or graph.horizon > max_t:
            raise LimitsExceeded(
                f"|V|={graph.vertex_count}, T={graph.horizon} exceed limits ({max_v}, {max_t})"
            )
    paths, _ = collect_paths(instance)
    rows = [path_row(p) for p in paths]
    full = (1 << len(rows)) - 1
    n = graph.vertex_count

    relevant = sorted({v for r in rows for v, _ in r})
    options: list[list[tuple[int, int, tuple[int, int]]]] = []
    for v in relevant:
        if canonical:
            ts = sorted({t for r in rows for u, t in r if u == v})
            spans = [(a, b) for i, a in enumerate(ts) for b in ts[i:]]
        else:
            T = graph.horizon
            spans = [(a, b) for a in range(1, T + 1) for b in range(a, T + 1)]
        opts = []
        for a, b in spans:
            mask = 0
            for k, r in enumerate(rows):
                if any(u == v and a <= t <= b for u, t in r):
                    mask |= 1 << k
            opts.append((b - a + 1, mask, (a, b)))
        opts.sort()
        options.append(opts)

    reach = [0] * (len(relevant) + 1)
    for i in range(len(relevant) - 1, -1, -1):
        m = reach[i + 1]
        for _, mask, _ in options[i]:
            m |= mask
        reach[i] = m

    chosen: list[Optional[tuple[int, int]]] = [None] * len(relevant)

    def search(i: int, budget: int, mask: int) -> bool:
        if mask == full:
            return True
        if i == len(relevant) or (mask | reach[i]) != full:
            return False
        if search(i + 1, budget, mask):
            chosen[i] = None
            return True
        for length, m, span in options[i]:
            if length > budget:
                break
            if m | mask == mask:
                continue
            if search(i + 1, budget - length, mask | m):
                chosen[i] = span
                return True
        return False

    budget = 0
    while True:
        chosen = [None] * len(relevant)
        if search(0, budget, 0):
            break
        budget += 1
    hulls = {v: span for v, span in zip(relevant, chosen) if span is not None}
    report = SolveReport.build(hulls_to_timeline(n, hulls), rows=len(rows), nodes=0,
                               started=started, optimal=True, mode="brute-force")
    return _finish(instance, report)
