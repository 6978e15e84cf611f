"""Deadline-bounded temporal path search.

The violating-path oracle runs one earliest-arrival sweep per departure time of
the source.  Because the sweep processes temporal arcs in time order and never
re-labels a vertex, the predecessor chain is already a strict temporal path
(arrival times strictly decrease along it), so no shortcutting pass is needed.
"""

from __future__ import annotations

import bisect
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from typing import Optional

from .core import Instance, SeparatorTimeline, Step, TemporalGraph, TemporalPath

_INF = float("inf")


class LimitExceeded(Exception):
    """Raised by :func:`enumerate_paths` when more paths exist than ``limit``."""

    def __init__(self, limit: int):
        super().__init__(f"more than {limit} paths")
        self.limit = limit


class BudgetExceeded(Exception):
    """Exact path counting visited more search nodes than allowed."""

    def __init__(self, budget: int, partial: int):
        super().__init__(f"search budget of {budget} nodes exhausted ({partial} paths so far)")
        self.budget = budget
        self.partial = partial


@dataclass(frozen=True)
class PathCount:
    value: int
    exact: bool

    def __str__(self) -> str:
        return f"{self.value} {'exact' if self.exact else 'walks'}"


def _source_departures(instance: Instance) -> list[int]:
    return sorted({s.time for s in instance.graph.out_steps[instance.source]})


def _sweep(
    instance: Instance,
    start: int,
    end: float,
    blocked: Optional[Callable[[int, int], bool]] = None,
) -> Optional[TemporalPath]:
    """Earliest-arrival sweep leaving the source exactly at ``start``.

    Only arcs with times in ``[start, end]`` are used; ``blocked(v, t)`` vetoes
    an internal vertex's outgoing arc.  Returns the path to the target or None.
    """
    graph = instance.graph
    s, z = instance.source, instance.target
    steps = graph.steps_by_time
    times = _step_times(graph)
    arrival: list[float] = [_INF] * graph.vertex_count
    arrival[s] = start - 1
    pred: list[Optional[Step]] = [None] * graph.vertex_count
    for i in range(bisect.bisect_left(times, start), len(steps)):
        step = steps[i]
        u, v, t = step
        if t > end:
            break
        if u == z or arrival[v] != _INF or not arrival[u] < t:
            continue
        if u == s:
            if t != start:
                continue
        elif blocked is not None and blocked(u, t):
            continue
        arrival[v] = t
        pred[v] = step
        if v == z:
            chain = []
            x = z
            while x != s:
                p = pred[x]
                chain.append(p)
                x = p.u
            return TemporalPath(tuple(reversed(chain)))
    return None


def _step_times(graph: TemporalGraph) -> list[int]:
    cache = graph.__dict__.get("_tempsep_step_times")
    if cache is None:
        cache = [s.time for s in graph.steps_by_time]
        graph.__dict__["_tempsep_step_times"] = cache
    return cache


def find_violating_path(
    instance: Instance, timeline: SeparatorTimeline
) -> Optional[TemporalPath]:
    """Return an unseparated s-z path with traveling time <= d, or None.

    Paths are tried by ascending departure time from the source; within one
    departure time the earliest-arriving path is returned.
    """
    ivs = timeline.intervals

    def blocked(v: int, t: int) -> bool:
        iv = ivs[v]
        return iv is not None and iv.lo <= t <= iv.hi

    for start in _source_departures(instance):
        path = _sweep(instance, start, start + instance.deadline - 1, blocked)
        if path is not None:
            return path
    return None


def find_violating_paths(
    instance: Instance, timeline: SeparatorTimeline, limit: int
) -> list[TemporalPath]:
    """Up to ``limit`` violating paths, at most one per source departure time."""
    ivs = timeline.intervals

    def blocked(v: int, t: int) -> bool:
        iv = ivs[v]
        return iv is not None and iv.lo <= t <= iv.hi

    found = []
    for start in _source_departures(instance):
        path = _sweep(instance, start, start + instance.deadline - 1, blocked)
        if path is not None:
            found.append(path)
            if len(found) >= limit:
                break
    return found


def is_valid_separator(instance: Instance, timeline: SeparatorTimeline) -> bool:
    return find_violating_path(instance, timeline) is None


def min_traveling_time(instance: Instance) -> Optional[int]:
    """Smallest traveling time of any s-z temporal path, ignoring the deadline."""
    best: Optional[int] = None
    for start in _source_departures(instance):
        end = instance.horizon if best is None else start + best - 2
        if end < start:
            continue
        path = _sweep(instance, start, end)
        if path is not None:
            trt = path.end_time - start + 1
            if best is None or trt < best:
                best = trt
                if best == 1:
                    break
    return best


def _latest_useful_arrival(instance: Instance) -> list[float]:
    """Per vertex, the supremum of arrival times from which z is still reachable.

    A walk that has reached ``v`` at time ``a`` can continue to z iff
    ``a < bound[v]`` (vertex repetition ignored, so this is only a pruning test).
    """
    graph = instance.graph
    z = instance.target
    bound: list[float] = [-_INF] * graph.vertex_count
    bound[z] = _INF
    for u, v, t in reversed(graph.steps_by_time):
        if u != z and t < bound[v] and t > bound[u]:
            bound[u] = t
    return bound


class _PathSearch:
    """Depth-first enumeration of d-feasible simple s-z paths."""

    def __init__(self, instance: Instance, budget: Optional[int] = None):
        self.instance = instance
        self.budget = budget
        self.nodes = 0
        self.found = 0
        self.bound = _latest_useful_arrival(instance)

    def _visit(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(self.budget, self.found)

    def paths(self) -> Iterator[tuple[Step, ...]]:
        inst = self.instance
        out = inst.graph.out_steps
        s, z, d = inst.source, inst.target, inst.deadline
        bound = self.bound
        on_path = [False] * inst.graph.vertex_count
        on_path[s] = True
        trail: list[Step] = []
        for first in out[s]:
            if on_path[first.v]:
                continue
            self._visit()
            if first.v == z:
                self.found += 1
                yield (first,)
                continue
            if not first.time < bound[first.v]:
                continue
            end = first.time + d - 1
            trail.append(first)
            on_path[first.v] = True
            stack = [iter(out[first.v])]
            while stack:
                step = next(stack[-1], None)
                if step is None:
                    stack.pop()
                    last = trail.pop()
                    on_path[last.v] = False
                    continue
                v, t = step.v, step.time
                if on_path[v] or t <= trail[-1].time or t > end:
                    continue
                self._visit()
                if v == z:
                    self.found += 1
                    yield (*trail, step)
                    continue
                if not t < bound[v]:
                    continue
                trail.append(step)
                on_path[v] = True
                stack.append(iter(out[v]))


def enumerate_paths(instance: Instance, limit: Optional[int] = None) -> Iterator[TemporalPath]:
    """Yield every d-feasible simple s-z path once, in deterministic DFS order.

    When ``limit`` paths have been yielded and another exists, LimitExceeded is
    raised instead of yielding it.
    """
    if limit is not None and limit < 1:
        raise ValueError("limit must be >= 1")
    produced = 0
    for steps in _PathSearch(instance).paths():
        if limit is not None and produced >= limit:
            raise LimitExceeded(limit)
        produced += 1
        yield TemporalPath(steps)


def collect_paths(
    instance: Instance, limit: Optional[int] = None
) -> tuple[list[TemporalPath], bool]:
    """Materialise :func:`enumerate_paths`; the flag is True when truncated."""
    paths: list[TemporalPath] = []
    try:
        for p in enumerate_paths(instance, limit):
            paths.append(p)
    except LimitExceeded:
        return paths, True
    return paths, False


def count_paths_exact(instance: Instance, budget: int) -> PathCount:
    if budget < 1:
        raise ValueError("budget must be >= 1")
    search = _PathSearch(instance, budget)
    for _ in search.paths():
        pass
    return PathCount(search.found, True)


def count_walks(instance: Instance) -> PathCount:
    """Number of strictly time-increasing s-z walks with traveling time <= d.

    Walks stop at their first arrival at z but may revisit other vertices, so
    this upper-bounds the simple path count.  One backward pass over the
    temporal arcs of each window ``[t1, t1 + d - 1]``.
    """
    graph = instance.graph
    s, z, d = instance.source, instance.target, instance.deadline
    steps = graph.steps_by_time
    times = _step_times(graph)
    total = 0
    for start in _source_departures(instance):
        lo = bisect.bisect_right(times, start)
        hi = bisect.bisect_right(times, start + d - 1)
        # suffix[v]: walks from v departing strictly after the current time
        suffix = [0] * graph.vertex_count
        i = hi - 1
        while i >= lo:
            t = steps[i].time
            j = i
            pending = []
            while j >= lo and steps[j].time == t:
                u, v, _ = steps[j]
                if u != z:
                    pending.append((u, 1 if v == z else suffix[v]))
                j -= 1
            for u, w in pending:
                suffix[u] += w
            i = j
        for step in graph.out_steps[s]:
            if step.time == start:
                total += 1 if step.v == z else suffix[step.v]
    return PathCount(total, False)


def count_paths(instance: Instance, budget: int) -> PathCount:
    """Exact simple-path count, falling back to the walk count past ``budget``."""
    try:
        return count_paths_exact(instance, budget)
    except BudgetExceeded:
        return count_walks(instance)
