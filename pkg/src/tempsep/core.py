"""Temporal graph model, strict temporal paths and interval separator timelines.

Vertices are dense integer ids ``0..n-1`` with a parallel name table; names only
matter at I/O boundaries.  Timestamps are integers in ``[1, T]``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional


class TemporalGraphError(ValueError):
    """Base class for malformed graphs, paths, timelines and instances."""


class TimestampOutOfRange(TemporalGraphError):
    pass


class SelfLoop(TemporalGraphError):
    pass


class UnknownVertex(TemporalGraphError):
    pass


class EmptyTimestampSet(TemporalGraphError):
    pass


class DuplicateVertex(TemporalGraphError):
    pass


class InvalidPath(TemporalGraphError):
    pass


class InvalidTimeline(TemporalGraphError):
    pass


class InvalidInstance(TemporalGraphError):
    pass


class Arc(NamedTuple):
    u: int
    v: int
    times: tuple[int, ...]


class Step(NamedTuple):
    """One traversed temporal arc ``(u -> v, time)``."""

    u: int
    v: int
    time: int


@dataclass(frozen=True)
class TemporalGraph:
    """Directed graph whose arcs carry sorted, duplicate-free timestamp sets."""

    vertex_names: tuple[str, ...]
    arcs: tuple[Arc, ...]
    horizon: int

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_names)

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.vertex_names)}

    @cached_property
    def temporal_arc_count(self) -> int:
        return sum(len(a.times) for a in self.arcs)

    @cached_property
    def out_steps(self) -> tuple[tuple[Step, ...], ...]:
        """Per vertex, its outgoing temporal arcs ordered by (target id, time)."""
        buckets: list[list[Step]] = [[] for _ in range(self.vertex_count)]
        for u, v, times in self.arcs:
            buckets[u].extend(Step(u, v, t) for t in times)
        return tuple(tuple(sorted(b, key=lambda s: (s.v, s.time))) for b in buckets)

    @cached_property
    def steps_by_time(self) -> tuple[Step, ...]:
        """All temporal arcs ordered by (time, tail, head)."""
        steps = [Step(u, v, t) for u, v, times in self.arcs for t in times]
        steps.sort(key=lambda s: (s.time, s.u, s.v))
        return tuple(steps)

    @cached_property
    def _step_set(self) -> frozenset[Step]:
        return frozenset(self.steps_by_time)

    def has_step(self, u: int, v: int, t: int) -> bool:
        return Step(u, v, t) in self._step_set

    def vertex_id(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {name!r}") from None


def build_graph(
    vertex_names: Sequence[str],
    arc_specs: Iterable[tuple[object, object, Iterable[int]]],
    horizon: int,
) -> TemporalGraph:
    """Validate and normalise a temporal graph.

    Arc endpoints may be given as vertex names or integer ids.  Records for the
    same ordered pair are merged; timestamps are sorted and deduplicated.
    """
    if horizon < 1:
        raise TimestampOutOfRange(f"horizon must be >= 1, got {horizon}")
    names = tuple(str(n) for n in vertex_names)
    index: dict[str, int] = {}
    for i, name in enumerate(names):
        if name in index:
            raise DuplicateVertex(f"duplicate vertex name {name!r}")
        index[name] = i

    def resolve(x: object) -> int:
        if isinstance(x, bool):
            raise UnknownVertex(f"unknown vertex {x!r}")
        if isinstance(x, int):
            if 0 <= x < len(names):
                return x
            raise UnknownVertex(f"vertex id {x} out of range")
        try:
            return index[str(x)]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {x!r}") from None

    merged: dict[tuple[int, int], set[int]] = {}
    for u_raw, v_raw, times in arc_specs:
        u, v = resolve(u_raw), resolve(v_raw)
        if u == v:
            raise SelfLoop(f"self-loop on {names[u]!r}")
        ts = [int(t) for t in times]
        if not ts:
            raise EmptyTimestampSet(f"arc {names[u]!r}->{names[v]!r} has no timestamps")
        for t in ts:
            if not 1 <= t <= horizon:
                raise TimestampOutOfRange(
                    f"arc {names[u]!r}->{names[v]!r}: timestamp {t} outside [1, {horizon}]"
                )
        merged.setdefault((u, v), set()).update(ts)

    arcs = tuple(Arc(u, v, tuple(sorted(ts))) for (u, v), ts in sorted(merged.items()))
    return TemporalGraph(names, arcs, horizon)


@dataclass(frozen=True)
class Instance:
    """A d-MinIntSep instance: graph, source, target and deadline."""

    graph: TemporalGraph
    source: int
    target: int
    deadline: int

    def __post_init__(self) -> None:
        n = self.graph.vertex_count
        if not (0 <= self.source < n and 0 <= self.target < n):
            raise UnknownVertex("source/target out of range")
        if self.source == self.target:
            raise InvalidInstance("source and target must differ")
        if not 1 <= self.deadline <= self.graph.horizon:
            raise InvalidInstance(
                f"deadline {self.deadline} outside [1, {self.graph.horizon}]"
            )

    @property
    def horizon(self) -> int:
        return self.graph.horizon

    def internal_vertices(self) -> list[int]:
        return [v for v in range(self.graph.vertex_count) if v not in (self.source, self.target)]


@dataclass(frozen=True)
class TemporalPath:
    """A strict temporal path: chained steps, strictly increasing times, distinct vertices."""

    steps: tuple[Step, ...]

    def __post_init__(self) -> None:
        steps = tuple(Step(*s) for s in self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise InvalidPath("a temporal path needs at least one step")
        for a, b in zip(steps, steps[1:]):
            if a.v != b.u:
                raise InvalidPath(f"steps do not chain: {a} then {b}")
            if not a.time < b.time:
                raise InvalidPath(f"times not strictly increasing: {a.time} then {b.time}")
        seen = self.vertices
        if len(set(seen)) != len(seen):
            raise InvalidPath(f"vertex repeated in {seen}")

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.steps[0].u,) + tuple(s.v for s in self.steps)

    @property
    def start_time(self) -> int:
        return self.steps[0].time

    @property
    def end_time(self) -> int:
        return self.steps[-1].time

    def check_in(self, graph: TemporalGraph) -> None:
        """Raise InvalidPath unless every step is a temporal arc of ``graph``."""
        for s in self.steps:
            if not graph.has_step(*s):
                raise InvalidPath(f"step {s} is not a temporal arc of the graph")

    def internal_steps(self) -> tuple[Step, ...]:
        """Steps leaving an internal vertex, i.e. every step but the first."""
        return self.steps[1:]

    def format(self, graph: TemporalGraph) -> str:
        names = graph.vertex_names
        parts = [names[self.steps[0].u]]
        for s in self.steps:
            parts.append(f"({names[s.u]}{names[s.v]},{s.time})")
            parts.append(names[s.v])
        return ", ".join(parts)


def traveling_time(path: TemporalPath) -> int:
    return path.steps[-1].time - path.steps[0].time + 1


@dataclass(frozen=True, order=True)
class Interval:
    """Closed, non-empty interval ``[lo, hi]``; the empty interval is ``None``."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if not 1 <= self.lo <= self.hi:
            raise InvalidTimeline(f"bad interval [{self.lo}, {self.hi}]")

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, t: object) -> bool:
        return isinstance(t, int) and self.lo <= t <= self.hi

    def hull(self, t: int) -> Interval:
        return Interval(min(self.lo, t), max(self.hi, t))


def interval_length(interval: Optional[Interval]) -> int:
    return 0 if interval is None else len(interval)


def separates(vertex: int, interval: Optional[Interval], path: TemporalPath) -> bool:
    """True iff ``path`` leaves ``vertex`` at a time inside ``interval``."""
    if interval is None:
        return False
    return any(s.u == vertex and s.time in interval for s in path.steps)


@dataclass(frozen=True)
class SeparatorTimeline:
    """Exactly one (possibly empty) interval per vertex of the host graph."""

    intervals: tuple[Optional[Interval], ...]

    @classmethod
    def empty(cls, vertex_count: int) -> SeparatorTimeline:
        return cls((None,) * vertex_count)

    @classmethod
    def from_mapping(
        cls, vertex_count: int, mapping: Mapping[int, Optional[Interval | tuple[int, int]]]
    ) -> SeparatorTimeline:
        ivs: list[Optional[Interval]] = [None] * vertex_count
        for v, iv in mapping.items():
            if not 0 <= v < vertex_count:
                raise UnknownVertex(f"vertex id {v} out of range")
            if iv is not None and not isinstance(iv, Interval):
                iv = Interval(*iv)
            ivs[v] = iv
        return cls(tuple(ivs))

    def __getitem__(self, v: int) -> Optional[Interval]:
        return self.intervals[v]

    def __len__(self) -> int:
        return len(self.intervals)

    def separator_vertices(self) -> list[int]:
        return [v for v, iv in enumerate(self.intervals) if iv is not None]

    def validate(self, instance: Instance) -> None:
        if len(self.intervals) != instance.graph.vertex_count:
            raise InvalidTimeline(
                f"timeline has {len(self.intervals)} entries, graph has "
                f"{instance.graph.vertex_count} vertices"
            )
        names = instance.graph.vertex_names
        for v in (instance.source, instance.target):
            if self.intervals[v] is not None:
                raise InvalidTimeline(f"endpoint {names[v]!r} must have an empty interval")
        for v, iv in enumerate(self.intervals):
            if iv is not None and iv.hi > instance.horizon:
                raise InvalidTimeline(
                    f"interval of {names[v]!r} exceeds horizon {instance.horizon}"
                )

    def separates(self, path: TemporalPath) -> bool:
        return any(
            (iv := self.intervals[s.u]) is not None and s.time in iv
            for s in path.internal_steps()
        )


def timeline_length(timeline: SeparatorTimeline) -> int:
    return sum(interval_length(iv) for iv in timeline.intervals)


@dataclass
class TimelineStats:
    length: int
    separator_vertices: int
    avg_interval: float = field(default=0.0)

    @classmethod
    def of(cls, timeline: SeparatorTimeline) -> TimelineStats:
        length = timeline_length(timeline)
        nsep = len(timeline.separator_vertices())
        return cls(length, nsep, length / nsep if nsep else 0.0)
