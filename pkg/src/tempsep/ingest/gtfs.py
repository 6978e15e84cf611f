"""Temporal graphs from GTFS feeds, cut to a time window and binned."""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..core import Instance, TemporalGraph, build_graph
from ..pathfind import min_traveling_time


class GtfsError(ValueError):
    pass


class MissingFile(GtfsError):
    pass


class MalformedTime(GtfsError):
    pass


class EmptyWindow(GtfsError):
    pass


class NoFeasiblePair(GtfsError):
    pass


@dataclass(frozen=True)
class GtfsParams:
    window_start: int = 0
    window_seconds: int = 7200
    bin_seconds: int = 60
    source_percentile: float = 0.10
    target_percentile: float = 0.50
    initial_pool: int = 3
    candidate_pool_growth: int = 3
    trim_horizon: bool = False

    def __post_init__(self) -> None:
        if self.bin_seconds < 1 or self.window_seconds < self.bin_seconds:
            raise ValueError("need 1 <= bin_seconds <= window_seconds")
        if self.window_seconds % self.bin_seconds:
            raise ValueError("bin_seconds must divide window_seconds")
        for p in (self.source_percentile, self.target_percentile):
            if not 0 < p <= 1:
                raise ValueError("percentiles must lie in (0, 1]")
        if self.initial_pool < 1 or self.candidate_pool_growth < 1:
            raise ValueError("pool sizes must be >= 1")

    @property
    def bins(self) -> int:
        return self.window_seconds // self.bin_seconds


def parse_time(text: str) -> int:
    """``H:MM:SS`` to seconds; hours may exceed 23 as GTFS allows."""
    parts = text.strip().split(":")
    if len(parts) != 3 or not all(p.isdigit() for p in parts):
        raise MalformedTime(f"bad time {text!r}")
    h, m, s = (int(p) for p in parts)
    if m > 59 or s > 59:
        raise MalformedTime(f"bad time {text!r}")
    return h * 3600 + m * 60 + s


def _read(path: Path) -> list[dict[str, str]]:
    if not path.is_file():
        raise MissingFile(f"missing {path.name}")
    with path.open(newline="", encoding="utf-8-sig") as fh:
        return [{k.strip(): (v or "").strip() for k, v in row.items() if k} for row in csv.DictReader(fh)]


def bin_time(departure: int, params: GtfsParams) -> Optional[int]:
    offset = departure - params.window_start
    if not 0 <= offset < params.window_seconds:
        return None
    return min(max(math.ceil(offset / params.bin_seconds), 1), params.bins)


def load_gtfs(feed: str | Path, params: GtfsParams = GtfsParams()) -> TemporalGraph:
    feed = Path(feed)
    stops = _read(feed / "stops.txt")
    trips = _read(feed / "trips.txt")
    stop_times = _read(feed / "stop_times.txt")
    names = [row["stop_id"] for row in stops]
    known_stops = set(names)
    known_trips = {row["trip_id"] for row in trips}

    by_trip: dict[str, list[tuple[int, str, str]]] = defaultdict(list)
    for lineno, row in enumerate(stop_times, start=2):
        try:
            trip, stop, seq = row["trip_id"], row["stop_id"], int(row["stop_sequence"])
            dep = row["departure_time"]
        except (KeyError, ValueError) as exc:
            raise GtfsError(f"stop_times.txt line {lineno}: {exc}") from None
        if trip not in known_trips:
            raise GtfsError(f"stop_times.txt line {lineno}: unknown trip {trip!r}")
        if stop not in known_stops:
            raise GtfsError(f"stop_times.txt line {lineno}: unknown stop {stop!r}")
        by_trip[trip].append((seq, stop, dep))

    arcs: dict[tuple[str, str], set[int]] = defaultdict(set)
    for trip in sorted(by_trip):
        calls = sorted(by_trip[trip])
        for (_, p, dep), (_, q, _) in zip(calls, calls[1:]):
            if p == q or not dep:
                continue
            t = bin_time(parse_time(dep), params)
            if t is not None:
                arcs[(p, q)].add(t)
    if not arcs:
        raise EmptyWindow("no departures inside the time window")

    horizon = params.bins
    if params.trim_horizon:
        first = min(min(ts) for ts in arcs.values())
        last = max(max(ts) for ts in arcs.values())
        arcs = {k: {t - first + 1 for t in ts} for k, ts in arcs.items()}
        horizon = last - first + 1
    return build_graph(names, [(p, q, ts) for (p, q), ts in sorted(arcs.items())], horizon)


def select_endpoints_gtfs(graph: TemporalGraph,
                          params: GtfsParams = GtfsParams()) -> tuple[int, int, int]:
    """Degree-ranked (source, target) pair with a temporal path, and its deadline.

    Sources are ranked by temporal out-degree over the first
    ``source_percentile`` of the horizon, targets by temporal in-degree over
    the last ``target_percentile``; ties go to the lower vertex id.  Both pools
    grow until some pair is connected.  The deadline is twice the smallest
    traveling time, capped at the horizon.
    """
    n, T = graph.vertex_count, graph.horizon
    if n < 2:
        raise NoFeasiblePair("graph has fewer than two vertices")
    early = math.ceil(params.source_percentile * T)
    late = T - math.ceil(params.target_percentile * T) + 1
    outdeg, indeg = [0] * n, [0] * n
    for u, v, t in graph.steps_by_time:
        if t <= early:
            outdeg[u] += 1
        if t >= late:
            indeg[v] += 1
    sources = sorted(range(n), key=lambda v: (-outdeg[v], v))
    targets = sorted(range(n), key=lambda v: (-indeg[v], v))
    tried: set[tuple[int, int]] = set()
    k = min(params.initial_pool, n)
    while True:
        for s in sources[:k]:
            for z in targets[:k]:
                if s == z or (s, z) in tried:
                    continue
                tried.add((s, z))
                mtt = min_traveling_time(Instance(graph, s, z, T))
                if mtt is not None:
                    return s, z, min(2 * mtt, T)
        if k >= n:
            raise NoFeasiblePair("no connected source/target pair")
        k = min(n, k + params.candidate_pool_growth)
