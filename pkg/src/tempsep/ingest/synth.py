"""Temporal instances from static transportation networks.

Phase 1 peels hop-shortest s-z paths off the network (deleting each path's
internal vertices) and gives every arc on them several timestamps.  Phase 2
gives each surviving arc a few background timestamps.  Arcs lost to a
deletion stay unlabelled; their vertices remain in the output graph.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from ..core import Instance, build_graph
from .rng import PortableRng
from .tntp import StaticGraph


class SynthesisError(ValueError):
    pass


class NoPath(SynthesisError):
    pass


class DegenerateEndpoints(SynthesisError):
    pass


@dataclass(frozen=True)
class SynthesisParams:
    seed: int
    horizon: int = 50
    path_labels: tuple[int, int] = (4, 8)
    background_labels: tuple[int, int] = (2, 5)
    deadline_multiplier: int = 3
    stream: str = ""

    def __post_init__(self) -> None:
        for name in ("path_labels", "background_labels"):
            lo, hi = getattr(self, name)
            if not 1 <= lo <= hi:
                raise ValueError(f"{name} must be a non-empty range of positive counts")
            if hi > self.horizon:
                raise ValueError(f"{name} upper bound {hi} exceeds horizon {self.horizon}")
        if self.deadline_multiplier < 1:
            raise ValueError("deadline_multiplier must be >= 1")


@dataclass
class Synthesis:
    instance: Instance
    paths: list[list[int]] = field(default_factory=list)

    @property
    def path_arc_counts(self) -> list[int]:
        return [len(p) - 1 for p in self.paths]


def choose_endpoints(static: StaticGraph) -> tuple[int, int]:
    """Max out-degree source and max in-degree target, ties to the lowest id."""
    if static.vertex_count < 2:
        raise DegenerateEndpoints("need at least two vertices")
    outdeg, indeg = static.out_degrees(), static.in_degrees()
    s = min(range(static.vertex_count), key=lambda v: (-outdeg[v], v))
    ranked = sorted(range(static.vertex_count), key=lambda v: (-indeg[v], v))
    z = ranked[0] if ranked[0] != s else ranked[1]
    return s, z


def _bfs_path(adj: list[list[int]], alive: list[bool], removed: set[tuple[int, int]],
              s: int, z: int) -> Optional[list[int]]:
    pred = {s: s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w in pred or not alive[w] or (u, w) in removed:
                continue
            pred[w] = u
            if w == z:
                path = [z]
                while path[-1] != s:
                    path.append(pred[path[-1]])
                return path[::-1]
            queue.append(w)
    return None


def extract_paths(static: StaticGraph, s: int, z: int) -> tuple[list[list[int]], list[bool], set]:
    """Phase 1 peeling.  Returns the paths, the surviving-vertex mask and
    the set of arcs removed without deleting a vertex (direct s-z arcs)."""
    adj: list[list[int]] = [[] for _ in range(static.vertex_count)]
    for u, v in static.arcs:
        adj[u].append(v)
    for row in adj:
        row.sort()
    alive = [True] * static.vertex_count
    removed: set[tuple[int, int]] = set()
    paths: list[list[int]] = []
    while (path := _bfs_path(adj, alive, removed, s, z)) is not None:
        paths.append(path)
        if len(path) == 2:
            removed.add((s, z))
        for v in path[1:-1]:
            alive[v] = False
    return paths, alive, removed


def deadline_rule(first_path_arcs: int, horizon: int, multiplier: int = 3) -> int:
    d = min(first_path_arcs * multiplier, horizon)
    return max(d, math.ceil(horizon / 2))


def synthesize_detailed(static: StaticGraph, params: SynthesisParams) -> Synthesis:
    s, z = choose_endpoints(static)
    paths, alive, removed = extract_paths(static, s, z)
    if not paths:
        raise NoPath(f"{static.names[s]} cannot reach {static.names[z]}")
    rng = PortableRng(params.seed, params.stream)
    T = params.horizon
    labels: dict[tuple[int, int], list[int]] = {}
    for path in paths:
        for arc in zip(path, path[1:]):
            k = rng.between(*params.path_labels)
            labels[arc] = rng.sample(1, T, k)
    d = deadline_rule(len(paths[0]) - 1, T, params.deadline_multiplier)
    for u, v in static.arcs:
        if (u, v) in labels or (u, v) in removed or not (alive[u] and alive[v]):
            continue
        k = rng.between(*params.background_labels)
        labels[(u, v)] = rng.sample(1, T, k)
    graph = build_graph(static.names, [(u, v, ts) for (u, v), ts in labels.items()], T)
    return Synthesis(Instance(graph, s, z, d), paths)


def synthesize(static: StaticGraph, params: SynthesisParams) -> Instance:
    return synthesize_detailed(static, params).instance
