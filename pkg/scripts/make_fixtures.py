"""Regenerate the bundled test fixtures.

* ``ema_class_net.tntp``: a road-like network with 74 nodes and 258 arcs (the
  size of Eastern Massachusetts); seed 458 is one whose phase-1 peeling
  yields five s-z paths.
* ``grid_net.tntp``: a 4x4 bidirectional grid.
* ``gtfs_small/``: a synthetic two-hour feed (12 stops, 3 lines).

Usage: python scripts/make_fixtures.py [outdir]
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from tempsep.ingest.tntp import StaticGraph, format_tntp


def _connected(nodes: int, edges: set[tuple[int, int]]) -> bool:
    adj: dict[int, list[int]] = {v: [] for v in range(nodes)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen, stack = {0}, [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == nodes


def road_like(nodes: int, edges: int, seed: int) -> StaticGraph:
    """Delaunay triangulation of random points, longest edges dropped while
    the graph stays connected, until ``edges`` remain; both directions kept."""
    from scipy.spatial import Delaunay

    rng = np.random.default_rng(seed)
    pts = rng.random((nodes, 2))
    chosen: set[tuple[int, int]] = set()
    for simplex in Delaunay(pts).simplices:
        for a in range(3):
            for b in range(a + 1, 3):
                x, y = sorted((int(simplex[a]), int(simplex[b])))
                chosen.add((x, y))
    for e in sorted(chosen, key=lambda e: -np.linalg.norm(pts[e[0]] - pts[e[1]])):
        if len(chosen) <= edges:
            break
        chosen.discard(e)
        if not _connected(nodes, chosen):
            chosen.add(e)
    arcs = sorted(chosen | {(b, a) for a, b in chosen})
    return StaticGraph(tuple(str(i) for i in range(1, nodes + 1)), tuple(arcs))


def grid(k: int) -> StaticGraph:
    arcs = []
    for r in range(k):
        for c in range(k):
            v = r * k + c
            if c + 1 < k:
                arcs += [(v, v + 1), (v + 1, v)]
            if r + 1 < k:
                arcs += [(v, v + k), (v + k, v)]
    return StaticGraph(tuple(str(i) for i in range(1, k * k + 1)), tuple(sorted(arcs)))


def hhmmss(sec: int) -> str:
    return f"{sec // 3600:02d}:{sec % 3600 // 60:02d}:{sec % 60:02d}"


def gtfs_small(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    lines = {
        "A": ["S1", "S2", "S3", "S4", "S5", "S6"],
        "B": ["S7", "S2", "S8", "S5", "S9"],
        "C": ["S10", "S3", "S8", "S11", "S12"],
    }
    stops = sorted({s for seq in lines.values() for s in seq}, key=lambda x: int(x[1:]))
    (out / "stops.txt").write_text(
        "stop_id,stop_name,stop_lat,stop_lon\n"
        + "".join(f"{s},Stop {s[1:]},0,0\n" for s in stops)
    )
    trips, times = [], []
    for line, seq in lines.items():
        headway = {"A": 900, "B": 1200, "C": 1500}[line]
        for k, start in enumerate(range(5 * 60, 2 * 3600 + 1800, headway)):
            trip = f"{line}{k}"
            trips.append(f"{line},wk,{trip}\n")
            t = start
            for idx, stop in enumerate(seq, start=1):
                times.append(f"{trip},{hhmmss(t)},{hhmmss(t)},{stop},{idx}\n")
                t += 150 + 30 * idx
    (out / "trips.txt").write_text("route_id,service_id,trip_id\n" + "".join(trips))
    (out / "stop_times.txt").write_text(
        "trip_id,arrival_time,departure_time,stop_id,stop_sequence\n" + "".join(times)
    )


def main(outdir: str = "tests/fixtures") -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "ema_class_net.tntp").write_text(format_tntp(road_like(74, 129, seed=458)))
    (out / "grid_net.tntp").write_text(format_tntp(grid(4)))
    gtfs_small(out / "gtfs_small")


if __name__ == "__main__":
    main(*sys.argv[1:])
