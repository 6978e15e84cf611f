"""Command-line front end.

Exit codes: 0 success, 1 unreadable or invalid input, 2 unseparable instance,
3 timeout (incumbent still written), 4 timeline is not a separator,
5 generation/ingestion failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .core import Instance, TemporalGraphError
from .ingest.gtfs import GtfsError, GtfsParams, load_gtfs, parse_time, select_endpoints_gtfs
from .ingest.synth import SynthesisError, SynthesisParams, synthesize
from .ingest.tntp import TntpError, load_tntp
from .io import (
    FormatError,
    RunRecord,
    append_record,
    format_instance,
    format_timeline,
    parse_timeline,
    read_instance,
)
from .pathfind import count_paths, find_violating_path
from .reduction import InvalidSetCover, SetCoverInstance, from_set_cover
from .solver import SolverConfig, TimeoutExceeded, Unseparable, solve_exact, solve_greedy

log = logging.getLogger("tempsep")

EXIT_OK, EXIT_INPUT, EXIT_UNSEPARABLE, EXIT_TIMEOUT, EXIT_NOT_SEPARATOR, EXIT_GENERATE = range(6)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"{path}: {exc.strerror}") from None


def _load_instance(path: str) -> Instance:
    try:
        return read_instance(path)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"{path}: {exc.strerror}") from None
    except FormatError as exc:
        raise CliError(EXIT_INPUT, f"{path}: {exc}") from None


def _write(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition("-")
    try:
        a = int(lo)
        b = int(hi) if hi else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO-HI, got {text!r}") from None
    return a, b


def _clock(text: str) -> int:
    if text.isdigit():
        return int(text)
    try:
        return parse_time(text)
    except GtfsError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _solve_one(args: argparse.Namespace, instance_path: str) -> tuple[int, Optional[RunRecord]]:
    instance = _load_instance(instance_path)
    timeline_out = args.timeline_out or str(Path(instance_path).with_suffix(".timeline.json"))
    code = EXIT_OK
    try:
        if args.mode == "greedy":
            report = solve_greedy(instance, args.path_limit)
        else:
            config = SolverConfig(timeout=args.timeout, backend=args.backend,
                                  batch_size=args.batch_size, path_limit=args.path_limit)
            report = solve_exact(instance, config)
    except Unseparable as exc:
        print(f"{instance_path}: unseparable: {exc}", file=sys.stderr)
        return EXIT_UNSEPARABLE, None
    except TimeoutExceeded as exc:
        print(f"{instance_path}: {exc}", file=sys.stderr)
        report = exc.report
        code = EXIT_TIMEOUT
    _write(timeline_out, format_timeline(report.timeline, instance))
    count = count_paths(instance, args.budget) if args.budget > 0 else None
    record = RunRecord(
        dataset=args.dataset or Path(instance_path).stem,
        vertices=instance.graph.vertex_count,
        temporal_arcs=instance.graph.temporal_arc_count,
        TS=instance.horizon,
        d=instance.deadline,
        SL=report.length,
        V_sep=report.separator_vertices,
        avg_int=report.avg_interval,
        path_count="" if count is None else str(count.value),
        path_count_exact=None if count is None else count.exact,
        time_s=report.wall_time,
        mode=report.mode if report.optimal or report.mode != "exact" else "exact-timeout",
        seed=args.seed or "",
    )
    return code, record


def _solve_worker(payload: tuple[argparse.Namespace, str]) -> tuple[int, Optional[RunRecord], str]:
    args, path = payload
    try:
        code, record = _solve_one(args, path)
        return code, record, ""
    except CliError as exc:
        return exc.code, None, str(exc)


def cmd_solve(args: argparse.Namespace) -> int:
    if args.manifest:
        base = Path(args.manifest).parent
        paths = [
            str(base / line.strip())
            for line in _read_text(args.manifest).splitlines()
            if line.strip() and not line.startswith("#")
        ]
        if args.timeline_out:
            raise CliError(EXIT_INPUT, "--timeline-out cannot be combined with --manifest")
        payloads = [(args, p) for p in paths]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_solve_worker, payloads))
        else:
            results = [_solve_worker(p) for p in payloads]
        worst = EXIT_OK
        for path, (code, record, message) in zip(paths, results):
            if message:
                print(message, file=sys.stderr)
            if record is not None:
                _emit(args, record)
            worst = max(worst, code)
        return worst
    if not args.instance:
        raise CliError(EXIT_INPUT, "solve needs an instance file or --manifest")
    code, record = _solve_one(args, args.instance)
    if record is not None:
        _emit(args, record)
    return code


def _emit(args: argparse.Namespace, record: RunRecord) -> None:
    if args.report:
        append_record(args.report, record)
    print(",".join(record.row()))


def cmd_verify(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance)
    try:
        timeline = parse_timeline(_read_text(args.timeline), instance)
    except FormatError as exc:
        raise CliError(EXIT_INPUT, f"{args.timeline}: {exc}") from None
    path = find_violating_path(instance, timeline)
    if path is None:
        return EXIT_OK
    print(path.format(instance.graph))
    print("timeline does not separate the path above", file=sys.stderr)
    return EXIT_NOT_SEPARATOR


def cmd_generate(args: argparse.Namespace) -> int:
    text = _read_text(args.tntp)
    try:
        static = load_tntp(text)
        params = SynthesisParams(
            seed=args.seed,
            horizon=args.horizon,
            path_labels=args.path_labels,
            background_labels=args.background_labels,
            deadline_multiplier=args.deadline_multiplier,
            stream=args.name if args.name is not None else Path(args.tntp).stem,
        )
        instance = synthesize(static, params)
    except (TntpError, ValueError) as exc:
        code = EXIT_GENERATE if isinstance(exc, SynthesisError) else EXIT_INPUT
        raise CliError(code, f"{args.tntp}: {exc}") from None
    _write(args.output, format_instance(instance))
    return EXIT_OK


def cmd_ingest_gtfs(args: argparse.Namespace) -> int:
    try:
        params = GtfsParams(
            window_start=args.window_start,
            window_seconds=args.window,
            bin_seconds=args.bin,
            source_percentile=args.source_percentile,
            target_percentile=args.target_percentile,
            initial_pool=args.pool,
            candidate_pool_growth=args.pool_growth,
            trim_horizon=args.trim,
        )
        graph = load_gtfs(args.feed, params)
        s, z, d = select_endpoints_gtfs(graph, params)
    except GtfsError as exc:
        raise CliError(EXIT_GENERATE, f"{args.feed}: {exc}") from None
    except (ValueError, TemporalGraphError) as exc:
        raise CliError(EXIT_INPUT, f"{args.feed}: {exc}") from None
    print(f"horizon={graph.horizon} trimmed={params.trim_horizon}", file=sys.stderr)
    _write(args.output, format_instance(Instance(graph, s, z, d)))
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    try:
        sc = SetCoverInstance.parse(_read_text(args.setcover))
    except InvalidSetCover as exc:
        raise CliError(EXIT_INPUT, f"{args.setcover}: {exc}") from None
    ri = from_set_cover(sc)
    _write(args.output, format_instance(ri.instance))
    if args.windows_out:
        doc = {
            "big_m": ri.big_m,
            "deadline": ri.instance.deadline,
            "windows": {str(i): list(w) for i, w in sorted(ri.element_windows.items())},
        }
        _write(args.windows_out, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_count(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance)
    print(count_paths(instance, args.budget))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tempsep", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a minimum separator timeline")
    p.add_argument("instance", nargs="?")
    p.add_argument("--mode", choices=["exact", "greedy"], default="exact")
    p.add_argument("--timeout", type=float, default=3600.0)
    p.add_argument("--budget", type=int, default=1_000_000,
                   help="search-node budget for exact path counting (0 skips counting)")
    p.add_argument("--backend", choices=["bnb", "milp"], default="bnb")
    p.add_argument("--batch-size", type=int, default=1)
    p.add_argument("--path-limit", type=int, default=200)
    p.add_argument("--timeline-out")
    p.add_argument("--report", help="CSV report to append to")
    p.add_argument("--dataset")
    p.add_argument("--seed", help="recorded in the report only")
    p.add_argument("--manifest", help="file listing instance paths, one per line")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a timeline against an instance")
    p.add_argument("instance")
    p.add_argument("timeline")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="synthesise an instance from a TNTP network")
    p.add_argument("tntp")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--horizon", type=int, default=50)
    p.add_argument("--path-labels", type=_range, default=(4, 8))
    p.add_argument("--background-labels", type=_range, default=(2, 5))
    p.add_argument("--deadline-multiplier", type=int, default=3)
    p.add_argument("--name", help="RNG stream name (default: file stem)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("ingest-gtfs", help="build an instance from a GTFS directory")
    p.add_argument("feed")
    p.add_argument("--window-start", type=_clock, default=0, help="seconds or HH:MM:SS")
    p.add_argument("--window", type=int, default=7200)
    p.add_argument("--bin", type=int, default=60)
    p.add_argument("--source-percentile", type=float, default=0.10)
    p.add_argument("--target-percentile", type=float, default=0.50)
    p.add_argument("--pool", type=int, default=3)
    p.add_argument("--pool-growth", type=int, default=3)
    p.add_argument("--trim", action="store_true", help="drop empty leading/trailing bins")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_ingest_gtfs)

    p = sub.add_parser("reduce", help="encode a set cover instance")
    p.add_argument("setcover")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--windows-out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("count", help="count deadline-feasible s-z paths")
    p.add_argument("instance")
    p.add_argument("--budget", type=int, default=1_000_000)
    p.set_defaults(func=cmd_count)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
