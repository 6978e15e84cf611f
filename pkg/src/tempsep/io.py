"""Native instance / timeline documents (JSON) and the CSV run report."""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Optional

from .core import (
    Instance,
    Interval,
    SeparatorTimeline,
    TemporalGraphError,
    build_graph,
)

FORMAT_VERSION = 1
REPORT_SCHEMA = "# tempsep-report v1"


class FormatError(ValueError):
    """Malformed instance or timeline document; message names the line or field."""


def _load_json(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{what}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _field(doc: dict, key: str, kind: type | tuple[type, ...]) -> Any:
    if key not in doc:
        raise FormatError(f"missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise FormatError(f"field {key!r} has wrong type {type(value).__name__}")
    return value


def instance_from_dict(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise FormatError("instance document must be an object")
    version = _field(doc, "version", int)
    if version != FORMAT_VERSION:
        raise FormatError(f"field 'version': unsupported version {version}")
    horizon = _field(doc, "T", int)
    vertices = _field(doc, "vertices", list)
    arcs_doc = _field(doc, "arcs", list)
    specs = []
    for k, arc in enumerate(arcs_doc):
        if not isinstance(arc, dict) or not {"u", "v", "times"} <= arc.keys():
            raise FormatError(f"field 'arcs[{k}]' needs u, v and times")
        if not isinstance(arc["times"], list) or not all(
            isinstance(t, int) and not isinstance(t, bool) for t in arc["times"]
        ):
            raise FormatError(f"field 'arcs[{k}].times' must be a list of integers")
        specs.append((str(arc["u"]), str(arc["v"]), arc["times"]))
    try:
        graph = build_graph([str(v) for v in vertices], specs, horizon)
        return Instance(
            graph,
            graph.vertex_id(str(_field(doc, "source", str))),
            graph.vertex_id(str(_field(doc, "target", str))),
            _field(doc, "deadline", int),
        )
    except TemporalGraphError as exc:
        raise FormatError(str(exc)) from None


def parse_instance(text: str) -> Instance:
    return instance_from_dict(_load_json(text, "instance"))


def format_instance(instance: Instance) -> str:
    """Canonical text: fixed field order, one arc per line, arcs sorted by ids."""
    g = instance.graph
    names = g.vertex_names
    arc_lines = [
        "    " + json.dumps({"u": names[u], "v": names[v], "times": list(ts)})
        for u, v, ts in g.arcs
    ]
    parts = [
        "{",
        f'  "version": {FORMAT_VERSION},',
        f'  "T": {g.horizon},',
        f'  "vertices": {json.dumps(list(names))},',
        '  "arcs": [' + ("\n" + ",\n".join(arc_lines) + "\n  ]," if arc_lines else "],"),
        f'  "source": {json.dumps(names[instance.source])},',
        f'  "target": {json.dumps(names[instance.target])},',
        f'  "deadline": {instance.deadline}',
        "}",
    ]
    return "\n".join(parts) + "\n"


def read_instance(path: str | os.PathLike) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def write_instance(instance: Instance, path: str | os.PathLike) -> None:
    Path(path).write_text(format_instance(instance), encoding="utf-8")


def parse_timeline(text: str, instance: Instance) -> SeparatorTimeline:
    """Read ``{vertex_name: [l, r] | null}``; unnamed vertices get empty intervals."""
    doc = _load_json(text, "timeline")
    if not isinstance(doc, dict):
        raise FormatError("timeline document must be an object")
    g = instance.graph
    mapping: dict[int, Optional[Interval]] = {}
    for name, value in doc.items():
        if name not in g.index:
            raise FormatError(f"field {name!r}: unknown vertex")
        if value is None:
            continue
        if (
            not isinstance(value, list)
            or len(value) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in value)
        ):
            raise FormatError(f"field {name!r}: expected [l, r] or null")
        try:
            mapping[g.index[name]] = Interval(*value)
        except TemporalGraphError as exc:
            raise FormatError(f"field {name!r}: {exc}") from None
    timeline = SeparatorTimeline.from_mapping(g.vertex_count, mapping)
    try:
        timeline.validate(instance)
    except TemporalGraphError as exc:
        raise FormatError(str(exc)) from None
    return timeline


def format_timeline(timeline: SeparatorTimeline, instance: Instance) -> str:
    names = instance.graph.vertex_names
    lines = []
    for v, iv in enumerate(timeline.intervals):
        value = "null" if iv is None else f"[{iv.lo}, {iv.hi}]"
        lines.append(f"  {json.dumps(names[v])}: {value}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


@dataclass
class RunRecord:
    dataset: str
    vertices: int
    temporal_arcs: int
    TS: int
    d: int
    SL: int
    V_sep: int
    avg_int: float
    path_count: str
    path_count_exact: Optional[bool]
    time_s: float
    mode: str
    seed: str = ""

    @classmethod
    def header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def row(self) -> list[str]:
        out = []
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "avg_int":
                value = f"{value:.2f}"
            elif f.name == "time_s":
                value = f"{value:.3f}"
            elif f.name == "path_count_exact":
                value = "" if value is None else ("exact" if value else "walks")
            out.append(str(value))
        return out


def append_record(path: str | os.PathLike, record: RunRecord) -> None:
    """Append one row, writing the schema line and header first if the file is new."""
    path = Path(path)
    fresh = not path.exists() or path.stat().st_size == 0
    with path.open("a", newline="", encoding="utf-8") as fh:
        if fresh:
            fh.write(REPORT_SCHEMA + "\n")
            csv.writer(fh).writerow(RunRecord.header())
        csv.writer(fh).writerow(record.row())


def read_records(path: str | os.PathLike) -> list[dict[str, str]]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first != REPORT_SCHEMA:
            raise FormatError(f"report: unexpected schema line {first!r}")
        return list(csv.DictReader(fh))
