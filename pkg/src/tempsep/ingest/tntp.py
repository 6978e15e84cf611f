"""Reader/writer for TNTP ``*_net.tntp`` network files (topology only)."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional


class TntpError(ValueError):
    pass


class ParseError(TntpError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class InconsistentHeader(TntpError):
    pass


@dataclass(frozen=True)
class StaticGraph:
    names: tuple[str, ...]
    arcs: tuple[tuple[int, int], ...]
    coords: Optional[tuple[tuple[float, float], ...]] = None

    @property
    def vertex_count(self) -> int:
        return len(self.names)

    def out_degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for u, _ in self.arcs:
            deg[u] += 1
        return deg

    def in_degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for _, v in self.arcs:
            deg[v] += 1
        return deg


_META = re.compile(r"^<([^>]+)>\s*(.*)$")


def load_tntp(text: str) -> StaticGraph:
    meta: dict[str, str] = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line or line.startswith("~"):
            continue
        m = _META.match(line)
        if m is None:
            raise ParseError(i, f"expected metadata tag, got {line[:40]!r}")
        key = m.group(1).strip().upper()
        if key == "END OF METADATA":
            break
        meta[key] = m.group(2).strip()
    else:
        raise ParseError(i, "missing <END OF METADATA>")

    try:
        n_nodes = int(meta["NUMBER OF NODES"])
        n_links = int(meta["NUMBER OF LINKS"])
    except KeyError as exc:
        raise ParseError(i, f"missing header field {exc.args[0]}") from None
    except ValueError as exc:
        raise ParseError(i, f"bad header value: {exc}") from None

    init_col, term_col = 0, 1
    arcs: set[tuple[int, int]] = set()
    rows = 0
    for lineno in range(i + 1, len(lines) + 1):
        raw = lines[lineno - 1].strip()
        if not raw:
            continue
        if raw.startswith("~"):
            cols = raw.lstrip("~").replace(";", " ").lower().split()
            if "init_node" in cols and "term_node" in cols:
                init_col, term_col = cols.index("init_node"), cols.index("term_node")
            continue
        fields = raw.rstrip(";").split()
        try:
            a, b = int(fields[init_col]), int(fields[term_col])
        except (IndexError, ValueError):
            raise ParseError(lineno, f"cannot read init/term node from {raw[:60]!r}") from None
        for x in (a, b):
            if not 1 <= x <= n_nodes:
                raise ParseError(lineno, f"node {x} outside 1..{n_nodes}")
        if a == b:
            raise ParseError(lineno, f"self-loop on node {a}")
        rows += 1
        arcs.add((a - 1, b - 1))
    if rows != n_links:
        raise InconsistentHeader(f"header declares {n_links} links, file has {rows}")
    names = tuple(str(k) for k in range(1, n_nodes + 1))
    return StaticGraph(names, tuple(sorted(arcs)))


def format_tntp(graph: StaticGraph) -> str:
    out = [
        "<NUMBER OF ZONES> 0",
        f"<NUMBER OF NODES> {graph.vertex_count}",
        "<FIRST THRU NODE> 1",
        f"<NUMBER OF LINKS> {len(graph.arcs)}",
        "<END OF METADATA>",
        "",
        "",
        "~\tinit_node\tterm_node\tcapacity\tlength\tfree_flow_time\tb\tpower\tspeed\ttoll\tlink_type\t;",
    ]
    for u, v in graph.arcs:
        out.append(f"\t{u + 1}\t{v + 1}\t1\t1\t1\t0.15\t4\t0\t0\t1\t;")
    return "\n".join(out) + "\n"
