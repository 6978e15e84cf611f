import pytest

from tempsep.core import Instance, build_graph
from tempsep.ingest.gtfs import (
    GtfsParams,
    MalformedTime,
    MissingFile,
    NoFeasiblePair,
    bin_time,
    load_gtfs,
    parse_time,
    select_endpoints_gtfs,
)
from tempsep.ingest.rng import PortableRng
from tempsep.ingest.synth import (
    DegenerateEndpoints,
    NoPath,
    SynthesisParams,
    deadline_rule,
    synthesize,
    synthesize_detailed,
)
from tempsep.ingest.tntp import InconsistentHeader, ParseError, StaticGraph, format_tntp, load_tntp
from tempsep.io import format_instance

from instances import FIXTURES, brute_min_trt

HEADER = "<NUMBER OF NODES> {n}\n<NUMBER OF LINKS> {m}\n<END OF METADATA>\n~ init_node term_node ;\n"


def tntp(n, links):
    return HEADER.format(n=n, m=len(links)) + "".join(f"{u} {v} 1 ;\n" for u, v in links)


# --- TNTP ---------------------------------------------------------------

def test_tntp_fixture_counts():
    static = load_tntp((FIXTURES / "ema_class_net.tntp").read_text())
    assert static.vertex_count == 74 and len(static.arcs) == 258
    grid = load_tntp((FIXTURES / "grid_net.tntp").read_text())
    assert grid.vertex_count == 16 and len(grid.arcs) == 48


def test_tntp_round_trip():
    static = load_tntp(tntp(3, [(1, 2), (2, 3)]))
    assert load_tntp(format_tntp(static)) == static


def test_tntp_zero_links():
    static = load_tntp(tntp(3, []))
    assert static.vertex_count == 3 and static.arcs == ()


def test_tntp_header_mismatch():
    text = HEADER.format(n=3, m=2) + "1 2 1 ;\n"
    with pytest.raises(InconsistentHeader):
        load_tntp(text)


def test_tntp_parse_error_names_line():
    text = tntp(3, [(1, 2)]) + "1 x 1 ;\n"
    text = text.replace("<NUMBER OF LINKS> 1", "<NUMBER OF LINKS> 2")
    with pytest.raises(ParseError) as info:
        load_tntp(text)
    assert info.value.lineno == 6


def test_tntp_rejects_self_loop_and_unknown_node():
    with pytest.raises(ParseError):
        load_tntp(tntp(3, [(2, 2)]))
    with pytest.raises(ParseError):
        load_tntp(tntp(3, [(1, 4)]))


# --- synthesis ----------------------------------------------------------

def _ema():
    return load_tntp((FIXTURES / "ema_class_net.tntp").read_text())


def test_deadline_rule():
    assert deadline_rule(2, 50) == 25
    assert deadline_rule(10, 50) == 30
    assert deadline_rule(30, 50) == 50


def test_synthesis_is_deterministic():
    params = SynthesisParams(seed=11, stream="ema")
    a = format_instance(synthesize(_ema(), params))
    b = format_instance(synthesize(_ema(), params))
    assert a == b
    other = format_instance(synthesize(_ema(), SynthesisParams(seed=12, stream="ema")))
    assert a != other


@pytest.mark.parametrize("name", ["ema_class_net", "grid_net"])
def test_golden_files(name):
    static = load_tntp((FIXTURES / f"{name}.tntp").read_text())
    instance = synthesize(static, SynthesisParams(seed=7, stream=name))
    assert format_instance(instance) == (FIXTURES / "golden" / f"{name}_seed7.json").read_text()


@pytest.mark.parametrize("seed", range(5))
def test_synthesis_invariants(seed):
    static = _ema()
    params = SynthesisParams(seed=seed)
    result = synthesize_detailed(static, params)
    inst = result.instance
    g = inst.graph
    assert g.horizon == 50 and inst.deadline == 25
    # disjoint internal vertices across the extracted paths
    internals = [v for p in result.paths for v in p[1:-1]]
    assert len(internals) == len(set(internals))
    static_arcs = set(static.arcs)
    for u, v, times in g.arcs:
        assert (u, v) in static_arcs
        assert all(1 <= t <= 50 for t in times)
    on_path = {arc for p in result.paths for arc in zip(p, p[1:])}
    for u, v, times in g.arcs:
        lo, hi = params.path_labels if (u, v) in on_path else params.background_labels
        assert lo <= len(times) <= hi


def test_synthesis_errors():
    with pytest.raises(DegenerateEndpoints):
        synthesize(StaticGraph(("1",), (), None), SynthesisParams(seed=1))
    with pytest.raises(NoPath):
        synthesize(load_tntp(tntp(6, [(2, 1), (3, 1), (4, 5), (4, 6)])), SynthesisParams(seed=1))


def test_rng_is_portable():
    a = PortableRng(5, "x")
    b = PortableRng(5, "x")
    draws = [a.between(1, 100) for _ in range(20)]
    assert draws == [b.between(1, 100) for _ in range(20)]
    assert PortableRng(5, "y").between(1, 10**9) != PortableRng(5, "x").between(1, 10**9)
    sample = PortableRng(3).sample(1, 50, 8)
    assert sample == sorted(set(sample)) and len(sample) == 8


# --- GTFS ---------------------------------------------------------------

def test_parse_time():
    assert parse_time("00:05:00") == 300
    assert parse_time("25:00:01") == 90001
    for bad in ("5:00", "00:61:00", "ab:00:00"):
        with pytest.raises(MalformedTime):
            parse_time(bad)


def test_bin_time():
    params = GtfsParams()
    assert bin_time(300, params) == 5
    assert bin_time(0, params) == 1
    assert bin_time(7199, params) == 120
    assert bin_time(7200, params) is None


def test_gtfs_fixture_shape():
    params = GtfsParams()
    graph = load_gtfs(FIXTURES / "gtfs_small", params)
    assert graph.vertex_count == 12
    assert graph.horizon <= 120
    s, z, d = select_endpoints_gtfs(graph, params)
    mtt = brute_min_trt(Instance(graph, s, z, 1))
    assert mtt is not None
    assert d == min(2 * mtt, graph.horizon)


def test_gtfs_trim_option():
    graph = load_gtfs(FIXTURES / "gtfs_small", GtfsParams(trim_horizon=True))
    assert min(min(ts) for _, _, ts in graph.arcs) == 1
    assert graph.horizon <= 120


def _write_feed(tmp_path, rows):
    (tmp_path / "stops.txt").write_text("stop_id\nA\nB\nC\n")
    (tmp_path / "trips.txt").write_text("trip_id\nt1\nt2\n")
    (tmp_path / "stop_times.txt").write_text(
        "trip_id,arrival_time,departure_time,stop_id,stop_sequence\n" + "".join(rows)
    )
    return tmp_path


def test_gtfs_single_arc(tmp_path):
    feed = _write_feed(tmp_path, ["t1,00:05:00,00:05:00,A,1\n", "t1,00:07:00,00:07:00,B,2\n"])
    graph = load_gtfs(feed)
    assert graph.arcs == ((0, 1, (5,)),)
    s, z, d = select_endpoints_gtfs(graph)
    assert (s, z, d) == (0, 1, 2)


def test_gtfs_trip_after_window_is_dropped(tmp_path):
    feed = _write_feed(tmp_path, [
        "t1,00:05:00,00:05:00,A,1\n", "t1,00:07:00,00:07:00,B,2\n",
        "t2,03:00:00,03:00:00,B,1\n", "t2,03:05:00,03:05:00,C,2\n",
    ])
    graph = load_gtfs(feed)
    assert [(u, v) for u, v, _ in graph.arcs] == [(0, 1)]


def test_gtfs_errors(tmp_path):
    feed = _write_feed(tmp_path, ["t1,00:05:00,0:5,A,1\n", "t1,00:07:00,00:07:00,B,2\n"])
    with pytest.raises(MalformedTime):
        load_gtfs(feed)
    (tmp_path / "trips.txt").unlink()
    with pytest.raises(MissingFile):
        load_gtfs(feed)


def test_gtfs_no_feasible_pair():
    graph = build_graph(["A", "B", "C"], [("A", "B", [5]), ("B", "C", [3])], 6)
    assert select_endpoints_gtfs(graph, GtfsParams(window_seconds=360)) is not None
    with pytest.raises(NoFeasiblePair):
        select_endpoints_gtfs(build_graph(["A"], [], 2))
