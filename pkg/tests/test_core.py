import pytest
from hypothesis import given, strategies as st

from tempsep.core import (
    EmptyTimestampSet,
    Instance,
    InvalidInstance,
    InvalidPath,
    InvalidTimeline,
    Interval,
    SelfLoop,
    SeparatorTimeline,
    Step,
    TemporalPath,
    TimestampOutOfRange,
    UnknownVertex,
    build_graph,
    separates,
    timeline_length,
    traveling_time,
)

from instances import EXAMPLE_ARCS, small_example


def path(g, *hops):
    return TemporalPath(tuple(Step(g.vertex_id(u), g.vertex_id(v), t) for u, v, t in hops))


def test_example_graph_shape():
    g = small_example().graph
    assert len(g.arcs) == 9
    assert g.temporal_arc_count == 13
    assert g.horizon == 6


def test_build_graph_merges_and_sorts():
    g = build_graph(["a", "b"], [("a", "b", [3, 1]), ("a", "b", [1, 2])], 3)
    assert g.arcs == ((0, 1, (1, 2, 3)),)


def test_single_vertex_no_arcs():
    g = build_graph(["only"], [], 1)
    assert g.vertex_count == 1 and g.arcs == ()


@pytest.mark.parametrize(
    "arcs, horizon, error",
    [
        ([("a", "a", [1])], 3, SelfLoop),
        ([("a", "b", [0])], 3, TimestampOutOfRange),
        ([("a", "b", [4])], 3, TimestampOutOfRange),
        ([("a", "q", [1])], 3, UnknownVertex),
        ([("a", "b", [])], 3, EmptyTimestampSet),
    ],
)
def test_build_graph_errors(arcs, horizon, error):
    with pytest.raises(error):
        build_graph(["a", "b"], arcs, horizon)


def test_traveling_time_examples():
    g = small_example().graph
    p1 = path(g, ("s", "b", 4), ("b", "f", 5), ("f", "z", 6))
    p2 = path(g, ("s", "a", 2), ("a", "c", 3), ("c", "f", 4), ("f", "z", 5))
    assert traveling_time(p1) == 3
    assert traveling_time(p2) == 4
    assert traveling_time(TemporalPath((Step(0, 5, 3),))) == 1


def test_early_start_path_is_over_deadline():
    # listed first arc is (sa, 1), so traveling time is 6 - 1 + 1
    g = small_example().graph
    p = path(g, ("s", "a", 1), ("a", "b", 2), ("b", "f", 5), ("f", "z", 6))
    assert traveling_time(p) == 6 > 4


def test_separates_uses_outgoing_arcs_only():
    g = small_example().graph
    p1 = path(g, ("s", "b", 4), ("b", "f", 5), ("f", "z", 6))
    f = g.vertex_id("f")
    assert separates(f, Interval(5, 6), p1)
    assert not separates(f, None, p1)
    assert not separates(f, Interval(5, 5), p1)


def test_timeline_length_examples():
    n = 6
    assert timeline_length(SeparatorTimeline.from_mapping(n, {4: (5, 6)})) == 2
    assert timeline_length(SeparatorTimeline.empty(n)) == 0
    assert timeline_length(SeparatorTimeline.from_mapping(n, {1: (1, 3), 2: (2, 2)})) == 4


def test_path_invariants_rejected():
    with pytest.raises(InvalidPath):
        TemporalPath((Step(0, 1, 2), Step(1, 2, 2)))
    with pytest.raises(InvalidPath):
        TemporalPath((Step(0, 1, 1), Step(2, 3, 2)))
    with pytest.raises(InvalidPath):
        TemporalPath(())
    g = small_example().graph
    with pytest.raises(InvalidPath):
        path(g, ("s", "a", 3)).check_in(g)


@given(st.lists(st.integers(0, 4), min_size=3, max_size=6))
def test_repeated_vertices_rejected(seq):
    steps = tuple(Step(a, b, i + 1) for i, (a, b) in enumerate(zip(seq, seq[1:])) if a != b)
    chained = all(x.v == y.u for x, y in zip(steps, steps[1:]))
    if not steps or not chained:
        return
    verts = [steps[0].u] + [x.v for x in steps]
    if len(set(verts)) < len(verts):
        with pytest.raises(InvalidPath):
            TemporalPath(steps)
    else:
        TemporalPath(steps)


def test_interval_bounds():
    with pytest.raises(InvalidTimeline):
        Interval(0, 2)
    with pytest.raises(InvalidTimeline):
        Interval(3, 2)
    assert len(Interval(2, 5)) == 4


def test_timeline_endpoint_rule():
    inst = small_example()
    bad = SeparatorTimeline.from_mapping(6, {inst.source: (1, 1)})
    with pytest.raises(InvalidTimeline):
        bad.validate(inst)
    with pytest.raises(InvalidTimeline):
        SeparatorTimeline.empty(5).validate(inst)
    with pytest.raises(InvalidTimeline):
        SeparatorTimeline.from_mapping(6, {1: (1, 7)}).validate(inst)


def test_instance_invariants():
    g = build_graph(list("sabcfz"), EXAMPLE_ARCS, 6)
    with pytest.raises(InvalidInstance):
        Instance(g, 0, 0, 3)
    with pytest.raises(InvalidInstance):
        Instance(g, 0, 5, 7)
    with pytest.raises(InvalidInstance):
        Instance(g, 0, 5, 0)


@given(
    lo=st.integers(1, 10), hi=st.integers(1, 10), grow_lo=st.integers(0, 3),
    grow_hi=st.integers(0, 3), v=st.integers(0, 3), times=st.lists(st.integers(1, 16), min_size=1, max_size=4, unique=True),
)
def test_separates_monotone_in_interval(lo, hi, grow_lo, grow_hi, v, times):
    if lo > hi:
        lo, hi = hi, lo
    times = sorted(times)
    steps = tuple(Step(i, i + 1, t) for i, t in enumerate(times))
    p = TemporalPath(steps)
    small = Interval(lo, hi)
    big = Interval(max(1, lo - grow_lo), hi + grow_hi)
    if separates(v, small, p):
        assert separates(v, big, p)


@given(st.lists(st.one_of(st.none(), st.tuples(st.integers(1, 8), st.integers(0, 4))), min_size=1, max_size=8))
def test_timeline_length_additive(entries):
    ivs = [None if e is None else Interval(e[0], e[0] + e[1]) for e in entries]
    tl = SeparatorTimeline(tuple(ivs))
    assert timeline_length(tl) == sum(0 if iv is None else len(iv) for iv in ivs)
    assert (timeline_length(tl) == 0) == all(iv is None for iv in ivs)


@given(st.lists(st.integers(1, 30), min_size=1, max_size=6, unique=True))
def test_traveling_time_at_least_steps(times):
    times = sorted(times)
    p = TemporalPath(tuple(Step(i, i + 1, t) for i, t in enumerate(times)))
    assert traveling_time(p) >= len(p.steps) >= 1
