import pytest

from tempsep.core import SeparatorTimeline, timeline_length
from tempsep.pathfind import collect_paths, is_valid_separator
from tempsep.reduction import (
    InvalidSetCover,
    NotACover,
    NotASeparator,
    SetCoverInstance,
    brute_force_set_cover,
    cover_to_timeline,
    enumerate_set_covers,
    from_set_cover,
    timeline_to_cover,
)
from tempsep.solver import brute_force_min, solve_exact

COVER_EXAMPLE = SetCoverInstance(4, (frozenset({1, 3, 4}), frozenset({1, 2}), frozenset({2, 4})))


def test_cover_example_shape():
    ri = from_set_cover(COVER_EXAMPLE)
    inst = ri.instance
    assert inst.graph.vertex_names == ("s", "v1", "v2", "v3", "z")
    assert inst.deadline == 4
    assert ri.big_m == 1728
    assert inst.horizon == 1728 + 2 * 3 * 4 + 4
    paths, truncated = collect_paths(inst)
    assert not truncated and len(paths) == 7
    kinds = sorted(ri.classify(p) for p in paths)
    assert kinds == [("element", i) for i in range(1, 5)] + [("gadget", j) for j in range(3)]


def test_cover_example_cover_round_trip():
    ri = from_set_cover(COVER_EXAMPLE)
    tl = cover_to_timeline(ri, {0, 1})
    assert is_valid_separator(ri.instance, tl)
    assert timeline_length(tl) <= ri.cover_length_bound(2)
    assert timeline_to_cover(ri, tl) == {0, 1}
    best = brute_force_min(ri.instance, limits=None, canonical=True)
    assert best.length == solve_exact(ri.instance).length
    cover = timeline_to_cover(ri, best.timeline)
    assert COVER_EXAMPLE.is_cover(cover) and len(cover) == 2


def test_gadget_intervals_are_forced():
    ri = from_set_cover(COVER_EXAMPLE)
    tl = cover_to_timeline(ri, {0, 1})
    mapping = {v: tl[v] for v in range(1, 4)}
    mapping[2] = None
    broken = SeparatorTimeline.from_mapping(5, mapping)
    assert not is_valid_separator(ri.instance, broken)
    with pytest.raises(NotASeparator):
        timeline_to_cover(ri, broken)


def test_non_cover_rejected():
    ri = from_set_cover(COVER_EXAMPLE)
    with pytest.raises(NotACover):
        cover_to_timeline(ri, {0})
    with pytest.raises(NotACover):
        cover_to_timeline(ri, {5})


@pytest.mark.parametrize(
    "text",
    ["", "2\n1 2\n", "2 2\n1 2\n", "2 1\n1\n", "2 1\n1 3\n", "2 1\nx\n"],
)
def test_parse_rejects(text):
    with pytest.raises(InvalidSetCover):
        SetCoverInstance.parse(text)


def test_parse_format_round_trip():
    assert SetCoverInstance.parse(COVER_EXAMPLE.format()) == COVER_EXAMPLE


def test_isomorphism_classes():
    counts = {(n, m): sum(1 for _ in enumerate_set_covers(n, m, True)) for n in (2, 3) for m in (2, 3)}
    assert counts == {(2, 2): 3, (2, 3): 5, (3, 2): 5, (3, 3): 17}


def test_long_chain_element():
    # element 1 in all three sets needs d >= 4 even though n = 2
    sc = SetCoverInstance(2, (frozenset({1}), frozenset({1, 2}), frozenset({1})))
    ri = from_set_cover(sc)
    assert ri.instance.deadline == 4
    lo, hi = ri.element_windows[2]
    assert hi <= ri.interval_end
    assert len(collect_paths(ri.instance)[0]) == 5


@pytest.mark.parametrize("sc", list(enumerate_set_covers(2, 2)) + list(enumerate_set_covers(3, 2)),
                         ids=lambda sc: sc.format().replace("\n", "|"))
def test_small_reductions(sc):
    ri = from_set_cover(sc)
    paths, _ = collect_paths(ri.instance)
    assert len(paths) == sc.n + sc.m
    assert all(ri.classify(p) is not None for p in paths)
    k = len(brute_force_set_cover(sc))
    best = brute_force_min(ri.instance, limits=None, canonical=True)
    assert len(timeline_to_cover(ri, best.timeline)) == k
    assert best.length <= ri.cover_length_bound(k)
