"""Set cover encoded as a minimum interval separator instance, and back.

Layout of the encoded temporal graph for ``m`` sets over ``n`` elements, with
``M = (mn)^3``:

* vertices ``s, v1..vm, z``;
* gadget arcs ``s -> vj`` at ``2j - 1`` and ``vj -> z`` at ``2j``;
* for element ``i``, one chain ``s -> v_a -> ... -> v_b -> z`` through the sets
  containing it (ascending index), on consecutive timestamps starting at
  ``M + 2m + (i - 1) * d``.

Windows are ``d`` apart, so a path touching two windows takes longer than
``d``; the deadline is ``n`` unless some element lies in ``n`` or more sets,
in which case its chain needs ``d >= frequency + 1``.  When ``d = n`` would
push the last window beyond ``M + 2mn + n`` the deadline drops to
``frequency + 1``.  In every case all element arcs lie inside
``[M + 2m, M + 2mn + n]`` and the horizon is ``M + 2mn + n``.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Optional

from .core import Instance, Interval, SeparatorTimeline, TemporalPath, build_graph
from .pathfind import is_valid_separator


class InvalidSetCover(ValueError):
    pass


class NotACover(ValueError):
    pass


class NotASeparator(ValueError):
    pass


class Uncoverable(ValueError):
    pass


@dataclass(frozen=True)
class SetCoverInstance:
    """Universe ``{1..n}`` and a list of ``m`` subsets, addressed by 0-based index."""

    n: int
    sets: tuple[frozenset[int], ...]

    @property
    def m(self) -> int:
        return len(self.sets)

    def validate(self) -> None:
        if self.n < 1 or self.m < 1:
            raise InvalidSetCover("need at least one element and one set")
        for j, c in enumerate(self.sets):
            if not c:
                raise InvalidSetCover(f"set {j + 1} is empty")
            bad = [x for x in c if not 1 <= x <= self.n]
            if bad:
                raise InvalidSetCover(f"set {j + 1} has elements outside [1, {self.n}]: {bad}")
        missing = set(range(1, self.n + 1)) - set().union(*self.sets)
        if missing:
            raise InvalidSetCover(f"elements in no set: {sorted(missing)}")

    def containing(self, element: int) -> list[int]:
        return [j for j, c in enumerate(self.sets) if element in c]

    def is_cover(self, chosen: Iterable[int]) -> bool:
        covered: set[int] = set()
        for j in chosen:
            covered |= self.sets[j]
        return covered >= set(range(1, self.n + 1))

    @classmethod
    def parse(cls, text: str) -> SetCoverInstance:
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or len(lines[0]) != 2:
            raise InvalidSetCover("first line must be 'n m'")
        try:
            n, m = int(lines[0][0]), int(lines[0][1])
            sets = tuple(frozenset(int(x) for x in row) for row in lines[1:])
        except ValueError as exc:
            raise InvalidSetCover(f"non-integer token: {exc}") from None
        if len(sets) != m:
            raise InvalidSetCover(f"header declares {m} sets, found {len(sets)}")
        sc = cls(n, sets)
        sc.validate()
        return sc

    def format(self) -> str:
        out = [f"{self.n} {self.m}"]
        out += [" ".join(str(x) for x in sorted(c)) for c in self.sets]
        return "\n".join(out) + "\n"


@dataclass(frozen=True)
class ReductionInstance:
    cover_instance: SetCoverInstance
    instance: Instance
    big_m: int
    element_windows: dict[int, tuple[int, int]]

    @property
    def interval_end(self) -> int:
        sc = self.cover_instance
        return self.big_m + 2 * sc.m * sc.n + sc.n

    def set_vertex(self, j: int) -> int:
        return j + 1

    def cover_length_bound(self, k: int) -> int:
        """Length bound for a separator built from a cover of ``k`` sets."""
        sc = self.cover_instance
        return (self.big_m + 2 * sc.m * sc.n + sc.n + 1) * k + sc.m - k

    def classify(self, path: TemporalPath) -> Optional[tuple[str, int]]:
        """``("gadget", j)`` / ``("element", i)`` for the two admissible path shapes."""
        s, z = self.instance.source, self.instance.target
        st = path.steps
        if len(st) == 2 and st[0].u == s and st[1].v == z:
            j = st[0].v - 1
            if st[0].time == 2 * j + 1 and st[1].time == 2 * j + 2:
                return ("gadget", j)
        for i, (lo, hi) in self.element_windows.items():
            if all(lo <= x.time <= hi for x in st):
                chain = [self.set_vertex(j) for j in self.cover_instance.containing(i)]
                if list(path.vertices) == [s, *chain, z]:
                    return ("element", i)
        return None


def _deadline(n: int, m: int, freq: int) -> int:
    d = max(n, freq + 1)
    if 2 * m + (n - 1) * d + freq <= 2 * m * n + n:
        return d
    return freq + 1


def from_set_cover(sc: SetCoverInstance) -> ReductionInstance:
    sc.validate()
    n, m = sc.n, sc.m
    big_m = (m * n) ** 3
    freq = max(len(sc.containing(i)) for i in range(1, n + 1))
    d = _deadline(n, m, freq)
    horizon = big_m + 2 * m * n + n
    names = ["s", *(f"v{j}" for j in range(1, m + 1)), "z"]
    s, z = 0, m + 1
    arcs: list[tuple[int, int, list[int]]] = []
    for j in range(1, m + 1):
        arcs.append((s, j, [2 * j - 1]))
        arcs.append((j, z, [2 * j]))
    windows: dict[int, tuple[int, int]] = {}
    for i in range(1, n + 1):
        base = big_m + 2 * m + (i - 1) * d
        chain = [s, *(j + 1 for j in sc.containing(i)), z]
        for k, (a, b) in enumerate(zip(chain, chain[1:])):
            arcs.append((a, b, [base + k]))
        windows[i] = (base, base + len(chain) - 2)
    graph = build_graph(names, arcs, horizon)
    return ReductionInstance(sc, Instance(graph, s, z, d), big_m, windows)


def cover_to_timeline(ri: ReductionInstance, cover: Iterable[int]) -> SeparatorTimeline:
    cover = set(cover)
    sc = ri.cover_instance
    if not cover <= set(range(sc.m)) or not sc.is_cover(cover):
        raise NotACover(f"sets {sorted(cover)} do not cover the universe")
    end = ri.interval_end
    mapping = {
        ri.set_vertex(j): Interval(2 * (j + 1), end if j in cover else 2 * (j + 1))
        for j in range(sc.m)
    }
    return SeparatorTimeline.from_mapping(ri.instance.graph.vertex_count, mapping)


def timeline_to_cover(ri: ReductionInstance, timeline: SeparatorTimeline) -> set[int]:
    timeline.validate(ri.instance)
    if not is_valid_separator(ri.instance, timeline):
        raise NotASeparator("timeline misses a feasible path")
    chosen = set()
    for j in range(ri.cover_instance.m):
        iv = timeline[ri.set_vertex(j)]
        if iv is not None and len(iv) >= ri.big_m:
            chosen.add(j)
    return chosen


def brute_force_set_cover(sc: SetCoverInstance) -> set[int]:
    if sc.m > 20:
        raise ValueError("brute force limited to m <= 20")
    for size in range(1, sc.m + 1):
        for combo in itertools.combinations(range(sc.m), size):
            if sc.is_cover(combo):
                return set(combo)
    raise Uncoverable("no subcollection covers the universe")


def canonical_form(sc: SetCoverInstance) -> tuple[tuple[int, ...], ...]:
    """Smallest relabelling of ``sc`` under element and set permutations."""
    best = None
    for perm in itertools.permutations(range(1, sc.n + 1)):
        form = tuple(sorted(tuple(sorted(perm[x - 1] for x in c)) for c in sc.sets))
        if best is None or form < best:
            best = form
    return best


def enumerate_set_covers(n: int, m: int, up_to_isomorphism: bool = False):
    """Every valid collection of ``m`` nonempty subsets of ``{1..n}``.

    Sets may repeat.  Order matters by default because it fixes the gadget
    timestamps of the encoding; with ``up_to_isomorphism`` one representative
    per relabelling class is yielded.
    """
    universe = frozenset(range(1, n + 1))
    subsets = [frozenset(c) for r in range(1, n + 1) for c in itertools.combinations(universe, r)]
    seen = set()
    for coll in itertools.product(subsets, repeat=m):
        if frozenset().union(*coll) != universe:
            continue
        sc = SetCoverInstance(n, coll)
        if up_to_isomorphism:
            key = canonical_form(sc)
            if key in seen:
                continue
            seen.add(key)
        yield sc
