"""Indexing closed intervals through their endpoint set.

Every distinct endpoint value is a data entry; the entry e points at the
intervals that straddle it (lower endpoint weakly left of e, upper endpoint
strictly right).  An interval's straddled entries form one consecutive run
in the sorted endpoint list, so entries conflict only within runs and
coloring the sorted positions cyclically with the longest run length is
proper.  A range query then needs one color-column lookup plus one scan of
upper endpoints.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .errors import EmptyInput, InvalidRange
from .intersection import EntryColoring, SetValuedFunction
from .schema import CliqueTable, materialize


@dataclass(frozen=True, order=True)
class IntervalRecord:
    """Closed interval [x, y] with an opaque orderable id."""

    id: Hashable
    x: float
    y: float

    def __post_init__(self):
        if self.y < self.x:
            raise InvalidRange(f"interval {self.id!r}: upper {self.y} below lower {self.x}")


@dataclass
class EndpointSchema:
    """Materialized endpoint schema over one interval collection."""

    intervals: tuple[IntervalRecord, ...]
    entries: tuple  # distinct endpoint values, ascending
    function: SetValuedFunction
    coloring: EntryColoring
    clique: CliqueTable
    window: int  # longest straddled-entry run, the k estimate
    escalations: int  # times the cyclic coloring had to widen; expected 0

    def _upper_endpoints(self):
        return self._ys, self._y_ids

    def __post_init__(self):
        order = sorted(range(len(self.intervals)), key=lambda i: (self.intervals[i].y, i))
        self._ys = [self.intervals[i].y for i in order]
        self._y_ids = [self.intervals[i].id for i in order]


def _straddle_run(entries: Sequence, rec: IntervalRecord) -> tuple[int, int]:
    """Index range [s, e) of entries the interval straddles: x <= entry < y."""
    return bisect.bisect_left(entries, rec.x), bisect.bisect_left(entries, rec.y)


def _cyclic_coloring_proper(entries: Sequence, intervals: Sequence[IntervalRecord], k: int) -> bool:
    """Proper iff no run holds two entries k positions apart, i.e. all runs <= k.

    Conflicting entries are exactly those straddled by one common interval,
    which is a consecutive position run; cyclic colors repeat every k.
    """
    return all(e - s <= k for s, e in (_straddle_run(entries, r) for r in intervals))


def build_endpoint_schema(intervals: Iterable[IntervalRecord]) -> EndpointSchema:
    """Entries, cyclic coloring, and materialized table for the collection.

    k starts at the window bound (the longest run) and widens until the
    direct properness check passes; with the run argument above the first
    check already passes, so escalations stays 0 unless that argument is
    ever wrong on some input.
    """
    records = tuple(sorted(intervals, key=lambda r: (r.x, r.y, r.id)))
    if not records:
        raise EmptyInput("no intervals given")
    entries = sorted({v for r in records for v in (r.x, r.y)})

    image: dict = {e: set() for e in entries}
    window = 1
    for rec in records:
        s, e = _straddle_run(entries, rec)
        window = max(window, e - s)
        for pos in range(s, e):
            image[entries[pos]].add(rec.id)
    f = SetValuedFunction(tuple(entries), {e: frozenset(s) for e, s in image.items()})

    k = window
    escalations = 0
    while not _cyclic_coloring_proper(entries, records, k):
        k += 1
        escalations += 1
    coloring = EntryColoring({e: (pos % k) + 1 for pos, e in enumerate(entries)}, k)

    domain = sorted(r.id for r in records)
    clique = materialize(f, coloring, domain)
    return EndpointSchema(records, tuple(entries), f, coloring, clique, window, escalations)


def interval_query_branches(s: EndpointSchema, a, b) -> tuple[set, set]:
    """The two union branches of the range query, kept apart for testing.

    First: rows whose color column for the greatest entry N* <= b holds N*
    (intervals straddling N*, all with y > b).  Second: intervals whose
    upper endpoint lies inside [a, b].  The branches are provably disjoint.
    """
    if b < a:
        raise InvalidRange(f"query upper {b} below lower {a}")
    first: set = set()
    pos = bisect.bisect_right(s.entries, b) - 1
    if pos >= 0:
        star = s.entries[pos]
        first = s.clique.column_preimage(s.coloring.assignment[star], star)
    ys, y_ids = s._upper_endpoints()
    lo = bisect.bisect_left(ys, a)
    hi = bisect.bisect_right(ys, b)
    return first, set(y_ids[lo:hi])


def interval_query(s: EndpointSchema, a, b) -> set:
    """Ids of intervals meeting [a, b]: x <= b and y >= a."""
    first, second = interval_query_branches(s, a, b)
    return first | second


def stabbing_query(s: EndpointSchema, p) -> set:
    """Ids of intervals containing the point p (closed semantics)."""
    return interval_query(s, p, p)


def bucketed_schema(intervals: Iterable[IntervalRecord]) -> list[EndpointSchema]:
    """One schema per log2-length bucket; zero-length intervals get their own.

    Mixing long and short intervals inflates runs (a long interval straddles
    every endpoint under it), so bucketing by magnitude usually shrinks the
    per-bucket color count.
    """
    records = list(intervals)
    if not records:
        raise EmptyInput("no intervals given")
    buckets: dict[float, list[IntervalRecord]] = {}
    for rec in records:
        length = rec.y - rec.x
        key = -math.inf if length == 0 else math.floor(math.log2(length))
        buckets.setdefault(key, []).append(rec)
    return [build_endpoint_schema(buckets[key]) for key in sorted(buckets)]


def bucketed_interval_query(schemas: Sequence[EndpointSchema], a, b) -> set:
    out: set = set()
    for s in schemas:
        out |= interval_query(s, a, b)
    return out
