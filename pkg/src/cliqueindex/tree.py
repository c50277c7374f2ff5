"""Binary interval tree indexing: dyadic intervals, entries, and queries.

The tree enumerates the 2^n - 1 dyadic subintervals of [0,1) in heap
order: id k sits at level L(k) = bit_length(k), and its half-open extent
halves as the level grows.  An entry (p, q) points at node p's subtree
when p sits exactly at level q, and at {p} alone when p sits above q;
coloring entries by q gives an n-column schema with no NULL cells, and a
single-column IN query over an id's ancestor chain answers overlap.

All arithmetic is integer: extents are kept in units of 2^(1-n).
"""

from __future__ import annotations

import math
from typing import Iterator

from . import engine
from .errors import OutOfRange
from .intersection import EntryColoring, SetValuedFunction
from .schema import NULL, CliqueTable, VerifyResult

DEFAULT_TREE_CAP = 24

VARIANTS = ("table", "literal")


def level(k: int) -> int:
    """Level of interval id k: floor(log2 k) + 1, in exact integers."""
    if k < 1:
        raise OutOfRange(f"interval id {k} must be at least 1")
    return k.bit_length()


def _check_id(k: int, n: int) -> None:
    if not 1 <= k < (1 << n):
        raise OutOfRange(f"interval id {k} outside 1..{(1 << n) - 1}")


def _check_levels(n: int, cap: int = DEFAULT_TREE_CAP) -> None:
    if n < 1:
        raise OutOfRange(f"level count {n} must be at least 1")
    if n > cap:
        raise OutOfRange(f"level count {n} exceeds the cap {cap}")


def ancestor_path(k: int) -> tuple[int, ...]:
    """Ids on the route from k up to the root: (k, k//2, ..., 1)."""
    lvl = level(k)
    return tuple(k >> shift for shift in range(lvl))


def extent(k: int, n: int) -> tuple[int, int]:
    """Half-open extent [lo, hi) of id k in units of 2^(1-n)."""
    _check_levels(n)
    _check_id(k, n)
    lvl = level(k)
    width = 1 << (n - lvl)
    lo = (k - (1 << (lvl - 1))) * width
    return lo, lo + width


def entry_members(p: int, q: int, n: int, variant: str = "table") -> frozenset[int]:
    """Interval ids the entry (p, q) points at.

    Table variant: the whole subtree of p when p's level is exactly q,
    else just {p}.  Literal variant: the printed membership formula with
    divisor 2^n, which agrees on bottom-level members but drops the
    intermediate subtree levels (kept available for comparison).
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    _check_levels(n)
    _check_id(p, n)
    if not level(p) <= q <= n:
        raise OutOfRange(f"entry ({p},{q}) needs level({p})={level(p)} <= q <= n={n}")
    if variant == "literal":
        out = {p}
        # second membership clause requires 2^q <= 2p <= k < 2^n
        if (1 << q) <= 2 * p:
            for k in range(2 * p, 1 << n):
                if (k << q) >> n == p:
                    out.add(k)
        return frozenset(out)
    if level(p) < q:
        return frozenset({p})
    members = set()
    for t in range(q, n + 1):
        shift = t - q
        members.update(range(p << shift, (p + 1) << shift))
    return frozenset(members)


def tree_entry_function(n: int, canonical: bool = True, variant: str = "table") -> SetValuedFunction:
    """Entries as (p, q) pairs with their member sets.

    Canonical keeps one entry per node, (p, level(p)); the full variant
    keeps every (p, q) with level(p) <= q <= n, whose extra entries are the
    singletons appearing in columns below a node's level.
    """
    _check_levels(n)
    entries = []
    for p in range(1, 1 << n):
        qs = [level(p)] if canonical else range(level(p), n + 1)
        for q in qs:
            entries.append((p, q))
    image = {(p, q): entry_members(p, q, n, variant) for p, q in entries}
    return SetValuedFunction(tuple(entries), image)


def tree_coloring(n: int, canonical: bool = True) -> EntryColoring:
    """The schema coloring: entry (p, q) gets color q."""
    _check_levels(n)
    assignment = {}
    for p in range(1, 1 << n):
        qs = [level(p)] if canonical else range(level(p), n + 1)
        for q in qs:
            assignment[(p, q)] = q
    return EntryColoring(assignment, n)


def _row_cells(k: int, n: int, variant: str) -> tuple:
    lvl = level(k)
    if variant == "literal":
        cells = []
        for q in range(1, n + 1):
            if q >= lvl:
                cells.append(k)
            else:
                p = (k << q) >> n
                cells.append(p if (1 << q) <= 2 * p <= k < (1 << n) else NULL)
        return tuple(cells)
    return tuple((k >> (lvl - q)) if q <= lvl else k for q in range(1, n + 1))


def iter_tree_rows(n: int, variant: str = "table") -> Iterator[tuple[int, tuple]]:
    """Stream (id, cells) pairs in id order without materializing the table."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    _check_levels(n)
    for k in range(1, 1 << n):
        yield k, _row_cells(k, n, variant)


def build_tree_schema(n: int, cap: int = DEFAULT_TREE_CAP, variant: str = "table") -> CliqueTable:
    """Materialize the n-column table over all 2^n - 1 ids.

    Column q of row k holds the id truncated to level q (its level-q
    ancestor) for q up to k's level, and k itself below; storing the bare
    p is enough because the column fixes q.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    _check_levels(n, cap)
    return CliqueTable(n, {k: cells for k, cells in iter_tree_rows(n, variant)})


def verify_tree_schema(t: CliqueTable, n: int, variant: str = "table") -> VerifyResult:
    """Check every entry's column preimage against its member set.

    Same check as schema.verify_schema, specialized to the bare-p cell
    encoding: the value p in column q stands for the entry (p, q).
    """
    for p in range(1, 1 << n):
        for q in range(level(p), n + 1):
            expected = entry_members(p, q, n, variant)
            recovered = t.column_preimage(q, p)
            if recovered != expected:
                return VerifyResult(
                    False, (p, q), frozenset(expected - recovered), frozenset(recovered - expected)
                )
    return VerifyResult(True)


def overlap_query(k: int, schema: CliqueTable) -> set[int]:
    """Ids whose extent meets id k's extent, read from the table.

    One IN predicate on column L(k): a row overlaps k exactly when its
    level-L(k) cell is one of k's ancestors-or-self.
    """
    n = schema.k
    _check_id(k, n)
    lvl = level(k)
    wanted = set(ancestor_path(k))
    return {u for u, cells in schema.rows.items() if cells[lvl - 1] in wanted}


def map_point_to_leaf(x: float, n: int) -> int:
    """Bottom-level id whose extent contains the point x of [0,1)."""
    _check_levels(n)
    if not 0 <= x < 1:
        raise OutOfRange(f"point {x} outside [0, 1)")
    half = 1 << (n - 1)
    return half + int(x * half)


def map_range_to_cover(a: float, b: float, n: int) -> list[int]:
    """Canonical minimal dyadic cover of [a, b) clipped to [0,1).

    Endpoints snap outward to the bottom-level grid, then the greedy walk
    repeatedly takes the largest aligned block that fits.
    """
    _check_levels(n)
    if a < 0 or b < a:
        raise OutOfRange(f"range [{a}, {b}) is not inside [0, inf)")
    half = 1 << (n - 1)
    lo = math.floor(a * half)
    hi = min(math.ceil(b * half), half)
    cover = []
    while lo < hi:
        size = lo & -lo if lo else half
        while size > hi - lo:
            size >>= 1
        cover.append((half + lo) >> (size.bit_length() - 1))
        lo += size
    return cover


def tree_fact_query(k: int, idx: "engine.PostingIndex"):
    """Fact rows referencing any interval overlapping k: one OR of postings
    in column L(k) over the ancestor path."""
    n = idx.k
    _check_id(k, n)
    lvl = level(k)
    atoms = tuple(engine.Atom(lvl, p) for p in ancestor_path(k))
    expr = engine.Or(atoms) if len(atoms) > 1 else atoms[0]
    return engine.evaluate(expr, idx)


def naive_overlap_function(n: int) -> SetValuedFunction:
    """The first-attempt indexing function: every id points at everything it
    overlaps.  All images share the root's extent slices, so the
    intersection graph is complete and needs 2^n - 1 colors; this is the
    motivation for the (p, q) entries."""
    _check_levels(n, cap=10)
    ids = range(1, 1 << n)
    extents = {k: extent(k, n) for k in ids}
    image = {}
    for k in ids:
        lo, hi = extents[k]
        image[k] = frozenset(
            j for j in ids if extents[j][0] < hi and lo < extents[j][1]
        )
    return SetValuedFunction(tuple(ids), image)
