"""Materialized clique tables: the relational form of a colored function.

Given a set-valued function and a proper coloring of its intersection
graph, the table has one row per node and one column per color; cell
(u, i) holds the unique entry of color i whose image contains u, or NULL.
Column i is then an index on the data: the rows holding e* in column
c(e*) are exactly the image of e*, which is what verify_schema checks.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .errors import ColorCollision, InconsistentArity, MalformedCsv, UnknownNode
from .intersection import EntryColoring, SetValuedFunction

Entry = Hashable
Node = Hashable

NULL = None


def _sorted_ids(values: Iterable) -> list:
    values = list(values)
    try:
        return sorted(values)
    except TypeError:
        return sorted(values, key=repr)


@dataclass
class CliqueTable:
    """k color columns over an ordered node domain.

    rows maps node -> tuple of k cells; a cell is an entry identifier or
    None.  Immutable by convention once built.
    """

    k: int
    rows: dict[Node, tuple]

    def __post_init__(self):
        for u, cells in self.rows.items():
            if len(cells) != self.k:
                raise InconsistentArity(
                    f"row {u!r} has {len(cells)} cells, table width is {self.k}"
                )

    def cell(self, u: Node, i: int):
        """Cell in column i (1-based) of node u's row."""
        if u not in self.rows:
            raise UnknownNode(u)
        if not 1 <= i <= self.k:
            raise IndexError(f"column {i} outside 1..{self.k}")
        return self.rows[u][i - 1]

    def nodes(self) -> tuple:
        return tuple(self.rows.keys())

    def null_count(self) -> int:
        return sum(1 for cells in self.rows.values() for c in cells if c is NULL)

    def column_preimage(self, i: int, e: Entry) -> set:
        """Nodes whose column i holds entry e."""
        return {u for u, cells in self.rows.items() if cells[i - 1] == e}

    def __len__(self) -> int:
        return len(self.rows)


def materialize(
    f: SetValuedFunction,
    c: EntryColoring,
    domain: Sequence[Node] | None = None,
) -> CliqueTable:
    """Fill the table cell by cell from the coloring.

    The row set defaults to the sorted union of all images; an explicit
    domain may add nodes no entry references (their rows are all NULL).
    A node claimed by two entries of one color means the coloring was not
    proper on the intersection graph: ColorCollision.
    """
    if domain is None:
        order = _sorted_ids(f.node_domain())
    else:
        order, seen = [], set()
        for u in domain:
            if u not in seen:
                seen.add(u)
                order.append(u)
    cells: dict[Node, list] = {u: [NULL] * c.k for u in order}
    for e in f.entries:
        i = c.assignment[e]
        for u in f.image[e]:
            if u not in cells:
                raise UnknownNode(u)
            existing = cells[u][i - 1]
            if existing is not NULL and existing != e:
                raise ColorCollision(u, i, existing, e)
            cells[u][i - 1] = e
    return CliqueTable(c.k, {u: tuple(cells[u]) for u in order})


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of verify_schema; falsy on the first counterexample found."""

    ok: bool
    entry: Entry = None
    missing: frozenset = frozenset()
    extra: frozenset = frozenset()

    def __bool__(self) -> bool:
        return self.ok


def verify_schema(f: SetValuedFunction, t: CliqueTable, c: EntryColoring) -> VerifyResult:
    """Check the table is a complete schema for f under coloring c.

    For every entry e, the preimage of e in column c(e) must equal the
    image F(e) exactly; any cell value that is not an entry of its column's
    color is also a failure.
    """
    for e in f.entries:
        recovered = t.column_preimage(c.assignment[e], e)
        expected = f.image[e]
        if recovered != expected:
            return VerifyResult(False, e, frozenset(expected - recovered), frozenset(recovered - expected))
    by_color: dict[int, set] = {}
    for e in f.entries:
        by_color.setdefault(c.assignment[e], set()).add(e)
    for u, row in t.rows.items():
        for i, value in enumerate(row, start=1):
            if value is not NULL and value not in by_color.get(i, ()):
                return VerifyResult(False, value, frozenset(), frozenset({u}))
    return VerifyResult(True)


def recover_coloring(t: CliqueTable) -> EntryColoring:
    """Read the entry -> column map back out of a table.

    Every complete schema induces a proper coloring this way.  An entry
    sitting in two different columns means the table is no schema at all.
    """
    assignment: dict[Entry, int] = {}
    for u, row in t.rows.items():
        for i, value in enumerate(row, start=1):
            if value is NULL:
                continue
            prev = assignment.get(value)
            if prev is not None and prev != i:
                raise MalformedCsv(
                    f"entry {value!r} appears in columns {prev} and {i}; not a schema"
                )
            assignment[value] = i
    return EntryColoring(assignment, t.k)


def compact_colors(t: CliqueTable) -> tuple[CliqueTable, dict[int, int]]:
    """Drop all-NULL columns and renumber the rest 1..k'.

    Returns the new table and the old -> new column map.
    """
    used = [
        i for i in range(1, t.k + 1)
        if any(row[i - 1] is not NULL for row in t.rows.values())
    ]
    remap = {old: new for new, old in enumerate(used, start=1)}
    rows = {
        u: tuple(row[old - 1] for old in used) for u, row in t.rows.items()
    }
    return CliqueTable(len(used), rows), remap


def export_table(t: CliqueTable, dest=None) -> str | None:
    """Write the table as CSV: header `node,c1,...,ck`, empty field = NULL.

    With dest None, returns the CSV text; otherwise writes to the given
    path or file object.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["node"] + [f"c{i}" for i in range(1, t.k + 1)])
    for u, row in t.rows.items():
        writer.writerow([u] + ["" if v is NULL else v for v in row])
    text = buf.getvalue()
    if dest is None:
        return text
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    return None


def import_table(source, node_cast=None, entry_cast=None) -> CliqueTable:
    """Read a table back from CSV text, a file object, or a path.

    Values arrive as strings; node_cast/entry_cast convert them (e.g. int
    for tree tables).  Raises MalformedCsv on a bad header or duplicate
    node, InconsistentArity on a short or long row.
    """
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, os.PathLike) or (
        isinstance(source, str) and "\n" not in source and os.path.exists(source)
    ):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedCsv("empty input: missing header") from None
    if not header or header[0] != "node":
        raise MalformedCsv(f"bad header {header!r}: first column must be 'node'")
    k = len(header) - 1
    if header[1:] != [f"c{i}" for i in range(1, k + 1)]:
        raise MalformedCsv(f"bad header {header!r}: color columns must be c1..c{k}")
    rows: dict[Node, tuple] = {}
    for lineno, record in enumerate(reader, start=2):
        if not record:
            continue
        if len(record) != k + 1:
            raise InconsistentArity(
                f"line {lineno}: expected {k + 1} fields, got {len(record)}"
            )
        node = node_cast(record[0]) if node_cast else record[0]
        if node in rows:
            raise MalformedCsv(f"line {lineno}: duplicate node {node!r}")
        cells = tuple(
            NULL if v == "" else (entry_cast(v) if entry_cast else v)
            for v in record[1:]
        )
        rows[node] = cells
    return CliqueTable(k, rows)


def write_sidecar(path, c: EntryColoring, provenance: dict) -> None:
    """JSON sidecar giving k, the entry -> color map, and provenance notes."""
    payload = {
        "k": c.k,
        "coloring": {str(e): i for e, i in c.assignment.items()},
        "provenance": provenance,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_sidecar(path, entry_cast=None) -> tuple[EntryColoring, dict]:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    assignment = {
        (entry_cast(e) if entry_cast else e): int(i)
        for e, i in payload["coloring"].items()
    }
    return EntryColoring(assignment, int(payload["k"])), payload.get("provenance", {})
