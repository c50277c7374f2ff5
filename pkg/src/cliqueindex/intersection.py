"""Set-valued functions, their intersection graphs, and proper colorings.

A set-valued function maps data entries to node sets.  Two entries are
adjacent in the intersection graph exactly when their images share a node.
Any proper coloring of that graph can be materialized as an indexing schema
(see the schema module); conversely every complete schema induces a proper
coloring, so the chromatic number is the exact lower limit on schema width.

Entry identifiers must be hashable and totally orderable within one
function (strings, ints, or tuples -- not mixed), because greedy coloring
breaks ties by lowest identifier to stay deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import TooLargeForExact

Entry = Hashable
Node = Hashable

GREEDY_ORDERS = ("input", "largest-first", "smallest-last")

DEFAULT_CHROMATIC_CAP = 20


@dataclass(frozen=True)
class SetValuedFunction:
    """Ordered data entries plus the node set each one points at.

    Empty images are permitted; such entries are isolated in the
    intersection graph.
    """

    entries: tuple[Entry, ...]
    image: dict[Entry, frozenset[Node]]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Entry, Node]]) -> "SetValuedFunction":
        """Build from (entry, node) membership pairs, preserving first-seen entry order."""
        order: list[Entry] = []
        image: dict[Entry, set[Node]] = {}
        for entry, node in pairs:
            if entry not in image:
                order.append(entry)
                image[entry] = set()
            image[entry].add(node)
        return cls(tuple(order), {e: frozenset(s) for e, s in image.items()})

    @classmethod
    def from_images(cls, image: Mapping[Entry, Iterable[Node]]) -> "SetValuedFunction":
        return cls(tuple(image.keys()), {e: frozenset(s) for e, s in image.items()})

    def __post_init__(self):
        if len(set(self.entries)) != len(self.entries):
            raise ValueError("entry identifiers must be distinct")
        missing = [e for e in self.entries if e not in self.image]
        if missing:
            raise ValueError(f"entries without an image: {missing[:3]}")

    def node_domain(self) -> frozenset[Node]:
        """Union of all images."""
        out: set[Node] = set()
        for e in self.entries:
            out |= self.image[e]
        return frozenset(out)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class IntersectionGraph:
    """Entries as vertices; an edge wherever two images overlap.

    Adjacency is stored as deduplicated sorted lists, symmetric and
    irreflexive by construction.
    """

    vertices: tuple[Entry, ...]
    adj: dict[Entry, list[Entry]]

    def degree(self, e: Entry) -> int:
        return len(self.adj[e])

    def has_edge(self, a: Entry, b: Entry) -> bool:
        return b in self._adj_sets[a]

    def edge_count(self) -> int:
        return sum(len(v) for v in self.adj.values()) // 2

    def edges(self) -> Iterable[tuple[Entry, Entry]]:
        for u in self.vertices:
            for v in self.adj[u]:
                if self._index[u] < self._index[v]:
                    yield (u, v)

    def __post_init__(self):
        self._adj_sets = {u: set(vs) for u, vs in self.adj.items()}
        self._index = {u: i for i, u in enumerate(self.vertices)}


@dataclass(frozen=True)
class EntryColoring:
    """Map entry -> color in 1..k.  Proper on the graph it was built from."""

    assignment: dict[Entry, int]
    k: int

    def is_proper(self, g: IntersectionGraph) -> bool:
        return all(
            self.assignment[u] != self.assignment[v] for u, v in g.edges()
        )


def build_intersection_graph(f: SetValuedFunction) -> IntersectionGraph:
    """Construct the intersection graph through an inverted node index.

    Each node contributes a clique among the entries containing it, which
    beats the all-pairs set-intersection route whenever the index is sparse.
    The all-pairs route lives in the oracle module for verification.
    """
    inverted: dict[Node, list[Entry]] = {}
    for e in f.entries:
        for node in f.image[e]:
            inverted.setdefault(node, []).append(e)

    neighbor_sets: dict[Entry, set[Entry]] = {e: set() for e in f.entries}
    for members in inverted.values():
        if len(members) < 2:
            continue
        for i, a in enumerate(members):
            sa = neighbor_sets[a]
            for b in members[i + 1:]:
                sa.add(b)
                neighbor_sets[b].add(a)

    adj = {e: sorted(neighbor_sets[e]) for e in f.entries}
    return IntersectionGraph(tuple(f.entries), adj)


def _smallest_last_order(g: IntersectionGraph) -> list[Entry]:
    """Repeatedly remove a minimum-degree vertex (lowest id on ties);
    return the reverse removal sequence."""
    degree = {u: len(g.adj[u]) for u in g.vertices}
    alive = set(g.vertices)
    removed: list[Entry] = []
    while alive:
        u = min(alive, key=lambda v: (degree[v], v))
        removed.append(u)
        alive.remove(u)
        for w in g.adj[u]:
            if w in alive:
                degree[w] -= 1
    removed.reverse()
    return removed


def coloring_order(g: IntersectionGraph, order: str) -> list[Entry]:
    if order == "input":
        return list(g.vertices)
    if order == "largest-first":
        return sorted(g.vertices, key=lambda v: (-g.degree(v), v))
    if order == "smallest-last":
        return _smallest_last_order(g)
    raise ValueError(f"unknown order {order!r}; expected one of {GREEDY_ORDERS}")


def greedy_color(g: IntersectionGraph, order: str = "smallest-last") -> EntryColoring:
    """First-fit coloring along the chosen vertex order.

    Each vertex gets the smallest color (starting at 1) unused among its
    already-colored neighbors.  Deterministic for a given order.
    """
    assignment: dict[Entry, int] = {}
    k = 0
    for u in coloring_order(g, order):
        used = {assignment[w] for w in g.adj[u] if w in assignment}
        c = 1
        while c in used:
            c += 1
        assignment[u] = c
        k = max(k, c)
    return EntryColoring(assignment, k)


def clique_lower_bound(f: SetValuedFunction) -> int:
    """Entries sharing one node are pairwise adjacent, so the heaviest node
    gives a clique in the intersection graph and a floor on any schema width."""
    counts: dict[Node, int] = {}
    for e in f.entries:
        for node in f.image[e]:
            counts[node] = counts.get(node, 0) + 1
    return max(counts.values(), default=0)


def exact_chromatic(g: IntersectionGraph, cap: int = DEFAULT_CHROMATIC_CAP) -> int:
    """Exact chromatic number by branch and bound.

    Bounds: a greedily grown clique from several seeds gives the floor, the
    best greedy coloring over all orders gives the ceiling, and a DSATUR
    backtracking search closes the gap one k at a time.
    """
    n = len(g.vertices)
    if n > cap:
        raise TooLargeForExact(n, cap, what="intersection graph")
    if n == 0:
        return 0
    if g.edge_count() == 0:
        return 1

    index = {u: i for i, u in enumerate(g.vertices)}
    adj: list[list[int]] = [[] for _ in range(n)]
    for u in g.vertices:
        adj[index[u]] = sorted(index[w] for w in g.adj[u])
    adj_sets = [set(a) for a in adj]

    lower = _greedy_clique_bound(adj, adj_sets)
    upper = min(greedy_color(g, order).k for order in GREEDY_ORDERS)
    if lower >= upper:
        return upper

    for k in range(lower, upper):
        if _k_colorable(adj, adj_sets, k):
            return k
    return upper


def _greedy_clique_bound(adj: list[list[int]], adj_sets: list[set[int]]) -> int:
    n = len(adj)
    by_degree = sorted(range(n), key=lambda v: -len(adj[v]))
    best = 1
    for seed in by_degree[: min(n, 12)]:
        clique = [seed]
        candidates = sorted(adj_sets[seed], key=lambda v: -len(adj[v]))
        for v in candidates:
            if all(v in adj_sets[u] for u in clique):
                clique.append(v)
        best = max(best, len(clique))
    return best


def _k_colorable(adj: list[list[int]], adj_sets: list[set[int]], k: int) -> bool:
    """DSATUR backtracking: color the most saturated vertex next, trying at
    most one brand-new color per step to break color symmetry."""
    n = len(adj)
    colors = [0] * n
    neighbor_colors: list[set[int]] = [set() for _ in range(n)]

    def pick() -> int:
        best_v, best_key = -1, (-1, -1)
        for v in range(n):
            if colors[v]:
                continue
            key = (len(neighbor_colors[v]), len(adj[v]))
            if key > best_key:
                best_v, best_key = v, key
        return best_v

    def assign(v: int, c: int) -> list[int]:
        colors[v] = c
        touched = []
        for w in adj[v]:
            if not colors[w] and c not in neighbor_colors[w]:
                neighbor_colors[w].add(c)
                touched.append(w)
        return touched

    def undo(v: int, c: int, touched: list[int]) -> None:
        colors[v] = 0
        for w in touched:
            neighbor_colors[w].discard(c)

    max_used = 0

    def solve(colored: int) -> bool:
        nonlocal max_used
        if colored == n:
            return True
        v = pick()
        if len(neighbor_colors[v]) >= k:
            return False
        limit = min(k, max_used + 1)
        for c in range(1, limit + 1):
            if c in neighbor_colors[v]:
                continue
            prev = max_used
            max_used = max(max_used, c)
            touched = assign(v, c)
            if solve(colored + 1):
                return True
            undo(v, c, touched)
            max_used = prev
        return False

    return solve(0)
