"""Acyclic digraphs and their down-coloring machinery.

The central objects are reachability closures: the descendants-and-self set
of a node, and its mirror on the reversed digraph.  The inclusion-maximal
descendant sets form a hypergraph whose degeneracy, together with the
largest closure size, bounds how many colors a down-coloring needs (a
down-coloring gives any two nodes sharing an ancestor different colors).
That color count is the width of the dimension table extracted from the
digraph, which is why the bounds matter here.

Node identifiers are opaque hashables externally; internally everything
runs on dense integer handles and bitmask sets.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import (
    CycleDetected,
    EmptyDigraph,
    MalformedCsv,
    TooLargeForExact,
    UnknownNode,
)
from .intersection import (
    IntersectionGraph,
    SetValuedFunction,
    exact_chromatic,
    greedy_color,
)

NodeId = Hashable

DEFAULT_DEGENERACY_CAP = 16
DEFAULT_DOWN_CHROMATIC_CAP = 20

DEGENERACY_MODES = ("exact", "peel")


def _mask_bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class AcyclicDigraph:
    """Immutable acyclic digraph with memoized reachability queries.

    Closure sets are computed by DFS on first request and cached per queried
    node; no full transitive closure is kept unless a caller asks for
    everything (precompute or the hypergraph/coloring operations).
    """

    def __init__(self, nodes: Sequence[NodeId], edges: Sequence[tuple[NodeId, NodeId]]):
        self.nodes: tuple[NodeId, ...] = tuple(nodes)
        self.edges: tuple[tuple[NodeId, NodeId], ...] = tuple(edges)
        self._index = {u: i for i, u in enumerate(self.nodes)}
        n = len(self.nodes)
        self._out: list[list[int]] = [[] for _ in range(n)]
        self._in: list[list[int]] = [[] for _ in range(n)]
        for s, t in self.edges:
            si, ti = self._index[s], self._index[t]
            self._out[si].append(ti)
            self._in[ti].append(si)
        self._topo = self._toposort_or_raise()
        self._desc_cache: dict[int, int] = {}
        self._anc_cache: dict[int, int] = {}

    # -- construction helpers ------------------------------------------------

    def _toposort_or_raise(self) -> tuple[int, ...]:
        n = len(self.nodes)
        indeg = [len(self._in[i]) for i in range(n)]
        queue = [i for i in range(n) if indeg[i] == 0]
        order: list[int] = []
        while queue:
            v = queue.pop()
            order.append(v)
            for w in self._out[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        if len(order) < n:
            raise CycleDetected(self._find_cycle({i for i in range(n) if indeg[i] > 0}))
        return tuple(order)

    def _find_cycle(self, remaining: set[int]) -> list[NodeId]:
        start = min(remaining)
        path: list[int] = []
        on_path: dict[int, int] = {}
        v = start
        while v not in on_path:
            on_path[v] = len(path)
            path.append(v)
            v = next(w for w in self._out[v] if w in remaining)
        cycle = path[on_path[v]:]
        return [self.nodes[i] for i in cycle]

    # -- reachability ----------------------------------------------------------

    def _closure_mask(self, i: int, adj: list[list[int]], cache: dict[int, int]) -> int:
        cached = cache.get(i)
        if cached is not None:
            return cached
        mask = 1 << i
        stack = [i]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                shortcut = cache.get(w)
                if shortcut is not None:
                    mask |= shortcut
                elif not (mask >> w) & 1:
                    mask |= 1 << w
                    stack.append(w)
        cache[i] = mask
        return mask

    def _desc_mask(self, i: int) -> int:
        return self._closure_mask(i, self._out, self._desc_cache)

    def _anc_mask(self, i: int) -> int:
        return self._closure_mask(i, self._in, self._anc_cache)

    def _all_desc_masks(self) -> list[int]:
        for v in reversed(self._topo):
            if v not in self._desc_cache:
                mask = 1 << v
                for w in self._out[v]:
                    mask |= self._desc_cache[w]
                self._desc_cache[v] = mask
        return [self._desc_cache[i] for i in range(len(self.nodes))]

    def _all_anc_masks(self) -> list[int]:
        for v in self._topo:
            if v not in self._anc_cache:
                mask = 1 << v
                for w in self._in[v]:
                    mask |= self._anc_cache[w]
                self._anc_cache[v] = mask
        return [self._anc_cache[i] for i in range(len(self.nodes))]

    def precompute_reachability(self) -> None:
        self._all_desc_masks()
        self._all_anc_masks()

    def _require(self, u: NodeId) -> int:
        try:
            return self._index[u]
        except KeyError:
            raise UnknownNode(u) from None

    def _unmask(self, mask: int) -> frozenset[NodeId]:
        return frozenset(self.nodes[b] for b in _mask_bits(mask))

    def descendants_and_self(self, u: NodeId) -> frozenset[NodeId]:
        """All nodes reachable from u along edge direction, including u."""
        return self._unmask(self._desc_mask(self._require(u)))

    def ancestors_and_self(self, u: NodeId) -> frozenset[NodeId]:
        """Reachability on the reversed digraph, including u."""
        return self._unmask(self._anc_mask(self._require(u)))

    def topological_order(self) -> tuple[NodeId, ...]:
        return tuple(self.nodes[i] for i in self._topo)

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, u: NodeId) -> bool:
        return u in self._index


def build_digraph(
    edge_list: Iterable[tuple[NodeId, NodeId]],
    isolated: Iterable[NodeId] = (),
    precompute_reachability: bool = False,
) -> AcyclicDigraph:
    """Build a digraph from edge pairs plus optional isolated nodes.

    Duplicate edges are dropped silently; a cycle raises CycleDetected with
    one witness cycle.  Node order is first appearance.
    """
    nodes: list[NodeId] = []
    seen_nodes: set[NodeId] = set()
    edges: list[tuple[NodeId, NodeId]] = []
    seen_edges: set[tuple[NodeId, NodeId]] = set()
    for s, t in edge_list:
        for u in (s, t):
            if u not in seen_nodes:
                seen_nodes.add(u)
                nodes.append(u)
        if (s, t) not in seen_edges:
            seen_edges.add((s, t))
            edges.append((s, t))
    for u in isolated:
        if u not in seen_nodes:
            seen_nodes.add(u)
            nodes.append(u)
    g = AcyclicDigraph(nodes, edges)
    if precompute_reachability:
        g.precompute_reachability()
    return g


def read_edge_list(source) -> tuple[list[tuple[str, str]], list[str]]:
    """Parse the tab-separated edge-list format.

    One `source<TAB>target` edge per line; `#` starts a comment line; a line
    `node<TAB>` with empty target declares an isolated node.  Returns
    (edges, isolated).
    """
    if isinstance(source, (str, bytes)):
        fh = io.StringIO(source.decode() if isinstance(source, bytes) else source)
    else:
        fh = source
    edges: list[tuple[str, str]] = []
    isolated: list[str] = []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise MalformedCsv(f"edge list line {lineno}: expected 'source<TAB>target', got {line!r}")
        src, tgt = parts
        if tgt == "":
            isolated.append(src)
        else:
            edges.append((src, tgt))
    return edges, isolated


@dataclass(frozen=True)
class DownHypergraph:
    """Vertices of the digraph plus its inclusion-maximal closure sets."""

    vertices: tuple[NodeId, ...]
    hyperedges: tuple[frozenset[NodeId], ...]

    def __post_init__(self):
        if len(set(self.hyperedges)) != len(self.hyperedges):
            raise ValueError("hyperedges must be pairwise distinct")
        for e in self.hyperedges:
            for other in self.hyperedges:
                if e is not other and e < other:
                    raise ValueError(f"hyperedge {set(e)} is not maximal (contained in {set(other)})")


def down_hypergraph(g: AcyclicDigraph) -> DownHypergraph:
    """Keep the inclusion-maximal distinct descendants-and-self sets."""
    masks = g._all_desc_masks()
    distinct: list[int] = []
    seen: set[int] = set()
    for m in masks:
        if m not in seen:
            seen.add(m)
            distinct.append(m)
    maximal = [
        m for m in distinct
        if not any(other != m and m | other == other for other in distinct)
    ]
    return DownHypergraph(g.nodes, tuple(g._unmask(m) for m in maximal))


def max_down_set_size(g: AcyclicDigraph) -> int:
    if not g.nodes:
        raise EmptyDigraph("max down-set size is undefined on an empty digraph")
    return max(m.bit_count() for m in g._all_desc_masks())


def _edge_masks(h: DownHypergraph) -> list[int]:
    index = {u: i for i, u in enumerate(h.vertices)}
    masks = []
    for e in h.hyperedges:
        m = 0
        for u in e:
            m |= 1 << index[u]
        masks.append(m)
    return masks


def _exact_degeneracy(edge_masks: list[int], width: int) -> int:
    """Max over vertex subsets of the minimum edge-membership degree.

    Vectorized over all 2^width subsets: restrict every hyperedge, drop
    restrictions under two vertices, deduplicate per subset, then take the
    min degree per subset and the max over subsets.
    """
    if not edge_masks:
        return 0
    total = 1 << width
    subsets = np.arange(total, dtype=np.int64)
    popcount = np.zeros(total, dtype=np.int8)
    for bit in range(width):
        popcount += ((subsets >> bit) & 1).astype(np.int8)

    restricted = np.empty((total, len(edge_masks)), dtype=np.int64)
    for j, em in enumerate(edge_masks):
        r = subsets & em
        r[popcount[r] < 2] = 0
        restricted[:, j] = r
    restricted.sort(axis=1)
    distinct = np.empty(restricted.shape, dtype=bool)
    distinct[:, 0] = restricted[:, 0] != 0
    distinct[:, 1:] = (restricted[:, 1:] != restricted[:, :-1]) & (restricted[:, 1:] != 0)

    min_degree = np.full(total, np.iinfo(np.int64).max, dtype=np.int64)
    for u in range(width):
        degree_u = (((restricted >> u) & 1) * distinct).sum(axis=1)
        member = ((subsets >> u) & 1) == 1
        np.minimum(min_degree, degree_u, where=member, out=min_degree)
    min_degree[0] = 0
    return int(min_degree.max(initial=0))


def _peel_degeneracy(edge_masks: list[int], width: int) -> int:
    """Lower-bound estimate along one minimum-degree removal chain."""
    alive = (1 << width) - 1
    best = 0
    while alive:
        restrictions = {em & alive for em in edge_masks}
        restrictions = [r for r in restrictions if r.bit_count() >= 2]
        worst_u, worst_d = -1, None
        for u in _mask_bits(alive):
            d = sum(1 for r in restrictions if (r >> u) & 1)
            if worst_d is None or d < worst_d:
                worst_u, worst_d = u, d
        best = max(best, worst_d)
        alive &= ~(1 << worst_u)
    return best


def hypergraph_degeneracy(
    h: DownHypergraph, mode: str = "exact", cap: int = DEFAULT_DEGENERACY_CAP
) -> int:
    """Degeneracy of the down-hypergraph.

    Exact mode enumerates every vertex subset and requires at most `cap`
    vertices; peel mode runs a min-degree removal chain and is only a lower
    bound (restriction-and-dedup can break the monotonicity the graph
    argument relies on, so the chain value is never reported as exact).
    """
    if mode not in DEGENERACY_MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {DEGENERACY_MODES}")
    width = len(h.vertices)
    masks = _edge_masks(h)
    if mode == "exact":
        if width > cap:
            raise TooLargeForExact(width, cap, what="down-hypergraph vertex set")
        return _exact_degeneracy(masks, width)
    return _peel_degeneracy(masks, width)


@dataclass(frozen=True)
class ChromaticBounds:
    """Lower/upper bounds on the down-chromatic number.

    `degeneracy_exact` is False when the hypergraph exceeded the exact cap
    and the peel estimate fed the upper bound; `clamped` marks the defensive
    upper = max(lower, formula) adjustment.
    """

    lower: int
    upper: int
    max_down_set: int
    degeneracy: int
    degeneracy_exact: bool
    part: int
    clamped: bool


def down_chromatic_bounds(
    g: AcyclicDigraph,
    degeneracy_cap: int = DEFAULT_DEGENERACY_CAP,
    require_exact: bool = False,
) -> ChromaticBounds:
    """Bound the down-chromatic number from the closure structure.

    Lower bound: the largest descendants-and-self set is pairwise
    conflicting.  Upper bound: equals the lower bound when the hypergraph
    degeneracy is 1 or the largest set has 2 nodes; otherwise
    degeneracy * (largest - 2) + 1.  Both are greedy-achievable.
    """
    if not g.nodes:
        raise EmptyDigraph("chromatic bounds are undefined on an empty digraph")
    if not g.edges:
        return ChromaticBounds(1, 1, 1, 0, True, 0, False)
    largest = max_down_set_size(g)
    h = down_hypergraph(g)
    if len(h.vertices) <= degeneracy_cap:
        ind = hypergraph_degeneracy(h, "exact", cap=degeneracy_cap)
        exact = True
    elif require_exact:
        raise TooLargeForExact(len(h.vertices), degeneracy_cap, what="down-hypergraph vertex set")
    else:
        ind = hypergraph_degeneracy(h, "peel")
        exact = False
    if ind == 1 or largest == 2:
        return ChromaticBounds(largest, largest, largest, ind, exact, 1, False)
    formula = ind * (largest - 2) + 1
    return ChromaticBounds(largest, max(largest, formula), largest, ind, exact, 2, formula < largest)


@dataclass(frozen=True)
class DownColoring:
    """Node -> color in 1..k, with all of each closure set colored distinctly."""

    assignment: dict[NodeId, int]
    k: int

    def is_valid(self, g: AcyclicDigraph) -> bool:
        """Direct enumeration: every descendants-and-self set is rainbow."""
        for u in g.nodes:
            closure = g.descendants_and_self(u)
            colors = {self.assignment[v] for v in closure}
            if len(colors) != len(closure):
                return False
        return True


def down_conflict_graph(g: AcyclicDigraph) -> IntersectionGraph:
    """Pairwise conflict graph: two nodes clash when some node sees both
    among its descendants, i.e. their ancestors-and-self sets intersect."""
    masks = g._all_anc_masks()
    n = len(g.nodes)
    adj: dict[NodeId, list[NodeId]] = {u: [] for u in g.nodes}
    for i in range(n):
        for j in range(i + 1, n):
            if masks[i] & masks[j]:
                adj[g.nodes[i]].append(g.nodes[j])
                adj[g.nodes[j]].append(g.nodes[i])
    for u in adj:
        adj[u].sort()
    return IntersectionGraph(g.nodes, adj)


def greedy_down_coloring(g: AcyclicDigraph, order: str = "smallest-last") -> DownColoring:
    """Greedy proper coloring of the conflict graph; always valid, and on
    instances covered by the bounds it should not exceed the upper bound."""
    if not g.nodes:
        raise EmptyDigraph("cannot color an empty digraph")
    coloring = greedy_color(down_conflict_graph(g), order)
    return DownColoring(dict(coloring.assignment), coloring.k)


def exact_down_chromatic(g: AcyclicDigraph, cap: int = DEFAULT_DOWN_CHROMATIC_CAP) -> int:
    """Exact down-chromatic number via branch-and-bound on the conflict graph."""
    if not g.nodes:
        raise EmptyDigraph("chromatic number is undefined on an empty digraph")
    if len(g.nodes) > cap:
        raise TooLargeForExact(len(g.nodes), cap, what="conflict graph")
    return exact_chromatic(down_conflict_graph(g), cap=len(g.nodes))


def descendant_set_function(g: AcyclicDigraph) -> SetValuedFunction:
    """Nodes as data entries, each pointing at its descendants-and-self set.

    This is the indexing function for digraph dimension tables: coloring its
    intersection graph and materializing gives a schema answering
    descendant-conditioned queries.
    """
    g._all_desc_masks()
    return SetValuedFunction(
        g.nodes, {u: g.descendants_and_self(u) for u in g.nodes}
    )


def ancestor_set_function(g: AcyclicDigraph) -> SetValuedFunction:
    """Mirror of descendant_set_function on the reversed digraph."""
    g._all_anc_masks()
    return SetValuedFunction(
        g.nodes, {u: g.ancestors_and_self(u) for u in g.nodes}
    )
