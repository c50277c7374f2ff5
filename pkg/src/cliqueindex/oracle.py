"""Brute-force reference implementations.

Everything here is a direct transcription of a definition, written without
reusing the optimized code paths it exists to check.  Oracles enumerate;
they never sample.  Size caps fail loudly instead of degrading.
"""

from __future__ import annotations

import math
from itertools import chain, combinations

from .errors import OutOfRange, TooLargeForExact
from .intersection import IntersectionGraph, SetValuedFunction

ORACLE_PAIRWISE_CAP = 5000
ORACLE_DEGENERACY_CAP = 16
ORACLE_TREE_CAP = 16


def oracle_intersection_graph(f: SetValuedFunction) -> IntersectionGraph:
    """All-pairs image intersection test, quadratic on purpose."""
    n = len(f.entries)
    if n > ORACLE_PAIRWISE_CAP:
        raise TooLargeForExact(n, ORACLE_PAIRWISE_CAP, what="entry list")
    adj: dict = {e: [] for e in f.entries}
    for i in range(n):
        for j in range(i + 1, n):
            a, b = f.entries[i], f.entries[j]
            if f.image[a] & f.image[b]:
                adj[a].append(b)
                adj[b].append(a)
    for e in adj:
        adj[e].sort()
    return IntersectionGraph(tuple(f.entries), adj)


def oracle_degeneracy(h) -> int:
    """Max over vertex subsets S of the min edge-membership degree in H[S].

    H[S] keeps the distinct restrictions of hyperedges to S that still have
    at least two vertices; a subset with no surviving restriction scores 0.
    Full enumeration of all 2^|V| subsets.
    """
    vertices = list(h.vertices)
    if len(vertices) > ORACLE_DEGENERACY_CAP:
        raise TooLargeForExact(len(vertices), ORACLE_DEGENERACY_CAP, what="hypergraph vertex set")
    edges = [frozenset(e) for e in h.hyperedges]
    best = 0
    subsets = chain.from_iterable(
        combinations(vertices, r) for r in range(1, len(vertices) + 1)
    )
    for subset in subsets:
        s = frozenset(subset)
        restrictions = {e & s for e in edges}
        restrictions = [r for r in restrictions if len(r) >= 2]
        if restrictions:
            delta = min(sum(1 for r in restrictions if u in r) for u in s)
        else:
            delta = 0
        best = max(best, delta)
    return best


def oracle_interval_intersections(intervals, a, b) -> set:
    """Ids of closed intervals [x, y] meeting [a, b]: x <= b and y >= a."""
    out = set()
    for rec in intervals:
        if rec.x <= b and rec.y >= a:
            out.add(rec.id)
    return out


def _extent(k: int, n: int) -> tuple[int, int]:
    """Half-open extent of tree interval k in units of 2^(1-n)."""
    level = math.floor(math.log2(k)) + 1
    width = 1 << (n - level)
    lo = (k - (1 << (level - 1))) * width
    return lo, lo + width


def oracle_tree_overlap(k: int, n: int) -> set[int]:
    """All tree interval ids whose half-open dyadic extent meets k's."""
    if n > ORACLE_TREE_CAP:
        raise TooLargeForExact(n, ORACLE_TREE_CAP, what="tree level count")
    if not 1 <= k < (1 << n):
        raise OutOfRange(f"interval id {k} outside 1..{(1 << n) - 1}")
    lo, hi = _extent(k, n)
    out = set()
    for j in range(1, 1 << n):
        jlo, jhi = _extent(j, n)
        if jlo < hi and lo < jhi:
            out.add(j)
    return out
