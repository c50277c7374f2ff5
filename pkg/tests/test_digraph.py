import io
import random

import pytest

from cliqueindex.corpus import random_dag, random_out_tree
from cliqueindex.digraph import (
    build_digraph,
    down_chromatic_bounds,
    down_hypergraph,
    DownColoring,
    DownHypergraph,
    exact_down_chromatic,
    greedy_down_coloring,
    hypergraph_degeneracy,
    max_down_set_size,
    read_edge_list,
)
from cliqueindex.errors import (
    CycleDetected,
    EmptyDigraph,
    MalformedCsv,
    TooLargeForExact,
    UnknownNode,
)
from cliqueindex.oracle import oracle_degeneracy

from conftest import PAIR_EDGES, PAIR_NODES


def test_empty_edge_list_gives_empty_digraph():
    g = build_digraph([])
    assert len(g) == 0
    assert list(g.topological_order()) == []


def test_isolated_nodes_are_kept():
    g = build_digraph([("a", "b")], isolated=["z"])
    assert set(g.nodes) == {"a", "b", "z"}
    assert g.descendants_and_self("z") == {"z"}


def test_duplicate_edges_are_deduplicated():
    g = build_digraph([("a", "b"), ("a", "b")])
    assert len(g.edges) == 1


def test_two_cycle_is_rejected_with_witness():
    with pytest.raises(CycleDetected) as exc:
        build_digraph([("a", "b"), ("b", "a")])
    cycle = exc.value.cycle
    assert cycle[0] == cycle[-1]
    assert set(cycle) == {"a", "b"}
    assert "->" in str(exc.value)


def test_self_loop_is_rejected():
    with pytest.raises(CycleDetected):
        build_digraph([("a", "a")])


def test_longer_cycle_witness_is_a_real_cycle():
    with pytest.raises(CycleDetected) as exc:
        build_digraph([("a", "b"), ("b", "c"), ("c", "d"), ("d", "b")])
    cycle = exc.value.cycle
    assert cycle[0] == cycle[-1]
    edges = {("a", "b"), ("b", "c"), ("c", "d"), ("d", "b")}
    for u, v in zip(cycle, cycle[1:]):
        assert (u, v) in edges


def test_unknown_node_raises():
    g = build_digraph([("a", "b")])
    with pytest.raises(UnknownNode):
        g.descendants_and_self("q")
    with pytest.raises(UnknownNode):
        g.ancestors_and_self("q")


def test_closures_on_pair_digraph(pair_dag):
    assert pair_dag.descendants_and_self(12) == {12, 1, 2}
    assert pair_dag.descendants_and_self(1) == {1}
    assert pair_dag.ancestors_and_self(1) == {1, 12, 13, 14}
    assert pair_dag.ancestors_and_self(34) == {34}


def test_closures_on_chain():
    g = build_digraph([("a", "b"), ("b", "c"), ("c", "d")])
    assert g.descendants_and_self("a") == {"a", "b", "c", "d"}
    assert g.ancestors_and_self("d") == {"a", "b", "c", "d"}
    assert max_down_set_size(g) == 4


def test_topological_order_respects_edges(rng):
    for _ in range(20):
        g = random_dag(rng)
        pos = {u: i for i, u in enumerate(g.topological_order())}
        for u, v in g.edges:
            assert pos[u] < pos[v]


def test_precomputed_reachability_matches_lazy(rng):
    for _ in range(10):
        g = random_dag(rng)
        h = build_digraph(list(g.edges), isolated=list(g.nodes),
                          precompute_reachability=True)
        for u in g.nodes:
            assert g.descendants_and_self(u) == h.descendants_and_self(u)
            assert g.ancestors_and_self(u) == h.ancestors_and_self(u)


def test_max_down_set_size_empty_raises():
    with pytest.raises(EmptyDigraph):
        max_down_set_size(build_digraph([]))


def test_down_hypergraph_on_pair_digraph(pair_dag):
    h = down_hypergraph(pair_dag)
    assert set(h.vertices) == PAIR_NODES
    expected = {
        frozenset({12, 1, 2}), frozenset({13, 1, 3}), frozenset({14, 1, 4}),
        frozenset({23, 2, 3}), frozenset({24, 2, 4}), frozenset({34, 3, 4}),
    }
    assert set(h.hyperedges) == expected


def test_down_hypergraph_keeps_only_maximal_sets():
    g = build_digraph([("a", "b"), ("b", "c")])
    h = down_hypergraph(g)
    # D[b] and D[c] are nested inside D[a], so only one hyperedge survives
    assert set(h.hyperedges) == {frozenset({"a", "b", "c"})}


def test_down_hypergraph_rejects_nested_edges():
    with pytest.raises(ValueError):
        DownHypergraph(("a", "b", "c"),
                       (frozenset({"a", "b", "c"}), frozenset({"a", "b"})))
    with pytest.raises(ValueError):
        DownHypergraph(("a", "b"), (frozenset({"a", "b"}), frozenset({"a", "b"})))


def test_degeneracy_on_pair_digraph(pair_dag):
    h = down_hypergraph(pair_dag)
    assert hypergraph_degeneracy(h, mode="exact") == 3
    assert oracle_degeneracy(h) == 3


def test_degeneracy_single_edge_is_one():
    g = build_digraph([("a", "b"), ("a", "c")])
    h = down_hypergraph(g)
    assert hypergraph_degeneracy(h, mode="exact") == 1


def test_degeneracy_edgeless_is_zero():
    g = build_digraph([], isolated=["a", "b"])
    h = down_hypergraph(g)
    # singleton hyperedges never count, so the minimum degree is 0
    assert hypergraph_degeneracy(h, mode="exact") == 0


def test_peel_never_exceeds_exact(rng):
    for _ in range(40):
        g = random_dag(rng)
        h = down_hypergraph(g)
        exact = hypergraph_degeneracy(h, mode="exact")
        peel = hypergraph_degeneracy(h, mode="peel")
        assert peel <= exact
        assert exact == oracle_degeneracy(h)


def test_degeneracy_cap_is_enforced():
    nodes = [f"x{i}" for i in range(17)]
    h = down_hypergraph(build_digraph([], isolated=nodes))
    with pytest.raises(TooLargeForExact):
        hypergraph_degeneracy(h, mode="exact", cap=16)
    # the peel estimate has no cap
    assert hypergraph_degeneracy(h, mode="peel", cap=16) == 0


def test_bounds_on_pair_digraph(pair_dag):
    b = down_chromatic_bounds(pair_dag)
    assert (b.lower, b.upper) == (3, 4)
    assert b.part == 2
    assert b.degeneracy == 3
    assert b.degeneracy_exact


def test_bounds_collapse_for_trees(rng):
    for _ in range(20):
        g = random_out_tree(rng)
        b = down_chromatic_bounds(g)
        assert b.part == 1
        assert b.lower == b.upper == max_down_set_size(g)


def test_bounds_single_edge():
    b = down_chromatic_bounds(build_digraph([("a", "b")]))
    assert (b.lower, b.upper) == (2, 2)
    assert b.part == 1


def test_bounds_edgeless():
    b = down_chromatic_bounds(build_digraph([], isolated=["a", "b", "c"]))
    assert (b.lower, b.upper) == (1, 1)


def test_bounds_never_cross(rng):
    for _ in range(40):
        g = random_dag(rng)
        b = down_chromatic_bounds(g)
        assert b.lower <= b.upper


def test_bounds_require_exact_raises_past_cap():
    chain = [(f"n{i}", f"n{i + 1}") for i in range(17)]
    g = build_digraph(chain)
    with pytest.raises(TooLargeForExact):
        down_chromatic_bounds(g, degeneracy_cap=4, require_exact=True)
    b = down_chromatic_bounds(g, degeneracy_cap=4)
    assert not b.degeneracy_exact
    assert b.lower <= b.upper


def test_greedy_down_coloring_pair_digraph(pair_dag):
    c = greedy_down_coloring(pair_dag)
    assert c.k == 4
    assert c.is_valid(pair_dag)


def test_greedy_down_coloring_all_orders_valid(pair_dag, rng):
    for order in ("input", "largest-first", "smallest-last"):
        c = greedy_down_coloring(pair_dag, order=order)
        assert c.is_valid(pair_dag)
    for _ in range(15):
        g = random_dag(rng)
        for order in ("input", "largest-first", "smallest-last"):
            assert greedy_down_coloring(g, order=order).is_valid(g)


def test_down_coloring_validity_detects_clash(pair_dag):
    bad = DownColoring({u: 1 for u in pair_dag.nodes}, 1)
    assert not bad.is_valid(pair_dag)


def test_exact_down_chromatic_pair_digraph(pair_dag):
    assert exact_down_chromatic(pair_dag) == 4


def test_exact_down_chromatic_chain():
    g = build_digraph([("a", "b"), ("b", "c"), ("c", "d")])
    assert exact_down_chromatic(g) == 4


def test_exact_down_chromatic_cap():
    chain = [(f"n{i}", f"n{i + 1}") for i in range(21)]
    g = build_digraph(chain)
    with pytest.raises(TooLargeForExact):
        exact_down_chromatic(g, cap=20)


def test_exact_between_bounds(rng):
    for _ in range(30):
        g = random_dag(rng, max_nodes=9)
        b = down_chromatic_bounds(g)
        chi = exact_down_chromatic(g)
        assert b.lower <= chi <= b.upper
        assert greedy_down_coloring(g).k >= chi


def test_read_edge_list_round_trip():
    text = "# comment\na\tb\nb\tc\nlonely\t\n"
    edges, isolated = read_edge_list(io.StringIO(text))
    assert edges == [("a", "b"), ("b", "c")]
    assert isolated == ["lonely"]
    g = build_digraph(edges, isolated=isolated)
    assert set(g.nodes) == {"a", "b", "c", "lonely"}


def test_read_edge_list_rejects_malformed_line():
    with pytest.raises(MalformedCsv) as exc:
        read_edge_list(io.StringIO("a\tb\nnot-an-edge\n"))
    assert "2" in str(exc.value)


def test_pair_edges_constant_is_consistent(pair_dag):
    assert set(pair_dag.nodes) == PAIR_NODES
    assert len(pair_dag.edges) == len(PAIR_EDGES)
