import random

from cliqueindex.corpus import (
    random_dag,
    random_expr,
    random_function,
    random_intervals,
    random_out_tree,
)
from cliqueindex.engine import And, Atom, Not, Or
from cliqueindex.tree import build_tree_schema


def test_same_seed_same_instances():
    a = random_dag(random.Random(42))
    b = random_dag(random.Random(42))
    assert a.nodes == b.nodes
    assert a.edges == b.edges
    assert random_intervals(random.Random(7), 30) == random_intervals(random.Random(7), 30)
    fa = random_function(random.Random(9))
    fb = random_function(random.Random(9))
    assert fa.image == fb.image


def test_different_seeds_differ():
    a = random_intervals(random.Random(1), 30)
    b = random_intervals(random.Random(2), 30)
    assert a != b


def test_out_tree_shape():
    for seed in range(10):
        g = random_out_tree(random.Random(seed))
        n = len(g)
        assert len(g.edges) == n - 1
        indeg = {u: 0 for u in g.nodes}
        for _, v in g.edges:
            indeg[v] += 1
        roots = [u for u, d in indeg.items() if d == 0]
        assert len(roots) == 1
        assert all(d <= 1 for d in indeg.values())


def test_intervals_have_valid_endpoints():
    ivs = random_intervals(random.Random(3), 100)
    assert all(r.y >= r.x for r in ivs)
    assert any(r.y == r.x for r in ivs)


def test_expr_atoms_reference_table_columns():
    clique = build_tree_schema(4)
    rng = random.Random(5)

    def atoms(q):
        if isinstance(q, Atom):
            yield q
        elif isinstance(q, Not):
            yield from atoms(q.item)
        elif isinstance(q, (And, Or)):
            for item in q.items:
                yield from atoms(item)

    for _ in range(50):
        q = random_expr(rng, clique)
        for atom in atoms(q):
            assert 1 <= atom.col <= clique.k
