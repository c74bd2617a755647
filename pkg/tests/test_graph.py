import pytest

from edgespec.errors import Disconnected, DuplicateEdge, EmptyGraph, LoopEdge
from edgespec.generators import complete, cycle, path, petersen, star, with_pendant
from edgespec.graph import (
    Graph,
    build_graph,
    count_leaves,
    cyclomatic_number,
    dead_end_edges,
    is_bipartite,
    prune_dead_ends,
    spanning_tree,
)


def test_edge_ids_pair_up():
    g = build_graph([("a", "b"), ("b", "c")])
    assert g.num_dir_edges == 4
    assert (g.iota[0], g.tau[0]) == (0, 1)
    assert (g.iota[1], g.tau[1]) == (1, 0)
    assert g.opp(2) == 3 and g.opp(3) == 2
    assert g.edge(2, 1) == 3


def test_labels_interned_in_order_of_appearance():
    g = build_graph([("x", "y"), ("z", "x")])
    assert g.labels == ("x", "y", "z")


@pytest.mark.parametrize(
    "pairs, exc",
    [
        ([("a", "a")], LoopEdge),
        ([("a", "b"), ("b", "a")], DuplicateEdge),
        ([], EmptyGraph),
    ],
)
def test_invalid_input(pairs, exc):
    with pytest.raises(exc):
        build_graph(pairs)


def test_disconnected():
    with pytest.raises(Disconnected):
        Graph(["a", "b", "c", "d"], [(0, 1), (2, 3)])


def test_successors_skip_backtrack():
    g = complete(4)
    e = g.edge(0, 1)
    assert sorted(g.tau[f] for f in g.successors(e)) == [2, 3]
    assert all(g.iota[f] == 1 for f in g.successors(e))


@pytest.mark.parametrize("g, c", [(cycle(5), 1), (complete(4), 3), (complete(5), 6), (petersen(), 6), (path(4), 0)])
def test_cyclomatic(g, c):
    assert cyclomatic_number(g) == c


def test_bipartite():
    ok, colors = is_bipartite(cycle(6))
    assert ok and all(colors[u] != colors[v] for u, v in cycle(6).undirected_pairs())
    assert is_bipartite(cycle(5)) == (False, None)


def test_spanning_tree_counts(corpus_graph):
    _, g = corpus_graph
    t = spanning_tree(g)
    assert len(t.tree_dir_edges) == g.num_vertices - 1
    assert len(t.non_tree_dir_edges) == cyclomatic_number(g)
    depths = [t.depth[g.tau[e]] for e in t.tree_dir_edges]
    assert depths == sorted(depths)
    for x in range(g.num_vertices):
        if x != t.root:
            assert g.tau[t.parent_edge[x]] == x


def test_prune_removes_pendant_path():
    g = with_pendant(cycle(3), [2])
    pr = prune_dead_ends(g)
    assert pr.pruned.num_vertices == 3 and pr.pruned.num_edges == 3
    assert len(pr.removed_vertices) == 2
    assert len(pr.removed_dir_edges) == 4
    assert set(dead_end_edges(g)) <= set(pr.removed_dir_edges)


def test_dead_ends_are_one_directional():
    # From the triangle into the pendant is a dead end; the way back is not.
    g = with_pendant(cycle(3), [1])
    dead = set(dead_end_edges(g))
    into = g.edge(0, 3)
    assert into in dead and g.opp(into) not in dead


def test_prune_tree_is_empty():
    pr = prune_dead_ends(star(3))
    assert pr.empty and pr.pruned is None
    assert len(pr.removed_vertices) == 4


def test_prune_keeps_pruned_graph(corpus_graph):
    _, g = corpus_graph
    pr = prune_dead_ends(g)
    assert pr.pruned == g and not pr.removed_dir_edges and not pr.dead_ends


def test_leaves():
    assert count_leaves(path(5)) == 2
    assert count_leaves(star(3)) == 3
    assert count_leaves(with_pendant(cycle(3), [1])) == 1
