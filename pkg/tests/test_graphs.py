import numpy as np
import pytest

from gc2gnn import (
    GraphFormatError,
    LabeledGraph,
    TreeParams,
    make_tree,
    random_graph,
    read_graph,
    write_graph,
)


def bfs_reachable(graph, start=0):
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for w in graph.neighbors(v):
                w = int(w)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


# -- trees --------------------------------------------------------------------


def test_tree_counts_and_degrees_full_range():
    for x in range(0, 4):
        for k in range(0, 21):
            for m in range(1, 21):
                tree, root = make_tree(TreeParams(x, k, m))
                n = 1 + m + x + (m - 1) * k
                assert tree.n == n
                assert len(tree.edges) == n - 1
                assert len(bfs_reachable(tree, root)) == n  # connected + acyclic
                degrees = tree.degrees
                assert degrees[root] == m
                assert degrees[1] == x + 1
                for i in range(2, m + 1):
                    assert degrees[i] == k + 1
                assert (degrees[m + 1 :] == 1).all()


def test_tree_example_size():
    tree, root = make_tree(TreeParams(1, 3, 4))
    assert tree.n == 15
    assert tree.degrees[root] == 4


def test_tree_leaf_coloring():
    tree, _ = make_tree(TreeParams(2, 3, 4), coloring="leaves-blue")
    assert tree.palette == 2
    assert (tree.colors[: 5] == 1).all()  # root + internal
    assert (tree.colors[5:] == 2).all()  # all leaves
    with pytest.raises(ValueError, match="coloring"):
        make_tree(TreeParams(1, 1, 1), coloring="rainbow")


def test_tree_params_validation():
    with pytest.raises(ValueError):
        TreeParams(-1, 0, 1)
    with pytest.raises(ValueError):
        TreeParams(0, 0, 0)


# -- random graphs -------------------------------------------------------------


def test_random_graph_deterministic():
    a = random_graph(200, 5.0, 2, 123)
    b = random_graph(200, 5.0, 2, 123)
    assert a == b
    c = random_graph(200, 5.0, 2, 124)
    assert not (a == c)


def test_random_graph_single_vertex():
    g = random_graph(1, 0.0, 1, 5)
    assert g.n == 1 and len(g.edges) == 0


def test_random_graph_mean_degree():
    means = []
    for seed in range(20):
        g = random_graph(2000, 5.0, 1, seed)
        means.append(2 * len(g.edges) / g.n)
    mean = float(np.mean(means))
    assert abs(mean - 5.0) <= 0.5


@pytest.mark.parametrize("palette", [1, 2, 3])
def test_random_graph_colors_partition(palette):
    g = random_graph(500, 4.0, palette, 7)
    assert g.colors.min() >= 1 and g.colors.max() <= palette


def test_random_graph_invalid_probability():
    with pytest.raises(ValueError, match="invalid edge probability"):
        random_graph(10, 20.0, 1, 0)


# -- construction validation -----------------------------------------------


def test_graph_rejects_self_loop():
    with pytest.raises(ValueError, match="self-loop"):
        LabeledGraph(2, 1, np.ones(2, int), np.array([[0, 0]]))


def test_graph_rejects_bad_color():
    with pytest.raises(ValueError, match="color out of range"):
        LabeledGraph(2, 1, np.array([1, 2]), np.empty((0, 2), int))


def test_graph_canonicalizes_edges():
    g = LabeledGraph(3, 1, np.ones(3, int), np.array([[2, 0], [0, 1], [1, 0]]))
    assert np.array_equal(g.edges, [[0, 1], [0, 2]])
    assert list(g.neighbors(0)) == [1, 2]


def test_max_degree(triangle):
    assert triangle.max_degree == 2


# -- text format ----------------------------------------------------------------


def test_io_round_trip_triangle(tmp_path, triangle):
    path = tmp_path / "tri.graph"
    write_graph(path, triangle)
    back, root = read_graph(path)
    assert back == triangle and root is None


def test_io_round_trip_tree_with_root(tmp_path):
    tree, root = make_tree(TreeParams(1, 3, 4))
    path = tmp_path / "tree.graph"
    write_graph(path, tree, root=root)
    back, back_root = read_graph(path)
    assert back == tree and back_root == root


def test_io_round_trip_colored(tmp_path):
    g = random_graph(50, 4.0, 3, 11)
    path = tmp_path / "g.graph"
    write_graph(path, g)
    back, _ = read_graph(path)
    assert back == g


@pytest.mark.parametrize(
    "content,fragment",
    [
        ("3 1\n1 1 1\n0 0\n", "self-loop"),
        ("3 1\n1 1 2\n", "color out of range"),
        ("3 1\n1 1\n", "expected 3 colors"),
        ("3 1\n1 1 1\n1 0\n", "must satisfy u < v"),
        ("3 1\n1 1 1\n0 5\n", "out of range"),
        ("3 1\n1 1 1\nroot 7\n", "root 7 out of range"),
        ("junk\n", "file too short"),
        ("a b\n1\n", "malformed header"),
    ],
)
def test_io_rejects_malformed(tmp_path, content, fragment):
    path = tmp_path / "bad.graph"
    path.write_text(content)
    with pytest.raises(GraphFormatError, match=fragment):
        read_graph(path)
