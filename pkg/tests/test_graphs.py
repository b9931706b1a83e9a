import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stacklab import graphs
from stacklab._text import FormatError


def as_label_set(g):
    labels = g.labels if g.labels is not None else np.arange(1, g.vertex_count + 1)[:, None]
    return {frozenset((tuple(labels[u - 1]), tuple(labels[v - 1]))) for u, v in g.edges}


def nx_label_set(h):
    def flat(x):
        if isinstance(x, tuple):
            return tuple(y for part in x for y in flat(part))
        return (x,)

    return {frozenset((flat(a), flat(b))) for a, b in h.edges}


def nx_path(n):
    return nx.path_graph(range(1, n + 1))


@pytest.mark.parametrize("n", range(1, 11))
def test_product_edge_counts(n):
    assert graphs.cartesian_product(graphs.path(n), graphs.path(n)).edge_count == 2 * n * (n - 1)
    assert graphs.strong_product(graphs.path(n), graphs.path(n)).edge_count == 4 * n * n - 6 * n + 2
    d = graphs.directed_path(n)
    assert graphs.triangulated_product(d, d).edge_count == 2 * n * (n - 1) + (n - 1) ** 2


@pytest.mark.parametrize("n1,n2", [(1, 4), (3, 3), (4, 2), (5, 6)])
def test_products_match_networkx(n1, n2):
    g = graphs.strong_product(graphs.path(n1), graphs.path(n2))
    assert as_label_set(g) == nx_label_set(nx.strong_product(nx_path(n1), nx_path(n2)))
    g = graphs.cartesian_product(graphs.path(n1), graphs.cycle(max(n2, 3)))
    h = nx.cartesian_product(nx_path(n1), nx.cycle_graph(range(1, max(n2, 3) + 1)))
    assert as_label_set(g) == nx_label_set(h)


def test_triple_strong_product_matches_networkx():
    g = graphs.strong_product(graphs.path(3), graphs.path(2), graphs.path(4))
    h = nx.strong_product(nx.strong_product(nx_path(3), nx_path(2)), nx_path(4))
    assert as_label_set(g) == nx_label_set(h)
    assert graphs.strong_product(graphs.path(2), graphs.path(2), graphs.path(2)).edge_count == 28


def test_lexicographic_ids():
    g = graphs.strong_product(graphs.path(3), graphs.path(4))
    ids = np.arange(1, 13)
    assert np.array_equal(g.labels[:, 0], (ids - 1) // 4 + 1)
    assert np.array_equal(g.labels[:, 1], (ids - 1) % 4 + 1)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_triangulated_triple_path_max_degree_12(n):
    d = graphs.directed_path(n)
    assert graphs.triangulated_product(d, d, d).max_degree() == 12


@pytest.mark.parametrize("n", [2, 3, 5])
def test_product_containment(n):
    d = graphs.directed_path(n)
    tri = as_label_set(graphs.triangulated_product(d, d, d))
    strong = as_label_set(graphs.strong_product(graphs.path(n), graphs.path(n), graphs.path(n)))
    cart = graphs.cartesian_product(graphs.cartesian_product(graphs.path(n), graphs.path(n)), graphs.path(n))
    assert as_label_set(cart) <= tri <= strong


def test_difference_classes_partition_edges():
    n = 4
    d = graphs.directed_path(n)
    g = graphs.triangulated_product(d, d, d)
    vecs = graphs.difference_vectors(g)
    classes = {tuple(v) for v in vecs}
    assert classes == {(0, 0, 1), (0, 1, 0), (1, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)}
    # re-derive each class from the labels
    for u, v, vec in zip(g.edges[:, 0], g.edges[:, 1], vecs):
        assert tuple(g.labels[v - 1] - g.labels[u - 1]) == tuple(vec)
    s = graphs.strong_product(graphs.path(3), graphs.path(3))
    assert {tuple(v) for v in graphs.difference_vectors(s)} == {(0, 1), (1, 0), (1, 1), (1, -1)}


def test_triangulated_diagonal_override():
    d = graphs.directed_path(3)
    anti = graphs.triangulated_product(d, d, diagonal=lambda a, b: False)
    assert {tuple(v) for v in graphs.difference_vectors(anti)} == {(0, 1), (1, 0), (1, -1)}


def test_generator_determinism():
    a = graphs.strong_product(graphs.path(5), graphs.cycle(4))
    b = graphs.strong_product(graphs.path(5), graphs.cycle(4))
    assert graphs.format_graph(a) == graphs.format_graph(b)


def test_small_generators():
    assert graphs.star(4).max_degree() == 4 and graphs.star(4).vertex_count == 5
    assert graphs.cycle(5).edge_count == 5
    assert graphs.complete(6).edge_count == 15
    assert graphs.path(1).edge_count == 0
    with pytest.raises(graphs.InvalidSizeError):
        graphs.path(0)
    with pytest.raises(graphs.InvalidSizeError):
        graphs.cycle(2)


def test_from_edges_rejects_bad_input():
    with pytest.raises(ValueError, match="duplicate edge 1 2"):
        graphs.Graph.from_edges(3, [(1, 2), (2, 1)])
    with pytest.raises(ValueError):
        graphs.Graph.from_edges(3, [(1, 4)])


def test_parse_errors():
    with pytest.raises(FormatError):
        graphs.parse_graph("graph 3 2\ne 1 2\n")
    with pytest.raises(FormatError):
        graphs.parse_graph("graph 3 1\ne 2 1\n")
    with pytest.raises(FormatError):
        graphs.parse_graph("nothing here\n")


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.data())
def test_text_round_trip(n, data):
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    g = graphs.Graph.from_edges(n, chosen)
    h = graphs.parse_graph(graphs.format_graph(g, ["a comment"]))
    assert h.vertex_count == n and np.array_equal(h.edges, g.edges)


def test_labelled_round_trip():
    g = graphs.strong_product(graphs.path(3), graphs.path(2), graphs.path(2))
    h = graphs.parse_graph(graphs.format_graph(g))
    assert np.array_equal(h.labels, g.labels) and np.array_equal(h.edges, g.edges)
