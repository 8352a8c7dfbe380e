import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import edge_set, py_gnp_edges, small_graphs
from gnpcover.errors import GraphParseError
from gnpcover.graph import (EdgeSet, Graph, edge_index, edge_pair, generate_gnp, load_graph,
                            pair_count, save_graph)


def dump(g):
    buf = io.StringIO()
    save_graph(g, buf)
    return buf.getvalue()


def test_path_from_text():
    g = load_graph("3 2\n0 1\n1 2\n")
    assert g.n == 3 and g.edge_list() == [(0, 1), (1, 2)]


def test_text_round_trip_is_identity_on_canonical_files():
    text = "4 3\n0 1\n0 3\n2 3\n"
    assert dump(load_graph(text)) == text


def test_load_accepts_any_edge_order():
    assert load_graph("3 2\n1 2\n0 1\n") == load_graph("3 2\n0 1\n1 2\n")


def test_generated_graph_survives_save_and_load():
    g = generate_gnp(50, 0.3, 7)
    back = load_graph(dump(g))
    assert np.array_equal(back.adjacency, g.adjacency)


@pytest.mark.parametrize("text, line", [
    ("3\n0 1\n", 1),
    ("x 1\n0 1\n", 1),
    ("3 2\n0 1\n", 1),
    ("3 1\n0 1\n1 2\n", 3),
    ("3 1\n0 3\n", 2),
    ("3 1\n-1 2\n", 2),
    ("3 1\n2 1\n", 2),
    ("3 1\n1 1\n", 2),
    ("3 2\n0 1\n0 1\n", 3),
    ("3 1\n0 one\n", 2),
    ("", 1),
])
def test_malformed_files_name_the_line(text, line):
    with pytest.raises(GraphParseError) as err:
        load_graph(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


def test_gnp_matches_reference_hash():
    for seed in (0, 5, 2**63 + 11):
        g = generate_gnp(70, 0.4, seed)
        assert edge_set(g) == py_gnp_edges(70, 0.4, seed)


def test_gnp_is_pure_and_prefix_stable():
    a, b = generate_gnp(90, 0.5, 3), generate_gnp(90, 0.5, 3)
    assert a == b and hash(a) == hash(b)
    small = generate_gnp(40, 0.5, 3)
    assert np.array_equal(a.dense()[:40, :40], small.dense())
    assert generate_gnp(90, 0.5, 4) != a


def test_gnp_extremes_and_errors():
    assert generate_gnp(20, 0.0, 1).m == 0
    assert generate_gnp(20, 1.0, 1).m == pair_count(20)
    with pytest.raises(ValueError):
        generate_gnp(10, 1.5, 0)
    with pytest.raises(ValueError):
        generate_gnp(0, 0.5, 0)
    with pytest.raises(ValueError):
        generate_gnp(10, 0.5, -1)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 150), st.floats(0, 1), st.integers(0, 2**64 - 1))
def test_gnp_symmetric_without_loops(n, p, seed):
    dense = generate_gnp(n, p, seed).dense()
    assert np.array_equal(dense, dense.T)
    assert not dense.diagonal().any()


def test_edge_density_over_many_seeds():
    n, p, seeds = 200, 0.3, 100
    total = sum(generate_gnp(n, p, s).m for s in range(seeds))
    mean = seeds * pair_count(n) * p
    sigma = math.sqrt(seeds * pair_count(n) * p * (1 - p))
    assert abs(total - mean) < 4 * sigma


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 300).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 2))))
def test_edge_index_inverts(args):
    n, u = args
    vs = np.arange(u + 1, n)
    idx = edge_index(n, u, vs)
    assert np.all(np.diff(idx) == 1)
    uu, vv = edge_pair(n, idx)
    assert np.all(uu == u) and np.array_equal(vv, vs)
    assert edge_index(n, n - 2, n - 1) == pair_count(n) - 1


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=12))
def test_dense_and_edge_views_agree(g):
    dense = g.dense()
    edges = {(u, v) for u in range(g.n) for v in range(u + 1, g.n) if dense[u, v]}
    assert edge_set(g) == edges
    assert g.m == len(edges)
    assert Graph.from_dense(dense) == g
    assert list(g.degrees()) == [len(g.neighbours(u)) for u in range(g.n)]


def test_graph_constructors():
    assert Graph.complete(6).m == 15
    assert Graph.cycle(5).edge_list() == [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]
    assert Graph.empty(4).m == 0
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_dense(np.array([[0, 1], [0, 0]], bool))


def test_graph_is_read_only():
    g = Graph.complete(4)
    with pytest.raises(ValueError):
        g.adjacency[0, 0] = 0


def test_edge_set_membership_and_removal():
    g = Graph.complete(4)
    full = EdgeSet.full(g)
    assert full.size == 6 and (2, 1) in full and (1, 1) not in full
    drop = np.zeros(6, bool)
    drop[edge_index(4, 0, 1)] = True
    rest = full.without(drop)
    assert rest.size == 5 and (0, 1) not in rest and full.size == 6
    assert rest.as_graph().m == 5
    with pytest.raises(ValueError):
        EdgeSet.from_edges(Graph.cycle(4), [(0, 2)])
