import pytest
from hypothesis import given, settings

from conftest import brute_cliques, brute_theta1, edge_set, small_graphs
from gnpcover.baselines import c1_reference, exact_theta1, greedy_cover, lower_bound
from gnpcover.cover import CoverParams, run_cover, verify_cover
from gnpcover.errors import SizingError
from gnpcover.graph import Graph, generate_gnp


def test_lower_bound_examples(petersen):
    assert lower_bound(Graph.complete(5)).lower == 1
    c7 = Graph.cycle(7)
    assert lower_bound(c7).lower == c7.m
    rep = lower_bound(petersen)
    assert not brute_cliques(10, edge_set(petersen), 3)
    assert (rep.m, rep.omega, rep.lower) == (15, 2, 15)
    assert lower_bound(Graph.empty(4)).lower == 0


def test_reference_constant():
    assert c1_reference(0.5) == pytest.approx(0.1201133, abs=1e-7)
    with pytest.raises(ValueError):
        c1_reference(0.0)


@pytest.mark.parametrize("n", range(2, 13))
def test_exact_on_complete_graphs(n):
    size, witness = exact_theta1(Graph.complete(n))
    assert size == 1 and witness.cliques == [tuple(range(n))]


def test_exact_small_examples():
    assert exact_theta1(Graph.cycle(5))[0] == 5
    k4_minus = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    size, witness = exact_theta1(k4_minus)
    assert size == 2 == brute_theta1(4, edge_set(k4_minus))
    assert sorted(witness) == [(0, 1, 2), (0, 1, 3)]
    assert exact_theta1(Graph.empty(5))[0] == 0


def test_exact_cap():
    with pytest.raises(SizingError):
        exact_theta1(Graph.complete(13))
    assert exact_theta1(Graph.complete(13), cap=13)[0] == 1


def test_greedy_examples(petersen):
    assert len(greedy_cover(Graph.complete(9))) == 1
    assert len(greedy_cover(petersen)) == 15
    g = generate_gnp(120, 0.5, 2)
    assert verify_cover(g, greedy_cover(g))


def test_greedy_breaks_ties_by_lowest_index():
    # two disjoint triangles joined at nothing: first edge (0,1) grows with 2
    g = Graph.from_edges(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (1, 3)])
    assert greedy_cover(g).cliques == [(0, 1, 2), (1, 3), (3, 4, 5)]


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=7))
def test_exact_matches_exhaustive_oracle(g):
    size, witness = exact_theta1(g)
    assert size == brute_theta1(g.n, edge_set(g))
    assert len(witness) == size and verify_cover(g, witness)


@settings(max_examples=80, deadline=None)
@given(small_graphs(min_n=3, max_n=9))
def test_sandwich(g):
    lower = lower_bound(g).lower
    exact, _ = exact_theta1(g)
    greedy = greedy_cover(g)
    assert verify_cover(g, greedy)
    assert lower <= exact <= len(greedy) <= g.m
    run = run_cover(g, CoverParams(schedule_override=(3,), rng_seed=g.m))
    assert lower <= exact <= len(run.cover)


def test_exact_on_denser_graphs_at_the_cap():
    for seed in range(5):
        g = generate_gnp(12, 0.7, seed)
        size, witness = exact_theta1(g)
        assert verify_cover(g, witness)
        assert lower_bound(g).lower <= size <= len(greedy_cover(g))
