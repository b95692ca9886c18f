import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cechgraph.errors import ConnectivityError, DomainError, SizeError
from cechgraph.graphs import (
    closed_neighborhood,
    custom_graph,
    cycle,
    distances,
    flip,
    format_vertex,
    hypercube,
    induced_subgraph,
    parse_vertex,
    prefix_graph,
    subcube_vertices,
)
from oracles import bfs_distances


@pytest.mark.parametrize("n,nv,ne", [(1, 2, 1), (3, 8, 12), (4, 16, 32)])
def test_hypercube_sizes(n, nv, ne):
    Q = hypercube(n)
    assert (Q.n_vertices, len(Q.edges)) == (nv, ne)
    assert all(Q.degree(v) == n for v in range(nv))
    assert all((u ^ w).bit_count() == 1 for u, w in Q.edges)


@pytest.mark.parametrize("n", [0, 21])
def test_hypercube_range(n):
    with pytest.raises(SizeError):
        hypercube(n)


def test_prefix_graph_small():
    assert prefix_graph(2).edges == {(0, 1)}
    assert prefix_graph(3).edges == {(0, 1), (0, 2)}
    with pytest.raises(SizeError):
        prefix_graph(0)


@pytest.mark.parametrize("n", range(1, 7))
def test_prefix_of_power_of_two_is_hypercube(n):
    assert prefix_graph(2**n).edges == hypercube(n).edges


def test_cycle():
    assert len(cycle(3).edges) == 3
    C5 = cycle(5)
    assert (C5.n_vertices, len(C5.edges)) == (5, 5)
    assert cycle(8).diameter() == 4
    with pytest.raises(SizeError):
        cycle(2)


def test_distances_examples():
    assert distances(hypercube(4))[0b0000, 0b1111] == 4
    assert distances(cycle(8))[0, 4] == 4
    assert distances(prefix_graph(3))[1, 2] == 2


@pytest.mark.parametrize("G", [hypercube(3), hypercube(5), prefix_graph(13), cycle(9),
                               custom_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 4)])])
def test_distance_matrix_against_bfs_and_metric_axioms(G):
    D = distances(G)
    assert D.tolist() == bfs_distances(G.n_vertices, sorted(G.edges))
    n = G.n_vertices
    assert (np.diag(D) == 0).all() and (D == D.T).all()
    for a, b, c in itertools.product(range(n), repeat=3):
        assert D[a, c] <= D[a, b] + D[b, c]


def test_distance_matrix_read_only():
    D = distances(hypercube(2))
    with pytest.raises(ValueError):
        D[0, 1] = 5


def test_disconnected_rejected():
    with pytest.raises(ConnectivityError):
        custom_graph(4, [(0, 1), (2, 3)])


def test_bad_edges_rejected():
    with pytest.raises(DomainError):
        custom_graph(3, [(0, 0)])
    with pytest.raises(DomainError):
        custom_graph(3, [(0, 1), (1, 0), (1, 2)])
    with pytest.raises(DomainError):
        custom_graph(3, [(0, 1), (1, 5)])


def test_induced_subgraph():
    Q = hypercube(3)
    sub = induced_subgraph(Q, subcube_vertices(3, 1, 0))
    assert sub.n_vertices == 4 and len(sub.edges) == 4
    assert sorted(sub.degree(v) for v in range(4)) == [2, 2, 2, 2]
    assert sub.labels == (0, 2, 4, 6)
    assert induced_subgraph(Q, range(8)) == Q
    path = induced_subgraph(cycle(6), [1, 2, 3, 4])
    assert path.edges == {(0, 1), (1, 2), (2, 3)}
    with pytest.raises(ConnectivityError):
        induced_subgraph(cycle(6), [0, 3])


def test_closed_neighborhood():
    Q3 = hypercube(3)
    assert closed_neighborhood(Q3, 5, 0) == {5}
    assert closed_neighborhood(Q3, 0, 1) == {0, 1, 2, 4}
    assert closed_neighborhood(hypercube(2), parse_vertex("10"), 1) == {
        parse_vertex("10"), parse_vertex("00"), parse_vertex("11")}


@pytest.mark.parametrize("G", [hypercube(4), cycle(7), prefix_graph(11)])
def test_neighborhoods_nest(G):
    for v in range(G.n_vertices):
        for k in range(G.diameter() + 1):
            assert closed_neighborhood(G, v, k) <= closed_neighborhood(G, v, k + 1)


def test_flip_and_vertex_strings():
    assert flip(0b000, []) == 0
    assert flip(parse_vertex("000"), {1, 3}) == parse_vertex("101")
    # lambda_1 for m-1 = 7: clear the lowest set bit
    assert flip(7, {1}) == 6
    with pytest.raises(DomainError):
        flip(0, {4}, 3)
    with pytest.raises(DomainError):
        flip(0, {0})
    assert format_vertex(1, 2) == "10"
    assert format_vertex(3, 2) == "11"
    with pytest.raises(DomainError):
        parse_vertex("012")


@given(st.integers(0, 2**10 - 1), st.sets(st.integers(1, 10)))
def test_flip_is_involutive(v, idx):
    assert flip(flip(v, idx, 10), idx, 10) == v


@given(st.integers(0, 2**8 - 1))
def test_vertex_string_round_trip(v):
    assert parse_vertex(format_vertex(v, 8)) == v


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 40))
def test_prefix_graph_distance_is_hamming(m):
    D = distances(prefix_graph(m))
    for u in range(m):
        for w in range(m):
            assert D[u, w] == (u ^ w).bit_count()
