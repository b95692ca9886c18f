import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cechgraph.complexes import SimplicialComplex, boundary_of_simplex, cech_complex, simplex
from cechgraph.errors import DomainError, SizeError
from cechgraph.formulas import alpha
from cechgraph.graphs import cycle, hypercube, prefix_graph
from cechgraph.homology import (
    Z,
    Z2,
    betti,
    boundary_matrix,
    check_summary,
    choose_coefficients,
    reduced_homology,
    smith_normal_form,
)
from oracles import all_faces, dense_boundary, faces_by_dim, invariant_factors_bruteforce, rank_q, reduced_betti_q

# six-vertex triangulation of the projective plane
RP2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5), (1, 3, 4), (1, 2, 4),
       (2, 4, 5), (2, 3, 5), (1, 3, 5)]


def test_edge_boundary():
    B = boundary_matrix(simplex([3, 7]), 1)
    assert B.to_dense().tolist() == [[-1], [1]]


def test_boundary_squares_to_zero():
    K = cech_complex(hypercube(3), 3)
    for d in range(2, K.dim + 1):
        A, B = boundary_matrix(K, d - 1).to_dense(), boundary_matrix(K, d).to_dense()
        assert not (A @ B).any()


def test_boundary_shape_and_column_weights():
    B = boundary_matrix(cech_complex(hypercube(2), 2), 2)
    assert B.shape == (6, 4)
    assert all(len(c) == 3 for c in B.columns)


def test_boundary_matches_dense_oracle():
    K = cech_complex(hypercube(2), 3)
    by = faces_by_dim(all_faces(K.maximal_faces))
    for d in range(1, K.dim + 1):
        assert boundary_matrix(K, d).to_dense().tolist() == dense_boundary(by[d], by[d - 1])


def test_smith_examples():
    z = smith_normal_form(np.zeros((3, 4), dtype=int))
    assert (z.rank, z.invariant_factors) == (0, ())
    one = smith_normal_form([[2]])
    assert (one.rank, one.invariant_factors) == (1, (2,))
    tet = smith_normal_form(boundary_matrix(boundary_of_simplex(range(4)), 2))
    assert (tet.rank, tet.invariant_factors) == (3, ())
    assert smith_normal_form([[2, 4], [6, 8]]).invariant_factors == (2, 4)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_smith_against_determinant_divisors(rows, cols, data):
    M = [[data.draw(st.integers(-6, 6)) for _ in range(cols)] for _ in range(rows)]
    S = smith_normal_form(M)
    assert S.rank == rank_q(M)
    assert list(S.invariant_factors) == invariant_factors_bruteforce(M)
    facs = S.invariant_factors
    assert all(b % a == 0 for a, b in zip(facs, facs[1:]))


def test_smith_grows_past_machine_words():
    big = 2**70
    S = smith_normal_form([[big, 0], [0, 3 * big]])
    assert S.invariant_factors == (big, 3 * big)
    assert S.escalated


def test_projective_plane_torsion():
    h = reduced_homology(SimplicialComplex(RP2))
    assert h.betti_z == (0, 0, 0)
    assert h.torsion_at(1) == (2,)
    assert h.betti_z2 == (0, 1, 1)
    check_summary(SimplicialComplex(RP2), h)


@pytest.mark.parametrize("n,r,expected", [
    (3, 2, {2: 7}),
    (3, 1, {1: 5}),
    (4, 3, {3: 1, 4: 24}),
    (4, 4, {4: 1, 6: 10}),
    (4, 5, {10: 7}),
    (4, 6, {14: 1}),
])
def test_hypercube_homology(n, r, expected):
    K = cech_complex(hypercube(n), r)
    for coeff in (Z, Z2):
        h = reduced_homology(K, coeff)
        assert h.betti_map(coeff) == expected
        check_summary(K, h)
    assert all(not reduced_homology(K, Z).torsion_at(d) for d in range(K.dim + 1))


def test_hypercube_five_three_over_z2():
    h = reduced_homology(cech_complex(hypercube(5), 3), Z2)
    assert h.betti_map(Z2) == {3: 9, 4: 120}


@pytest.mark.parametrize("m", range(5, 10))
def test_cycle_recovers_circle(m):
    for r in range(1, (m + 1) // 2):
        assert reduced_homology(cech_complex(cycle(m), r)).betti_map() == {1: 1}


def test_betti_shortcut():
    assert betti(simplex([0]), 0) == 0
    assert betti(cech_complex(hypercube(4), 2), 2) == 31
    assert betti(cech_complex(prefix_graph(12), 2), 2) == sum(alpha(m - 1) for m in range(2, 13))
    K = cech_complex(hypercube(3), 3)
    h = reduced_homology(K)
    for d in range(-1, K.dim + 2):
        assert betti(K, d) == h.betti(d)
        assert betti(K, d, Z2) == h.betti(d, Z2)


def test_unreduced_counts_components():
    K = cech_complex(hypercube(3), 0)
    assert reduced_homology(K, reduced=False).betti(0) == 8
    assert reduced_homology(K).betti(0) == 7


def test_void_and_budget_errors():
    with pytest.raises(DomainError):
        reduced_homology(SimplicialComplex([]))
    with pytest.raises(SizeError):
        reduced_homology(cech_complex(hypercube(4), 6), budget=100)


def test_choose_coefficients():
    assert choose_coefficients(cech_complex(hypercube(3), 2)) == Z
    assert choose_coefficients(cech_complex(hypercube(4), 5)) == Z
    assert choose_coefficients(cech_complex(hypercube(4), 5), Z2) == Z2
    big = SimplicialComplex([range(18)])
    assert choose_coefficients(big) == Z2
    with pytest.raises(DomainError):
        choose_coefficients(big, "q")


def test_summary_json():
    import json

    h = reduced_homology(cech_complex(hypercube(2), 1))
    doc = json.loads(h.to_json())
    assert doc["reduced"] is True
    assert doc["homology"][1] == {"dim": 1, "betti_z": 1, "torsion": [], "betti_z2": 1}


def random_complex(rng, n_vertices=8, n_max=6, max_size=4):
    return SimplicialComplex([
        rng.sample(range(n_vertices), rng.randint(1, max_size)) for _ in range(rng.randint(1, n_max))
    ])


def test_random_complexes_against_rational_oracle():
    rng = random.Random(11)
    for _ in range(60):
        K = random_complex(rng)
        h = reduced_homology(K)
        check_summary(K, h)
        assert list(h.betti_z) == reduced_betti_q(K.maximal_faces)
        if not any(h.torsion_at(d) for d in range(K.dim + 1)):
            assert h.betti_z == h.betti_z2
