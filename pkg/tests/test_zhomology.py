from __future__ import annotations

import pytest

from tighttri.simplicial import ComplexStructureError, FacetComplex, simplex, simplex_boundary
from tighttri.zhomology import (
    BitMatrix,
    TooManyVertices,
    betti1_z2,
    betti_z2,
    boundary_matrix,
    gf2_rank,
    is_orientable,
    is_z2_tight_bruteforce,
    orientation,
)

import oracles
from conftest import built, base_case

OCTAHEDRON = FacetComplex.from_facets([(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)])
RP2 = FacetComplex.from_facets([(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5), (1, 2, 4), (2, 3, 5),
                                (1, 3, 4), (2, 4, 5), (1, 3, 5)])
FOUR_CYCLE = FacetComplex.from_facets([(0, 1), (1, 2), (2, 3), (0, 3)])


def test_gf2_rank_basics():
    assert gf2_rank([0b011, 0b110, 0b101]) == 2
    assert gf2_rank([]) == 0
    assert gf2_rank([0, 0]) == 0


def test_bitmatrix_transpose_and_product():
    A = BitMatrix(2, 3, (0b01, 0b11, 0b10))
    At = A.transpose()
    assert At.rows == 3 and At.cols == 2
    assert all(A.entry(r, c) == At.entry(c, r) for r in range(2) for c in range(3))
    assert (A @ At).rows == 2


@pytest.mark.parametrize("X", [OCTAHEDRON, RP2, simplex_boundary(range(5))], ids=["octa", "rp2", "bd4"])
def test_boundary_squares_to_zero(X):
    for j in range(2, X.dim + 1):
        assert (boundary_matrix(X, j - 1) @ boundary_matrix(X, j)).is_zero()


def test_boundary_matrix_range():
    with pytest.raises(ValueError):
        boundary_matrix(OCTAHEDRON, 3)
    with pytest.raises(ValueError):
        boundary_matrix(OCTAHEDRON, 0)


def test_known_betti_numbers():
    assert betti_z2(OCTAHEDRON) == (1, 0, 1)
    assert betti_z2(RP2) == (1, 1, 1)
    assert betti_z2(base_case(2)[1]) == (1, 2, 1)
    assert betti_z2(simplex(range(4))) == (1, 0, 0, 0)
    assert betti_z2(FOUR_CYCLE) == (1, 1)


@pytest.mark.parametrize("X", [OCTAHEDRON, RP2, FOUR_CYCLE, base_case(2)[1], base_case(3)[1], base_case(3)[0]],
                         ids=["octa", "rp2", "c4", "torus", "k3", "k3ball"])
def test_betti_matches_dense_oracle(X):
    assert betti_z2(X) == oracles.betti(list(X.facets))
    assert betti1_z2(X) == oracles.betti(list(X.facets))[1]


def test_betti_on_table_boundary_matches_oracle():
    B = built("M4_15")[6]
    assert betti1_z2(B) == oracles.betti(list(B.facets))[1] == 30


@pytest.mark.parametrize("X,expected", [(OCTAHEDRON, True), (RP2, False), (base_case(2)[1], True),
                                        (base_case(3)[1], False), (base_case(4)[1], True)],
                         ids=["octa", "rp2", "torus", "k3", "k4"])
def test_orientability(X, expected):
    assert is_orientable(X) is expected
    assert oracles.orientable(list(X.facets)) is expected


def test_orientation_is_coherent():
    signs = orientation(OCTAHEDRON)
    assert signs is not None and set(signs) <= {1, -1}


def test_orientation_rejects_disconnected():
    two = FacetComplex.from_facets(list(simplex_boundary(range(4)).facets)
                                   + [tuple(v + 4 for v in f) for f in simplex_boundary(range(4)).facets])
    with pytest.raises(ComplexStructureError):
        orientation(two)


@pytest.mark.parametrize("X,expected", [
    (FOUR_CYCLE, False), (OCTAHEDRON, False), (RP2, True), (simplex_boundary(range(4)), True),
    (base_case(2)[1], True),
], ids=["c4", "octa", "rp2", "bd3", "torus"])
def test_bruteforce_tightness_matches_oracle(X, expected):
    assert is_z2_tight_bruteforce(X) is expected
    assert oracles.tight_bruteforce(list(X.facets)) is expected


def test_bruteforce_disconnected_is_not_tight():
    assert not is_z2_tight_bruteforce(FacetComplex.from_facets([(0, 1), (2, 3)]))


def test_bruteforce_vertex_limit():
    with pytest.raises(TooManyVertices):
        is_z2_tight_bruteforce(base_case(3)[1], max_vertices=8)
