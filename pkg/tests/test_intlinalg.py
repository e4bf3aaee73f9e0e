import random

import pytest
from hypothesis import given, settings, strategies as st

from schurpair.errors import NotAComplex
from schurpair.intlinalg import SparseIntMatrix, homology, smith_normal_form
from snf_oracle import bareiss_det, matmul, minor_gcd_invariants


matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_snf_matches_minor_gcd(M):
    A = SparseIntMatrix.from_dense(M, len(M[0]))
    assert smith_normal_form(A).invariants == minor_gcd_invariants(M)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_transforms_reconstruct_diagonal(M):
    A = SparseIntMatrix.from_dense(M, len(M[0]))
    res = smith_normal_form(A, keep_transforms=True)
    U, V = [list(r) for r in res.left], [list(r) for r in res.right]
    assert matmul(matmul(U, M), V) == res.diagonal(len(M), len(M[0]))
    assert abs(bareiss_det(U)) == 1 and abs(bareiss_det(V)) == 1


def test_divisibility_chain_and_sparse_dense_agreement():
    rng = random.Random(7)
    for _ in range(100):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        A = SparseIntMatrix.from_dense(M, n)
        sparse = smith_normal_form(A).invariants
        dense = smith_normal_form(A, keep_transforms=True).invariants
        assert sparse == dense
        assert all(b % a == 0 for a, b in zip(sparse, sparse[1:]))
        assert all(d > 0 for d in sparse)


def test_known_forms():
    A = SparseIntMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert smith_normal_form(A).invariants == (2, 6, 12)
    assert smith_normal_form(SparseIntMatrix.zeros(3, 2)).invariants == ()
    assert smith_normal_form(SparseIntMatrix.zeros(0, 0)).rank == 0


def test_coordinate_text_round_trip():
    A = SparseIntMatrix(3, 4, {(0, 1): 5, (2, 3): -2})
    assert SparseIntMatrix.from_coordinate_text(A.to_coordinate_text()) == A


def test_matmul_and_transpose():
    A = SparseIntMatrix.from_dense([[1, 2], [3, 4]])
    B = SparseIntMatrix.from_dense([[0, 1], [1, 0]])
    assert (A @ B).to_dense() == [[2, 1], [4, 3]]
    assert A.transpose().to_dense() == [[1, 3], [2, 4]]


def test_homology_of_circle_like_complex():
    # Z --2--> Z --0--> : H = Z2 in the middle
    d_in = SparseIntMatrix.from_dense([[2]])
    d_out = SparseIntMatrix.zeros(0, 1)
    h = homology(d_out, d_in)
    assert h.torsion.factors == (2,) and h.free_rank == 0


def test_homology_free_part():
    h = homology(SparseIntMatrix.zeros(0, 2), SparseIntMatrix.from_dense([[3], [0]]))
    assert h.torsion.factors == (3,) and h.free_rank == 1


def test_homology_rejects_non_complex():
    with pytest.raises(NotAComplex):
        homology(SparseIntMatrix.from_dense([[1]]), SparseIntMatrix.from_dense([[1]]))
