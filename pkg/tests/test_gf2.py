from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holocoh import gf2


def naive_rank(a: np.ndarray) -> int:
    """Plain elimination over integers mod 2, kept separate from the packed code."""
    a = a.copy() % 2
    rank = 0
    rows, cols = a.shape
    for c in range(cols):
        hits = [r for r in range(rank, rows) if a[r, c]]
        if not hits:
            continue
        a[[rank, hits[0]]] = a[[hits[0], rank]]
        for r in range(rows):
            if r != rank and a[r, c]:
                a[r] ^= a[rank]
        rank += 1
    return rank


matrices = st.tuples(st.integers(0, 9), st.integers(0, 140), st.integers(0, 2**32 - 1)).map(
    lambda t: np.random.default_rng(t[2]).integers(0, 2, size=(t[0], t[1]), dtype=np.uint8)
)


def test_pack_roundtrip_across_word_boundary():
    rng = np.random.default_rng(0)
    for cols in (1, 63, 64, 65, 130):
        dense = rng.integers(0, 2, size=(5, cols), dtype=np.uint8)
        assert np.array_equal(gf2.unpack(gf2.pack(dense), cols), dense)


def test_identity_rank_and_solve():
    eye = gf2.BitMatrix.identity(70)
    assert gf2.rank(eye) == 70
    b = gf2.BitVector.from_bits([i % 3 == 0 for i in range(70)])
    assert gf2.solve(eye, b) == b


def test_solve_picks_pivot_solution():
    m = gf2.BitMatrix.from_dense([[1, 1]])
    assert gf2.solve(m, gf2.BitVector.from_bits([1])).to_array().tolist() == [1, 0]


def test_inconsistent_system_returns_none():
    m = gf2.BitMatrix.from_dense([[1, 0], [1, 0]])
    assert gf2.solve(m, gf2.BitVector.from_bits([1, 0])) is None


def test_rref_pivots_leftmost():
    m = gf2.BitMatrix.from_dense([[0, 1, 1], [0, 1, 0], [0, 0, 0]])
    red, piv = gf2.rref(m)
    assert piv == [1, 2]
    assert red.to_dense().tolist() == [[0, 1, 0], [0, 0, 1], [0, 0, 0]]


def test_shape_mismatch_raises():
    with pytest.raises(gf2.DimensionError):
        gf2.BitMatrix.zeros(2, 3) + gf2.BitMatrix.zeros(3, 2)


def test_matmul_matches_integer_product():
    rng = np.random.default_rng(1)
    a = rng.integers(0, 2, size=(17, 90), dtype=np.uint8)
    b = rng.integers(0, 2, size=(90, 33), dtype=np.uint8)
    expected = (a.astype(int) @ b.astype(int)) % 2
    assert np.array_equal(gf2.matmul(a, b), expected)
    packed = gf2.BitMatrix.from_dense(a) @ gf2.BitMatrix.from_dense(b)
    assert np.array_equal(packed.to_dense(), expected)


@settings(max_examples=300, deadline=None)
@given(matrices)
def test_rank_matches_naive(a):
    assert gf2.rank(gf2.BitMatrix.from_dense(a.reshape(a.shape))) == naive_rank(a)


@settings(max_examples=400, deadline=None)
@given(matrices)
def test_rank_nullity(a):
    m = gf2.BitMatrix(a.shape[0], a.shape[1], gf2.pack(a)) if a.size else gf2.BitMatrix(*a.shape)
    kernel = gf2.kernel_basis(m)
    assert gf2.rank(m) + len(kernel) == a.shape[1]
    for v in kernel:
        assert (m @ v).is_zero()
    if kernel:
        assert gf2.rank(gf2.BitMatrix.from_rows(kernel)) == len(kernel)


@settings(max_examples=400, deadline=None)
@given(matrices, st.integers(0, 2**32 - 1))
def test_solve_soundness(a, seed):
    rng = np.random.default_rng(seed)
    rows, cols = a.shape
    m = gf2.BitMatrix(rows, cols, gf2.pack(a)) if a.size else gf2.BitMatrix(rows, cols)
    # a consistent right-hand side
    x = rng.integers(0, 2, size=cols, dtype=np.uint8)
    b = (a.astype(int) @ x.astype(int)) % 2 if cols else np.zeros(rows, dtype=np.uint8)
    sol = gf2.solve(m, gf2.BitVector.from_bits(b))
    assert sol is not None
    assert np.array_equal((a.astype(int) @ sol.to_array().astype(int)) % 2 if cols else np.zeros(rows), b)
    # an arbitrary right-hand side is solvable exactly when it does not raise the rank
    c = rng.integers(0, 2, size=rows, dtype=np.uint8)
    consistent = naive_rank(np.column_stack([a, c])) == naive_rank(a) if rows else True
    assert (gf2.solve(m, gf2.BitVector.from_bits(c)) is not None) == consistent


def test_row_reduction_left_kernel_and_membership():
    rng = np.random.default_rng(7)
    a = rng.integers(0, 2, size=(30, 12), dtype=np.uint8)
    red = gf2.RowReduction(gf2.BitMatrix.from_dense(a))
    left = red.left_kernel().to_dense()
    assert red.rank + red.nullity == 30
    assert left.shape[0] == red.nullity
    assert not gf2.matmul(left, a).any()
    inside = gf2.matmul(rng.integers(0, 2, size=(4, 30), dtype=np.uint8), a)
    assert red.in_row_space(inside).all()
    coeffs = red.solve_left(inside)
    assert np.array_equal(gf2.matmul(coeffs, a), inside)


def test_solve_left_rejects_outside_vectors():
    a = np.array([[1, 0, 0], [0, 1, 0]], dtype=np.uint8)
    red = gf2.RowReduction(gf2.BitMatrix.from_dense(a))
    with pytest.raises(ValueError):
        red.solve_left(np.array([[0, 0, 1]], dtype=np.uint8))


def test_bitvector_algebra():
    u = gf2.BitVector.from_bits([1, 0, 1, 1])
    v = gf2.BitVector.from_bits([1, 1, 0, 1])
    assert (u + v).to_array().tolist() == [0, 1, 1, 0]
    assert (u + u).is_zero()
    assert u.weight() == 3
    assert hash(u) == hash(gf2.BitVector.from_bits([1, 0, 1, 1]))
