"""Dense bit-packed linear algebra over GF(2).

Rows are packed little-endian into ``uint64`` words: column ``j`` lives in
word ``j // 64`` at bit ``j % 64``.  Elimination works a pivot at a time and
XORs whole word slices, so a row operation on a few thousand columns costs a
few dozen machine words.

Pivots are always chosen by scanning columns left to right and, inside a
column, rows top to bottom.  Every result in this module is therefore a
deterministic function of its input.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

WORD_BITS = 64
_ONE = np.uint64(1)


class DimensionError(ValueError):
    """Operand shapes do not fit together."""


def _nwords(ncols: int) -> int:
    return max(1, (ncols + WORD_BITS - 1) // WORD_BITS)


def pack(dense: np.ndarray) -> np.ndarray:
    """Pack a 2-d 0/1 array into rows of ``uint64`` words."""
    dense = np.asarray(dense)
    if dense.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {dense.shape}")
    rows, cols = dense.shape
    words = _nwords(cols)
    out = np.zeros((rows, words * 8), dtype=np.uint8)
    if cols:
        packed = np.packbits(dense.astype(np.uint8) & 1, axis=1, bitorder="little")
        out[:, : packed.shape[1]] = packed
    return out.view(np.uint64).reshape(rows, words)


def unpack(data: np.ndarray, ncols: int) -> np.ndarray:
    """Inverse of :func:`pack`; returns a ``uint8`` array of shape (rows, ncols)."""
    data = np.ascontiguousarray(data, dtype=np.uint64)
    rows = data.shape[0]
    if rows == 0:
        return np.zeros((0, ncols), dtype=np.uint8)
    as_bytes = data.view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_bytes, axis=1, count=ncols, bitorder="little")


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of dense 0/1 matrices reduced mod 2.

    Uses a float32 BLAS product; sums stay exact while the inner dimension is
    below 2**24.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[-1] >= 1 << 24:
        raise DimensionError("inner dimension too large for exact float32 accumulation")
    prod = a.astype(np.float32) @ b.astype(np.float32)
    return (prod.astype(np.int64) & 1).astype(np.uint8)


class BitVector:
    """Immutable packed vector over GF(2)."""

    __slots__ = ("length", "words")

    def __init__(self, length: int, words: np.ndarray):
        self.length = int(length)
        words = np.array(words, dtype=np.uint64).reshape(-1)
        if words.size != _nwords(self.length):
            raise DimensionError("word count does not match length")
        words.setflags(write=False)
        self.words = words

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitVector:
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        arr = arr.reshape(1, -1)
        return cls(arr.shape[1], pack(arr)[0])

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length, np.zeros(_nwords(length), dtype=np.uint64))

    def to_array(self) -> np.ndarray:
        return unpack(self.words.reshape(1, -1), self.length)[0]

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return int((self.words[i // WORD_BITS] >> np.uint64(i % WORD_BITS)) & _ONE)

    def __iter__(self):
        return iter(int(b) for b in self.to_array())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.length, self.words.tobytes()))

    def __add__(self, other: BitVector) -> BitVector:
        if self.length != other.length:
            raise DimensionError("length mismatch")
        return BitVector(self.length, self.words ^ other.words)

    def is_zero(self) -> bool:
        return not self.words.any()

    def weight(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def __repr__(self) -> str:
        return "BitVector(" + "".join(str(b) for b in self.to_array()) + ")"


class BitMatrix:
    """Row-major bit-packed matrix over GF(2).

    ``data`` has shape ``(rows, words)``; padding bits past ``cols`` are zero.
    Instances are treated as values: operations return new matrices.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        if data is None:
            data = np.zeros((self.rows, _nwords(self.cols)), dtype=np.uint64)
        data = np.ascontiguousarray(data, dtype=np.uint64)
        if data.shape != (self.rows, _nwords(self.cols)):
            raise DimensionError(f"payload shape {data.shape} does not fit {rows}x{cols}")
        self.data = data

    @classmethod
    def from_dense(cls, dense) -> BitMatrix:
        dense = np.asarray(dense, dtype=np.uint8)
        if dense.ndim == 1:
            dense = dense.reshape(1, -1)
        return cls(dense.shape[0], dense.shape[1], pack(dense))

    @classmethod
    def from_rows(cls, vectors: Sequence[BitVector], cols: int | None = None) -> BitMatrix:
        if not vectors:
            return cls(0, cols or 0)
        cols = vectors[0].length if cols is None else cols
        return cls(len(vectors), cols, np.stack([v.words for v in vectors]))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> np.ndarray:
        return unpack(self.data, self.cols)

    def copy(self) -> BitMatrix:
        return BitMatrix(self.rows, self.cols, self.data.copy())

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i])

    def row_vectors(self) -> list[BitVector]:
        return [self.row(i) for i in range(self.rows)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return int((self.data[i, j // WORD_BITS] >> np.uint64(j % WORD_BITS)) & _ONE)

    def transpose(self) -> BitMatrix:
        return BitMatrix.from_dense(self.to_dense().T)

    @property
    def T(self) -> BitMatrix:
        return self.transpose()

    def __matmul__(self, other):
        if isinstance(other, BitMatrix):
            return BitMatrix.from_dense(matmul(self.to_dense(), other.to_dense()))
        if isinstance(other, BitVector):
            if other.length != self.cols:
                raise DimensionError("vector length does not match column count")
            parity = np.bitwise_count(self.data & other.words).sum(axis=1) & 1
            return BitVector.from_bits(parity.astype(np.uint8))
        return NotImplemented

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return BitMatrix(self.rows, self.cols, self.data ^ other.data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data.tobytes()))

    def is_zero(self) -> bool:
        return not self.data.any()

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def _eliminate(data: np.ndarray, pivot_cols: int) -> list[int]:
    """Reduce packed rows to reduced row echelon form, in place.

    Only the first ``pivot_cols`` columns may hold pivots; row operations
    still act on the full width, which is how augmented systems are handled.
    """
    nrows = data.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(pivot_cols):
        if r == nrows:
            break
        w = c // WORD_BITS
        bit = _ONE << np.uint64(c % WORD_BITS)
        nz = np.flatnonzero(data[r:, w] & bit)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            data[[r, p]] = data[[p, r]]
        hits = np.flatnonzero(data[:, w] & bit)
        hits = hits[hits != r]
        if hits.size:
            # the pivot row is zero left of column c
            data[hits, w:] ^= data[r, w:]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form and pivot columns; ``m`` is not modified."""
    data = m.data.copy()
    pivots = _eliminate(data, m.cols)
    return BitMatrix(m.rows, m.cols, data), pivots


def rank(m: BitMatrix) -> int:
    """Dimension of the row space of ``m``."""
    return len(_eliminate(m.data.copy(), m.cols))


def row_basis(m: BitMatrix) -> BitMatrix:
    """The nonzero rows of the reduced echelon form of ``m``."""
    e, piv = rref(m)
    return BitMatrix(len(piv), m.cols, e.data[: len(piv)])


class RowReduction:
    """Reduction ``E = T @ M`` of ``M`` to reduced echelon form, with ``T`` recorded.

    Serves three purposes at once: the rank and pivots of ``M``, a basis of
    the left kernel ``{u : u @ M = 0}``, and solving ``u @ M = v`` for many
    right-hand sides ``v`` by a single matrix product.
    """

    def __init__(self, m: BitMatrix):
        self.rows = m.rows
        self.cols = m.cols
        aug = np.concatenate([m.to_dense(), np.eye(m.rows, dtype=np.uint8)], axis=1)
        data = pack(aug)
        self.pivots = _eliminate(data, m.cols)
        self.rank = len(self.pivots)
        full = unpack(data, m.cols + m.rows)
        self._echelon = BitMatrix.from_dense(full[: self.rank, : m.cols])
        self._transform = BitMatrix.from_dense(full[: self.rank, m.cols :])
        self._kernel = BitMatrix.from_dense(full[self.rank :, m.cols :])

    @property
    def nullity(self) -> int:
        return self.rows - self.rank

    def left_kernel(self) -> BitMatrix:
        """Left kernel basis as the rows of a matrix in reduced echelon form."""
        return row_basis(self._kernel)

    @cached_property
    def _transform_f(self) -> np.ndarray:
        return self._transform.to_dense().astype(np.float32)

    @cached_property
    def _echelon_f(self) -> np.ndarray:
        return self._echelon.to_dense().astype(np.float32)

    def solve_left(self, v: np.ndarray, check: bool = True) -> np.ndarray:
        """Solve ``u @ M = v`` row by row for a dense 0/1 batch ``v``.

        Each row of the result is the solution whose coordinates come only
        from the recorded pivot rows, so the map ``v -> u`` is linear.  With
        ``check`` set, a row of ``v`` outside the row space of ``M`` raises
        ``ValueError``.
        """
        v = np.atleast_2d(np.asarray(v, dtype=np.uint8))
        if v.shape[1] != self.cols:
            raise DimensionError(f"right-hand side has {v.shape[1]} columns, expected {self.cols}")
        coeff = v[:, self.pivots].astype(np.float32)
        u = ((coeff @ self._transform_f).astype(np.int64) & 1).astype(np.uint8)
        if check:
            back = ((coeff @ self._echelon_f).astype(np.int64) & 1).astype(np.uint8)
            bad = np.flatnonzero((back != v).any(axis=1))
            if bad.size:
                raise ValueError(f"{bad.size} right-hand side(s) not in the row space")
        return u

    def in_row_space(self, v: np.ndarray) -> np.ndarray:
        """Boolean mask: which rows of ``v`` lie in the row space of ``M``."""
        v = np.atleast_2d(np.asarray(v, dtype=np.uint8))
        coeff = v[:, self.pivots].astype(np.float32)
        back = ((coeff @ self._echelon_f).astype(np.int64) & 1).astype(np.uint8)
        return ~(back != v).any(axis=1)


def kernel_basis(m: BitMatrix) -> list[BitVector]:
    """Basis of ``{v : m @ v = 0}`` in reduced echelon form."""
    red = RowReduction(m.transpose())
    return red.left_kernel().row_vectors()


def solve(m: BitMatrix, b: BitVector) -> BitVector | None:
    """Some ``x`` with ``m @ x = b``, or ``None`` when the system is inconsistent.

    The answer is deterministic: it is supported on the independent columns
    recorded by the elimination, with every other coordinate zero.
    """
    if len(b) != m.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {m.rows} rows")
    red = RowReduction(m.transpose())
    rhs = b.to_array().reshape(1, -1)
    if not red.in_row_space(rhs)[0]:
        return None
    return BitVector.from_bits(red.solve_left(rhs, check=False)[0])


def random_matrix(rows: int, cols: int, rng: np.random.Generator, density: float = 0.5) -> BitMatrix:
    return BitMatrix.from_dense((rng.random((rows, cols)) < density).astype(np.uint8))
