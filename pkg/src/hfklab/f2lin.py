"""Dense linear algebra over the two-element field.

Matrices are stored row-major with each row packed into a Python int: bit
``j`` of ``rows[i]`` is the entry in row ``i``, column ``j``.  Python ints
are arbitrary-width bitsets, so row operations are single XORs regardless of
the column count.

Vectors are plain ints using the same bit convention.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, Singular

__all__ = [
    "F2Matrix",
    "rank",
    "rref",
    "kernel_basis",
    "image_basis",
    "mul",
    "inverse",
    "SpanBuilder",
    "vectors_rank",
]


def _parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass(frozen=True)
class F2Matrix:
    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0:
            raise DimensionMismatch("negative dimension")
        if len(self.rows) != self.nrows:
            raise DimensionMismatch(f"{len(self.rows)} rows given for a {self.nrows}-row matrix")
        limit = 1 << self.ncols
        if any(r < 0 or r >= limit for r in self.rows):
            raise DimensionMismatch(f"row has bits beyond column {self.ncols}")

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> F2Matrix:
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> F2Matrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[int]], ncols: int | None = None) -> F2Matrix:
        entries = [list(r) for r in entries]
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        rows = []
        for r in entries:
            if len(r) != ncols:
                raise DimensionMismatch("ragged matrix")
            rows.append(sum(1 << j for j, x in enumerate(r) if x % 2))
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def from_sparse(cls, nrows: int, ncols: int, row_indices: Iterable[Iterable[int]]) -> F2Matrix:
        """Rows given as lists of column indices holding a 1 (repeats cancel)."""
        rows = []
        for idx in row_indices:
            v = 0
            for j in idx:
                if not 0 <= j < ncols:
                    raise DimensionMismatch(f"column index {j} out of range for {ncols} columns")
                v ^= 1 << j
            rows.append(v)
        if len(rows) != nrows:
            raise DimensionMismatch(f"expected {nrows} rows, got {len(rows)}")
        return cls(nrows, ncols, tuple(rows))

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[int]) -> F2Matrix:
        rows = [0] * nrows
        for j, col in enumerate(columns):
            while col:
                low = col & -col
                i = low.bit_length() - 1
                if i >= nrows:
                    raise DimensionMismatch("column vector longer than row count")
                rows[i] |= 1 << j
                col ^= low
        return cls(nrows, len(columns), tuple(rows))

    @classmethod
    def random(cls, nrows: int, ncols: int, rng: random.Random) -> F2Matrix:
        return cls(nrows, ncols, tuple(rng.getrandbits(ncols) if ncols else 0 for _ in range(nrows)))

    # -- accessors ------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def to_dense(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def to_sparse(self) -> list[list[int]]:
        return [[j for j in range(self.ncols) if (r >> j) & 1] for r in self.rows]

    def columns(self) -> list[int]:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return cols

    def column(self, j: int) -> int:
        return sum(((r >> j) & 1) << i for i, r in enumerate(self.rows))

    def is_zero(self) -> bool:
        return not any(self.rows)

    def nnz(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def is_partial_permutation(self) -> bool:
        """At most one nonzero entry in every row and every column."""
        seen = 0
        for r in self.rows:
            if r & (r - 1):
                return False
            if r & seen:
                return False
            seen |= r
        return True

    # -- algebra --------------------------------------------------------------
    def apply(self, v: int) -> int:
        """Matrix-vector product; ``v`` and the result are packed bit vectors."""
        out = 0
        for i, r in enumerate(self.rows):
            if _parity(r & v):
                out |= 1 << i
        return out

    def transpose(self) -> F2Matrix:
        return F2Matrix(self.ncols, self.nrows, tuple(self.columns()))

    def __matmul__(self, other: F2Matrix) -> F2Matrix:
        return mul(self, other)

    def __add__(self, other: F2Matrix) -> F2Matrix:
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return F2Matrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def rank(self) -> int:
        return rank(self)


def mul(A: F2Matrix, B: F2Matrix) -> F2Matrix:
    if A.ncols != B.nrows:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    out = []
    for r in A.rows:
        acc = 0
        j = 0
        while r:
            if r & 1:
                acc ^= B.rows[j]
            r >>= 1
            j += 1
        out.append(acc)
    return F2Matrix(A.nrows, B.ncols, tuple(out))


def _eliminate(rows: list[int], ncols: int) -> list[int]:
    """In-place Gauss-Jordan on the low ``ncols`` bits; returns pivot columns."""
    pivots = []
    r = 0
    n = len(rows)
    for c in range(ncols):
        bit = 1 << c
        for k in range(r, n):
            if rows[k] & bit:
                break
        else:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        piv = rows[r]
        for k in range(n):
            if k != r and rows[k] & bit:
                rows[k] ^= piv
        pivots.append(c)
        r += 1
        if r == n:
            break
    return pivots


def rank(M: F2Matrix) -> int:
    return vectors_rank(M.rows)


def vectors_rank(vectors: Iterable[int]) -> int:
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                break
    return len(basis)


def rref(M: F2Matrix) -> tuple[F2Matrix, F2Matrix, list[int]]:
    """Reduced row echelon form ``R`` with ``U @ M == R`` and ``U`` invertible.

    Returns ``(R, U, pivot_columns)``.
    """
    n, m = M.nrows, M.ncols
    aug = [M.rows[i] | (1 << (m + i)) for i in range(n)]
    pivots = _eliminate(aug, m)
    mask = (1 << m) - 1
    R = F2Matrix(n, m, tuple(r & mask for r in aug))
    U = F2Matrix(n, n, tuple(r >> m for r in aug))
    return R, U, pivots


def kernel_basis(M: F2Matrix) -> F2Matrix:
    """Matrix whose columns form a basis of the null space of ``M``."""
    R, _, pivots = rref(M)
    pivot_set = set(pivots)
    cols = []
    for f in range(M.ncols):
        if f in pivot_set:
            continue
        v = 1 << f
        for row_idx, p in enumerate(pivots):
            if (R.rows[row_idx] >> f) & 1:
                v |= 1 << p
        cols.append(v)
    return F2Matrix.from_columns(M.ncols, cols)


def image_basis(M: F2Matrix) -> F2Matrix:
    """Matrix whose columns are independent and span the column space of ``M``."""
    _, _, pivots = rref(M)
    all_cols = M.columns()
    return F2Matrix.from_columns(M.nrows, [all_cols[p] for p in pivots])


def inverse(M: F2Matrix) -> F2Matrix:
    if M.nrows != M.ncols:
        raise DimensionMismatch(f"cannot invert a {M.shape} matrix")
    R, U, pivots = rref(M)
    if len(pivots) != M.nrows:
        raise Singular("matrix is singular over F2")
    return U


class SpanBuilder:
    """Incrementally built subspace with coordinate tracking.

    Vectors are added one at a time; each independent vector receives the next
    coordinate index.  :meth:`coordinates` expresses any vector in the span as
    a bitmask over those indices.
    """

    def __init__(self):
        self._pivots: dict[int, tuple[int, int]] = {}  # top bit -> (reduced vector, combination)
        self.basis: list[int] = []

    def __len__(self):
        return len(self.basis)

    def reduce(self, v: int) -> tuple[int, int]:
        """Return ``(residue, combination)`` with ``v = residue + sum(basis[i] for i in combination)``."""
        combo = 0
        while v:
            top = v.bit_length() - 1
            entry = self._pivots.get(top)
            if entry is None:
                break
            v ^= entry[0]
            combo ^= entry[1]
        return v, combo

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    def add(self, v: int) -> bool:
        """Add ``v`` if independent; return whether it was added."""
        res, combo = self.reduce(v)
        if res == 0:
            return False
        idx = len(self.basis)
        self.basis.append(v)
        self._pivots[res.bit_length() - 1] = (res, combo | (1 << idx))
        return True

    def coordinates(self, v: int) -> int:
        res, combo = self.reduce(v)
        if res:
            raise ValueError("vector is not in the span")
        return combo

    def extend_to(self, n: int) -> list[int]:
        """Add standard basis vectors until the span is all of F2^n; return those added."""
        added = []
        for i in range(n):
            if len(self.basis) == n:
                break
            if self.add(1 << i):
                added.append(1 << i)
        return added
