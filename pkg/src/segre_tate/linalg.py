"""
Exact rational matrices and rank.

Strand differentials are large but very sparse and, after permuting rows and
columns, split into many small independent blocks (they are homogeneous for the
torus acting on x and y).  Rank is therefore computed per connected component
of the row/column incidence graph, each component by fraction-free Bareiss
elimination on Python integers.

The integer sparse matrices used for strand assembly are plain
``scipy.sparse.csr_matrix`` objects with dtype int64.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .poly import format_rational

INT_LIMIT = 2**62


class RatMatrix:
    """Sparse matrix with Fraction entries. Treat as immutable."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Mapping | Iterable = ()):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        self.rows = rows
        self.cols = cols
        clean: dict[tuple[int, int], Fraction] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for (r, c), v in items:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError("entry (%d, %d) outside %dx%d" % (r, c, rows, cols))
            v = Fraction(v)
            if v:
                clean[(r, c)] = clean.get((r, c), 0) + v
                if not clean[(r, c)]:
                    del clean[(r, c)]
        self.entries = clean

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        m = len(rows)
        n = len(rows[0]) if m else 0
        return cls(m, n, (((i, j), v) for i, row in enumerate(rows) for j, v in enumerate(row)))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols)

    @classmethod
    def from_sparse(cls, m: sp.spmatrix) -> "RatMatrix":
        coo = sp.coo_matrix(m)
        out = cls(*coo.shape)
        out.entries = {
            (int(r), int(c)): Fraction(int(v)) for r, c, v in zip(coo.row, coo.col, coo.data) if v
        }
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, rc) -> Fraction:
        return self.entries.get(rc, Fraction(0))

    def is_zero(self) -> bool:
        return not self.entries

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.entries.values())

    def to_sparse(self) -> sp.csr_matrix:
        """Integer csr_matrix; fails for non-integral or oversized entries."""
        if not self.is_integral():
            raise ValueError("matrix has non-integral entries")
        if self.entries and max(abs(v.numerator) for v in self.entries.values()) >= INT_LIMIT:
            raise OverflowError("entries exceed int64 range")
        keys = list(self.entries)
        r = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
        c = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
        v = np.fromiter((self.entries[k].numerator for k in keys), dtype=np.int64, count=len(keys))
        return sp.csr_matrix((v, (r, c)), shape=self.shape, dtype=np.int64)

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "RatMatrix":
        out = RatMatrix(self.cols, self.rows)
        out.entries = {(c, r): v for (r, c), v in self.entries.items()}
        return out

    T = property(transpose)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch %r @ %r" % (self.shape, other.shape))
        by_row: dict[int, list] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc: dict = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return RatMatrix(self.rows, other.cols, acc)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        acc = dict(self.entries)
        for k, v in other.entries.items():
            acc[k] = acc.get(k, 0) + v
        return RatMatrix(self.rows, self.cols, acc)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "RatMatrix":
        c = Fraction(c)
        return RatMatrix(self.rows, self.cols, {k: c * v for k, v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self):
        return "RatMatrix(%dx%d, nnz=%d)" % (self.rows, self.cols, len(self.entries))

    # serialization (row-major)

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[format_rational(v) for v in row] for row in self.to_dense()],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in self.to_dense():
            w.writerow([format_rational(v) for v in row])
        return buf.getvalue()

    def to_table(self) -> str:
        cells = [[format_rational(v) if v else "." for v in row] for row in self.to_dense()]
        width = max((len(s) for row in cells for s in row), default=1)
        return "\n".join(" ".join(s.rjust(width) for s in row) for row in cells)


# -- rank ----------------------------------------------------------------------------


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination.

    Works in place on ``rows``.  Every division is exact.
    """
    m = len(rows)
    if m == 0:
        return 0
    n = len(rows[0])
    rank = 0
    prev = 1
    for col in range(n):
        if rank == m:
            break
        piv_row = None
        for r in range(rank, m):
            if rows[r][col]:
                piv_row = r
                break
        if piv_row is None:
            continue
        rows[rank], rows[piv_row] = rows[piv_row], rows[rank]
        top = rows[rank]
        piv = top[col]
        for r in range(rank + 1, m):
            row = rows[r]
            f = row[col]
            if f:
                for c in range(col + 1, n):
                    row[c] = (piv * row[c] - f * top[c]) // prev
            else:
                for c in range(col + 1, n):
                    row[c] = (piv * row[c]) // prev
            row[col] = 0
        prev = piv
        rank += 1
    return rank


def _common_denominator(m: RatMatrix) -> int:
    den = 1
    for v in m.entries.values():
        den = lcm(den, v.denominator)
    return den


def sparse_rank(m: sp.spmatrix) -> int:
    """Exact rank of an integer scipy sparse matrix.

    Splits into connected components of the bipartite row/column graph and
    runs Bareiss on each dense component.
    """
    coo = sp.coo_matrix(m)
    coo.eliminate_zeros()
    if coo.nnz == 0:
        return 0
    nr, nc = coo.shape
    # compress to the rows/cols actually touched
    urows, ri = np.unique(coo.row, return_inverse=True)
    ucols, ci = np.unique(coo.col, return_inverse=True)
    R, C = len(urows), len(ucols)
    adj = sp.coo_matrix(
        (np.ones(coo.nnz, dtype=np.int8), (ri, R + ci)), shape=(R + C, R + C)
    )
    ncomp, labels = connected_components(adj, directed=False)
    comp_of_entry = labels[ri]
    rows_per = np.bincount(labels[:R], minlength=ncomp)
    cols_per = np.bincount(labels[R:], minlength=ncomp)
    small = (rows_per == 1) | (cols_per == 1)
    rank = int(np.count_nonzero(small))
    big = np.nonzero(~small)[0]
    if len(big) == 0:
        return rank
    big_mask = ~small[comp_of_entry]
    e_comp = comp_of_entry[big_mask]
    e_r = ri[big_mask]
    e_c = ci[big_mask]
    e_v = coo.data[big_mask]
    order = np.argsort(e_comp, kind="stable")
    e_comp, e_r, e_c, e_v = e_comp[order], e_r[order], e_c[order], e_v[order]
    bounds = np.searchsorted(e_comp, big, side="left")
    ends = np.searchsorted(e_comp, big, side="right")
    for lo, hi in zip(bounds.tolist(), ends.tolist()):
        rr = e_r[lo:hi]
        cc = e_c[lo:hi]
        vv = e_v[lo:hi]
        lr, rloc = np.unique(rr, return_inverse=True)
        lc, cloc = np.unique(cc, return_inverse=True)
        nrow, ncol = len(lr), len(lc)
        if nrow > ncol:
            rloc, cloc = cloc, rloc
            nrow, ncol = ncol, nrow
        dense = [[0] * ncol for _ in range(nrow)]
        for r, c, v in zip(rloc.tolist(), cloc.tolist(), vv.tolist()):
            dense[r][c] = v
        rank += bareiss_rank(dense)
    return rank


def rank_exact(m: RatMatrix | sp.spmatrix | Sequence[Sequence]) -> int:
    """Exact rank over Q."""
    if isinstance(m, sp.spmatrix) or sp.issparse(m):
        return sparse_rank(m)
    if not isinstance(m, RatMatrix):
        m = RatMatrix.from_rows(m)
    if not m.entries:
        return 0
    den = _common_denominator(m)
    scaled = RatMatrix(m.rows, m.cols)
    scaled.entries = {k: Fraction(v * den) for k, v in m.entries.items()}
    if max(abs(v.numerator) for v in scaled.entries.values()) < INT_LIMIT // 4:
        return sparse_rank(scaled.to_sparse())
    dense = [[int(v) for v in row] for row in scaled.to_dense()]
    if m.rows > m.cols:
        dense = [list(col) for col in zip(*dense)]
    return bareiss_rank(dense)


def naive_rank(rows: Sequence[Sequence]) -> int:
    """Row reduction over Q with first-nonzero pivoting; an independent check."""
    A = [[Fraction(v) for v in row] for row in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, m) if A[r][col] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for r in range(m):
            if r != rank and A[r][col] != 0:
                f = A[r][col] / A[rank][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


# -- integer sparse helpers ----------------------------------------------------------


def checked_product(A: sp.spmatrix, B: sp.spmatrix) -> sp.csr_matrix:
    """A @ B in int64 with a bound that rules out overflow."""
    A = sp.csr_matrix(A)
    B = sp.csr_matrix(B)
    if A.nnz and B.nnz:
        amax = int(np.abs(A.data).max())
        bmax = int(np.abs(B.data).max())
        inner = int(np.diff(A.indptr).max())
        if amax * bmax * max(inner, 1) >= INT_LIMIT:
            raise OverflowError("int64 product bound exceeded")
    out = (A @ B).tocsr()
    out.eliminate_zeros()
    return out


def empty(rows: int, cols: int) -> sp.csr_matrix:
    return sp.csr_matrix((rows, cols), dtype=np.int64)


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    A = [list(map(int, row)) for row in rows]
    n = len(A)
    if n == 0:
        return 1
    if any(len(row) != n for row in A):
        raise ValueError("matrix is not square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if A[r][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]
