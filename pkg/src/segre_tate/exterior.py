"""
Exterior algebra on W = S_{1,1}.

The basis monomial x_i y_j of W has rank ``i*(b+1) + j``.  A basis element of
wedge^k W is a strictly increasing tuple of ranks; wedge bases are listed
lexicographically and addressed by position.

A degree-zero map of free modules  Ê(p) ⊗ A -> Ê(q) ⊗ B  is stored by its core,
a linear map  wedge^m W ⊗ A -> B  with m = p - q.  Its action on the graded
piece wedge^n W ⊗ A is

    w ⊗ a  ->  sum over splits of w   sign * rest ⊗ core(extracted ⊗ a)

where sign is the parity of the permutation taking (rest, extracted) to w.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .linalg import RatMatrix
from .poly import BiPoly, binom


def w_dim(a: int, b: int) -> int:
    return (a + 1) * (b + 1)


@lru_cache(maxsize=None)
def w_monomials(a: int, b: int) -> tuple[tuple[int, int], ...]:
    """(i, j) for each rank, i.e. x_i y_j in rank order."""
    return tuple((i, j) for i in range(a + 1) for j in range(b + 1))


def w_rank(a: int, b: int, i: int, j: int) -> int:
    return i * (b + 1) + j


def w_poly(a: int, b: int, r: int) -> BiPoly:
    i, j = divmod(r, b + 1)
    return BiPoly.xy(a, b, i, j)


@lru_cache(maxsize=None)
def _wedges(n_prime: int, k: int) -> tuple[tuple[int, ...], ...]:
    if k < 0 or k > n_prime:
        return ()
    return tuple(combinations(range(n_prime), k))


@lru_cache(maxsize=None)
def _wedge_index(n_prime: int, k: int) -> dict:
    return {w: i for i, w in enumerate(_wedges(n_prime, k))}


def wedge_basis(a: int, b: int, k: int) -> list[tuple[int, ...]]:
    return list(_wedges(w_dim(a, b), k))


def wedge_index(a: int, b: int, w: tuple[int, ...]) -> int:
    return _wedge_index(w_dim(a, b), len(w))[tuple(w)]


def _perm_sign(seq) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv % 2 else 1


def comult_split(w: tuple[int, ...], m: int) -> list[tuple[int, tuple, tuple]]:
    """All (sign, rest, extracted) with |extracted| = m, ordered by rest."""
    w = tuple(w)
    n = len(w)
    if m < 0 or m > n:
        return []
    out = []
    for rest_pos in combinations(range(n), n - m):
        ext_pos = tuple(i for i in range(n) if i not in rest_pos)
        sign = _perm_sign(rest_pos + ext_pos)
        out.append((sign, tuple(w[i] for i in rest_pos), tuple(w[i] for i in ext_pos)))
    return out


@lru_cache(maxsize=None)
def split_table(n_prime: int, n: int, m: int):
    """Arrays (source, rest, extracted, sign) over all splits of wedge^n W."""
    src, rest, ext, sign = [], [], [], []
    rest_index = _wedge_index(n_prime, n - m)
    ext_index = _wedge_index(n_prime, m)
    for s, w in enumerate(_wedges(n_prime, n)):
        for sg, r, e in comult_split(w, m):
            src.append(s)
            rest.append(rest_index[r])
            ext.append(ext_index[e])
            sign.append(sg)
    as_arr = lambda x: np.asarray(x, dtype=np.int64)
    return as_arr(src), as_arr(rest), as_arr(ext), as_arr(sign)


@dataclass(frozen=True, eq=False)
class ModuleMapSpec:
    """Core  wedge^m W ⊗ A -> B  of a drop-m map of free Ê-modules.

    ``core_sparse`` has shape (dim B, C(N', m) * dim A) with columns ordered
    wedge-major, coefficient-minor.
    """

    ambient: tuple[int, int]
    m: int
    dim_a: int
    dim_b: int
    core_sparse: sp.csr_matrix
    label: str = ""
    domain: object = field(default=None, compare=False)
    codomain: object = field(default=None, compare=False)

    def __post_init__(self):
        n_prime = w_dim(*self.ambient)
        expected = (self.dim_b, binom(n_prime, self.m) * self.dim_a)
        if self.core_sparse.shape != expected:
            raise ValueError("core shape %r, expected %r" % (self.core_sparse.shape, expected))

    @cached_property
    def core(self) -> RatMatrix:
        return RatMatrix.from_sparse(self.core_sparse)

    @classmethod
    def from_core(cls, a, b, m, dim_a, dim_b, core: RatMatrix, label="") -> "ModuleMapSpec":
        return cls((a, b), m, dim_a, dim_b, core.to_sparse(), label)


def expand_sparse(spec: ModuleMapSpec, n: int) -> sp.csr_matrix:
    """Matrix of wedge^n W ⊗ A -> wedge^(n-m) W ⊗ B as an int64 csr_matrix."""
    a, b = spec.ambient
    n_prime = w_dim(a, b)
    m = spec.m
    dim_a, dim_b = spec.dim_a, spec.dim_b
    if not (m <= n <= n_prime):
        raise ValueError("need m <= n <= N' (m=%d, n=%d, N'=%d)" % (m, n, n_prime))
    shape = (binom(n_prime, n - m) * dim_b, binom(n_prime, n) * dim_a)
    core = spec.core_sparse.tocoo()
    if core.nnz == 0 or shape[0] == 0 or shape[1] == 0:
        return sp.csr_matrix(shape, dtype=np.int64)
    c_ext = core.col // dim_a
    c_a = core.col % dim_a
    order = np.argsort(c_ext, kind="stable")
    c_ext, c_a, c_b, c_v = c_ext[order], c_a[order], core.row[order], core.data[order]
    n_ext = binom(n_prime, m)
    counts = np.bincount(c_ext, minlength=n_ext)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))

    s_src, s_rest, s_ext, s_sign = split_table(n_prime, n, m)
    reps = counts[s_ext]
    total = int(reps.sum())
    if total == 0:
        return sp.csr_matrix(shape, dtype=np.int64)
    split_of = np.repeat(np.arange(len(s_src)), reps)
    # position of each output entry within its extracted-block of core entries
    offs = np.arange(total) - np.repeat(np.cumsum(reps) - reps, reps)
    entry = starts[s_ext[split_of]] + offs
    rows = s_rest[split_of] * dim_b + c_b[entry]
    cols = s_src[split_of] * dim_a + c_a[entry]
    vals = s_sign[split_of] * c_v[entry]
    out = sp.csr_matrix((vals, (rows, cols)), shape=shape, dtype=np.int64)
    out.eliminate_zeros()
    return out


def expand_module_map(spec: ModuleMapSpec, n: int) -> RatMatrix:
    """Action of the drop-m map on the degree-n graded piece."""
    return RatMatrix.from_sparse(expand_sparse(spec, n))
