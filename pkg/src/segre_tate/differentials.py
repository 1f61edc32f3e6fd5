"""
Toric Jacobian, Sylvester forms, and the differentials of the Tate resolution
of ν_* O(k, l) on P^a x P^b.

The differential d^p : T^p(F)_kdeg -> T^{p+1}(F)_kdeg is assembled from
level-preserving blocks (multiplication by W) and at most one level-dropping
block, given by a graded piece of the toric Jacobian (Type 1) or a Sylvester
map (Types 2 and 3).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .cohomology import (
    CoeffSpace,
    CohomSpace,
    ResolutionType,
    classify,
    horizontal_core,
    p_bounds,
    poly_act_sparse,
    strand_blocks,
)
from .exterior import ModuleMapSpec, expand_sparse, w_dim, w_monomials, wedge_basis
from .linalg import RatMatrix, bareiss_det
from .poly import BiPoly, binom, exact_div_monomial, partial, poly_det, quad_component, tilde


class FormError(ValueError):
    """Malformed form tuple: wrong count, ambient or degree."""


@dataclass(frozen=True)
class FormTuple:
    ambient: tuple[int, int]
    forms: tuple[BiPoly, ...]

    def __post_init__(self):
        for f in self.forms:
            if f.ambient != self.ambient:
                raise FormError("form %s has ambient %r, expected %r" % (f, f.ambient, self.ambient))
            if not f.is_homogeneous_of(1, 1):
                raise FormError("form %s is not in S_{1,1}" % f)

    def __len__(self):
        return len(self.forms)

    @classmethod
    def from_coeffs(cls, a: int, b: int, mats) -> "FormTuple":
        forms = []
        for mat in mats:
            if len(mat) != a + 1 or any(len(row) != b + 1 for row in mat):
                raise FormError("coefficient matrix must be %dx%d" % (a + 1, b + 1))
            forms.append(BiPoly.bilinear([[Fraction(str(c)) for c in row] for row in mat]))
        return cls((a, b), tuple(forms))

    @classmethod
    def from_json(cls, text: str) -> "FormTuple":
        try:
            data = json.loads(text)
            a, b = int(data["a"]), int(data["b"])
            mats = data["forms"]
        except (ValueError, KeyError, TypeError) as e:
            raise FormError("bad form file: %s" % e) from e
        if a < 1 or b < 1:
            raise FormError("need a, b >= 1")
        try:
            return cls.from_coeffs(a, b, mats)
        except (ValueError, ZeroDivisionError) as e:
            raise FormError(str(e)) from e

    def to_json(self) -> dict:
        from .poly import format_rational

        a, b = self.ambient
        return {
            "a": a,
            "b": b,
            "forms": [[[format_rational(c) for c in row] for row in f.bilinear_coeffs()] for f in self.forms],
        }

    @classmethod
    def monomials(cls, a: int, b: int, pairs: Sequence[tuple[int, int]]) -> "FormTuple":
        return cls((a, b), tuple(BiPoly.xy(a, b, i, j) for i, j in pairs))

    def monomial_pairs(self) -> list[tuple[int, int]] | None:
        """(i, j) per form when every form is a bare monomial x_i y_j, else None."""
        out = []
        for f in self.forms:
            if len(f.terms) != 1:
                return None
            (u, v), c = next(iter(f.terms.items()))
            if c != 1:
                return None
            out.append((u.index(1), v.index(1)))
        return out


def _as_tuple(t, a=None, b=None) -> FormTuple:
    if isinstance(t, FormTuple):
        return t
    forms = tuple(t)
    if not forms:
        raise FormError("empty form tuple")
    return FormTuple(forms[0].ambient, forms)


def toric_jacobian(t) -> BiPoly:
    """(1/x_0 y_b) det of [f; df/dx_1..dx_a; df/dy_0..dy_{b-1}]."""
    t = _as_tuple(t)
    a, b = t.ambient
    if len(t) != a + b + 1:
        raise FormError("toric Jacobian needs %d forms, got %d" % (a + b + 1, len(t)))
    rows = [list(t.forms)]
    rows += [[partial(f, ("x", i)) for f in t.forms] for i in range(1, a + 1)]
    rows += [[partial(f, ("y", j)) for f in t.forms] for j in range(b)]
    det = poly_det(rows)
    x0 = tuple(int(i == 0) for i in range(a + 1))
    yb = tuple(int(j == b) for j in range(b + 1))
    return exact_div_monomial(det, (x0, yb))


def incidence_det(a: int, b: int, pairs: Sequence[tuple[int, int]]) -> int:
    """det of the incidence matrix of the monomial graph with the y_b row removed."""
    n = a + b + 1
    rows = [[0] * n for _ in range(n)]
    for col, (i, j) in enumerate(pairs):
        rows[i][col] = 1
        if j < b:
            rows[a + 1 + j][col] = 1
    return bareiss_det(rows)


def tree_jacobian(monomials, a: int | None = None, b: int | None = None) -> tuple[int, BiPoly]:
    """(det M, det M * prod f / (prod x prod y)) for distinct W-monomials.

    ``monomials`` is a FormTuple of monomials or a list of (i, j) pairs
    (then a, b are required).
    """
    if isinstance(monomials, FormTuple):
        a, b = monomials.ambient
        pairs = monomials.monomial_pairs()
        if pairs is None:
            raise FormError("forms are not bare monomials")
    else:
        pairs = [tuple(p) for p in monomials]
        if a is None or b is None:
            raise FormError("a and b are required with (i, j) pairs")
    if len(pairs) != a + b + 1:
        raise FormError("need %d monomials" % (a + b + 1))
    if len(set(pairs)) != len(pairs):
        raise FormError("monomials must be pairwise distinct")
    det_m = incidence_det(a, b, pairs)
    if det_m == 0:
        return 0, BiPoly.zero(a, b)
    u = [0] * (a + 1)
    v = [0] * (b + 1)
    for i, j in pairs:
        u[i] += 1
        v[j] += 1
    prod = BiPoly.monomial(a, b, u, v, det_m)
    return det_m, exact_div_monomial(prod, ((1,) * (a + 1), (1,) * (b + 1)))


def _coefficient_matrix(forms: Sequence[BiPoly], on_x: bool) -> list[list[BiPoly]]:
    # f_i = sum_j l_ij x_j  (on_x)   or   f_i = sum_j l'_ij y_j
    a, b = forms[0].ambient
    out = []
    for f in forms:
        row = [BiPoly.zero(a, b) for _ in range((a if on_x else b) + 1)]
        for (u, v), c in f.terms.items():
            if on_x:
                j = u.index(1)
                row[j] = row[j] + BiPoly.monomial(a, b, [0] * (a + 1), v, c)
            else:
                j = v.index(1)
                row[j] = row[j] + BiPoly.monomial(a, b, u, [0] * (b + 1), c)
        out.append(row)
    return out


def sylvester_delta(t) -> BiPoly:
    """det(l_ij) where f_i = sum_j l_ij x_j, l_ij in S_{0,1}."""
    t = _as_tuple(t)
    a, b = t.ambient
    if len(t) != a + 1:
        raise FormError("δ needs %d forms, got %d" % (a + 1, len(t)))
    return poly_det(_coefficient_matrix(t.forms, on_x=True))


def sylvester_delta_prime(t) -> BiPoly:
    """det(l'_ij) where f_i = sum_j l'_ij y_j, l'_ij in S_{1,0}."""
    t = _as_tuple(t)
    a, b = t.ambient
    if len(t) != b + 1:
        raise FormError("δ' needs %d forms, got %d" % (b + 1, len(t)))
    return poly_det(_coefficient_matrix(t.forms, on_x=False))


# -- cores of the diagonal maps --------------------------------------------------------


def wedge_forms(a: int, b: int, w: tuple[int, ...]) -> FormTuple:
    mons = w_monomials(a, b)
    return FormTuple.monomials(a, b, [mons[r] for r in w])


@lru_cache(maxsize=None)
def _wedge_jacobians(a: int, b: int) -> tuple[BiPoly, ...]:
    out = []
    mons = w_monomials(a, b)
    for w in wedge_basis(a, b, a + b + 1):
        out.append(tree_jacobian([mons[r] for r in w], a, b)[1])
    return tuple(out)


@lru_cache(maxsize=None)
def jacobian_component_core(a: int, b: int, alpha: int, beta: int) -> ModuleMapSpec:
    """J_{α,β}:  wedge^{a+b+1} W ⊗ S*_{b-α,a-β} -> S_{α,β}."""
    dom = CoeffSpace(a, b, b - alpha, a - beta, True, True)
    cod = CoeffSpace(a, b, alpha, beta)
    dim_a, dim_b = dom.dim, cod.dim
    m = a + b + 1
    ncols = binom(w_dim(a, b), m) * dim_a
    rows, cols, vals = [], [], []
    if dim_a and dim_b:
        dindex, cindex = dom.index, cod.index
        for wi, jac in enumerate(_wedge_jacobians(a, b)):
            if not jac:
                continue
            for (U, V), (u, v), c in quad_component(tilde(jac), alpha, beta).pairs():
                rows.append(cindex[(u, v)])
                cols.append(wi * dim_a + dindex[(U, V)])
                vals.append(int(c))
    core = sp.csr_matrix((vals, (rows, cols)), shape=(dim_b, ncols), dtype=np.int64)
    return ModuleMapSpec((a, b), m, dim_a, dim_b, core, "J_{%d,%d}" % (alpha, beta), dom, cod)


SYLVESTER_KINDS = ("delta", "delta_star", "delta_prime", "delta_prime_star")


@lru_cache(maxsize=None)
def _wedge_sylvester(a: int, b: int, prime: bool) -> tuple[BiPoly, ...]:
    m = (b if prime else a) + 1
    fn = sylvester_delta_prime if prime else sylvester_delta
    return tuple(fn(wedge_forms(a, b, w)) for w in wedge_basis(a, b, m))


@lru_cache(maxsize=None)
def sylvester_map_core(a: int, b: int, kind: str, param: int) -> ModuleMapSpec:
    """Cores of δ_α, δ*_α (drop a+1) and δ'_β, δ'*_β (drop b+1).

    δ_α  : wedge^{a+1} W ⊗ S_{0,α}          -> S_{0,a+1+α}
    δ*_α : wedge^{a+1} W ⊗ S*_{0,a+1+α}     -> S*_{0,α}
    δ'_β : wedge^{b+1} W ⊗ S_{β,0}          -> S_{b+1+β,0}
    δ'*_β: wedge^{b+1} W ⊗ S*_{b+1+β,0}     -> S*_{β,0}
    """
    if kind not in SYLVESTER_KINDS:
        raise ValueError("unknown Sylvester map %r" % kind)
    if param < 0:
        raise ValueError("parameter must be >= 0")
    if kind == "delta":
        dom, cod = CoeffSpace(a, b, 0, param, True, False), CoeffSpace(a, b, 0, a + 1 + param)
    elif kind == "delta_star":
        dom, cod = CoeffSpace(a, b, 0, a + 1 + param, True, True), CoeffSpace(a, b, 0, param, False, True)
    elif kind == "delta_prime":
        dom, cod = CoeffSpace(a, b, param, 0, False, True), CoeffSpace(a, b, b + 1 + param, 0)
    else:
        dom, cod = CoeffSpace(a, b, b + 1 + param, 0, True, True), CoeffSpace(a, b, param, 0, True, False)
    prime = kind.startswith("delta_prime")
    m = (b if prime else a) + 1
    polys = _wedge_sylvester(a, b, prime)
    blocks = [poly_act_sparse(g, dom, cod) for g in polys]
    core = sp.hstack(blocks, format="csr", dtype=np.int64)
    names = {"delta": "δ", "delta_star": "δ*", "delta_prime": "δ'", "delta_prime_star": "δ'*"}
    return ModuleMapSpec((a, b), m, dom.dim, cod.dim, core, "%s_%d" % (names[kind], param), dom, cod)


@dataclass(frozen=True)
class DiagonalMap:
    sign: int
    spec: ModuleMapSpec
    source_level: int
    target_level: int


def diagonal_for(a: int, b: int, k: int, l: int, p: int) -> DiagonalMap | None:
    """The level-dropping component of d^p, or None when d^p is horizontal."""
    typ = classify(a, b, k, l)
    pm, pp = p_bounds(a, b, k, l)
    if typ is ResolutionType.TYPE1:
        if pm <= p < pp:
            spec = jacobian_component_core(a, b, k + p + 1, l + p + 1)
            return DiagonalMap(-1 if p % 2 else 1, spec, a + b, 0)
        return None
    if typ is ResolutionType.TYPE2:
        param = k - l - b - 1
        if p == pm:
            return DiagonalMap(1, sylvester_map_core(a, b, "delta_star", param), a + b, b)
        if p == pp - 1:
            return DiagonalMap(1, sylvester_map_core(a, b, "delta_prime", param), b, 0)
        return None
    param = l - k - a - 1
    if p == pm:
        return DiagonalMap(1, sylvester_map_core(a, b, "delta_prime_star", param), a + b, a)
    if p == pp - 1:
        return DiagonalMap(1, sylvester_map_core(a, b, "delta", param), a, 0)
    return None


def horizontal_sign(a: int, b: int, level: int) -> int:
    """Sign attached to the multiplication blocks at a cohomological level.

    With the Jacobian carrying (-1)^p, the two paths through a level-dropping
    square differ by (-1)^(a+b+1); twisting the top level by that sign makes
    d∘d vanish for every (a, b).
    """
    if level == a + b:
        return -1 if (a + b) % 2 == 0 else 1
    return 1


def _pad_core(spec: ModuleMapSpec, src: CohomSpace, tgt: CohomSpace) -> ModuleMapSpec:
    """Re-index a core written on Künneth blocks onto the full level spaces."""
    if spec.dim_a == src.dim and spec.dim_b == tgt.dim and len(src.blocks) == 1 and len(tgt.blocks) == 1:
        return spec
    off_a = src.offset(spec.domain)
    off_b = tgt.offset(spec.codomain)
    coo = spec.core_sparse.tocoo()
    wi = coo.col // spec.dim_a
    ai = coo.col % spec.dim_a
    n_w = binom(w_dim(*spec.ambient), spec.m)
    core = sp.csr_matrix(
        (coo.data, (coo.row + off_b, wi * src.dim + ai + off_a)),
        shape=(tgt.dim, n_w * src.dim),
        dtype=np.int64,
    )
    return ModuleMapSpec(spec.ambient, spec.m, src.dim, tgt.dim, core, spec.label, src, tgt)


def differential_sparse(a: int, b: int, k: int, l: int, p: int, kdeg: int) -> sp.csr_matrix:
    """d^p on the degree-kdeg strand as an int64 csr_matrix."""
    src_blocks = strand_blocks(a, b, k, l, p, kdeg)
    tgt_blocks = strand_blocks(a, b, k, l, p + 1, kdeg)
    src_off = np.concatenate(([0], np.cumsum([blk.dim for blk in src_blocks]))).astype(int)
    tgt_off = np.concatenate(([0], np.cumsum([blk.dim for blk in tgt_blocks]))).astype(int)
    n_rows, n_cols = int(tgt_off[-1]), int(src_off[-1])
    tgt_by_level = {blk.level: (i, blk) for i, blk in enumerate(tgt_blocks)}
    diag = diagonal_for(a, b, k, l, p)
    pieces = []
    for si, sblk in enumerate(src_blocks):
        if sblk.level in tgt_by_level:
            ti, tblk = tgt_by_level[sblk.level]
            spec = horizontal_core(sblk.space, tblk.space)
            mat = expand_sparse(spec, sblk.n) * horizontal_sign(a, b, sblk.level)
            pieces.append((tgt_off[ti], src_off[si], mat))
        if diag is not None and diag.source_level == sblk.level and diag.target_level in tgt_by_level:
            ti, tblk = tgt_by_level[diag.target_level]
            spec = _pad_core(diag.spec, sblk.space, tblk.space)
            mat = expand_sparse(spec, sblk.n) * diag.sign
            pieces.append((tgt_off[ti], src_off[si], mat))
    if not pieces:
        return sp.csr_matrix((n_rows, n_cols), dtype=np.int64)
    rows, cols, vals = [], [], []
    for r0, c0, mat in pieces:
        coo = mat.tocoo()
        rows.append(coo.row + r0)
        cols.append(coo.col + c0)
        vals.append(coo.data)
    out = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_rows, n_cols),
        dtype=np.int64,
    )
    out.eliminate_zeros()
    return out


def assemble_differential(a: int, b: int, k: int, l: int, p: int, kdeg: int) -> RatMatrix:
    """d^p : T^p(F)_kdeg -> T^{p+1}(F)_kdeg, blocks in descending level order."""
    return RatMatrix.from_sparse(differential_sparse(a, b, k, l, p, kdeg))
