"""
Cohomology of O(m, n) on P^a x P^b with explicit bases, and the terms of the
Tate resolution of F = ν_* O(k, l) for the Segre embedding.

Dual spaces carry the dual of the monomial basis; W acts on them by the
transpose of multiplication, i.e. by contraction of exponents.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
import scipy.sparse as sp

from .exterior import ModuleMapSpec, w_dim, w_monomials
from .linalg import RatMatrix
from .poly import BiPoly, binom, monomial_basis


class Kind(str, enum.Enum):
    H0 = "H0"
    HA = "HA"
    HB = "HB"
    HAB = "HAB"


class ResolutionType(enum.IntEnum):
    TYPE1 = 1
    TYPE2 = 2
    TYPE3 = 3

    def __str__(self):
        return "Type%d" % self.value


@dataclass(frozen=True)
class CoeffSpace:
    """S_{s,0} or S*_{s,0} tensored with S_{0,t} or S*_{0,t}.

    Basis elements are exponent pairs (u, v) with |u| = xdeg, |v| = ydeg, in
    lexicographic order; a dual flag means the element is the dual basis
    vector of that monomial.  Degree-0 duals are identified with constants.
    """

    a: int
    b: int
    xdeg: int
    ydeg: int
    xdual: bool = False
    ydual: bool = False

    def __post_init__(self):
        # canonical form: a dual factor of degree 0 is just the constants
        if self.xdeg == 0 and self.xdual:
            object.__setattr__(self, "xdual", False)
        if self.ydeg == 0 and self.ydual:
            object.__setattr__(self, "ydual", False)

    @property
    def basis(self):
        if self.xdeg < 0 or self.ydeg < 0:
            return ()
        return monomial_basis(self.a, self.b, self.xdeg, self.ydeg)

    @property
    def dim(self) -> int:
        if self.xdeg < 0 or self.ydeg < 0:
            return 0
        return binom(self.xdeg + self.a, self.a) * binom(self.ydeg + self.b, self.b)

    @cached_property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.basis)}

    @cached_property
    def _exps(self) -> np.ndarray:
        if not self.dim:
            return np.zeros((0, self.a + self.b + 2), dtype=np.int64)
        return np.array([u + v for u, v in self.basis], dtype=np.int64)

    def _codes(self, exps: np.ndarray) -> np.ndarray:
        # lexicographic order on (u, v) equals numeric order of this encoding
        base = max(self.xdeg, self.ydeg, 0) + 1
        radix = base ** np.arange(exps.shape[1] - 1, -1, -1, dtype=np.int64)
        return exps @ radix

    def label(self) -> str:
        def part(deg, dual, which):
            s = "S_{%d,0}" % deg if which == "x" else "S_{0,%d}" % deg
            return s.replace("S_", "S*_") if dual else s

        if self.xdual == self.ydual:
            star = "*" if self.xdual else ""
            return "S%s_{%d,%d}" % (star, self.xdeg, self.ydeg)
        return "%s⊗%s" % (part(self.xdeg, self.xdual, "x"), part(self.ydeg, self.ydual, "y"))


def act_sparse(shift: np.ndarray, coeffs, src: CoeffSpace, tgt: CoeffSpace) -> sp.csr_matrix:
    """Matrix of multiplication by sum_t coeffs[t] * x^shift[t] from src to tgt.

    Symmetric factors multiply, dual factors contract.
    """
    nvar = src.a + src.b + 2
    if src.dim == 0 or tgt.dim == 0:
        return sp.csr_matrix((tgt.dim, src.dim), dtype=np.int64)
    sgn = np.ones(nvar, dtype=np.int64)
    if src.xdual:
        sgn[: src.a + 1] = -1
    if src.ydual:
        sgn[src.a + 1:] = -1
    tcodes = tgt._codes(tgt._exps)
    rows, cols, vals = [], [], []
    base = src._exps
    col_ids = np.arange(src.dim, dtype=np.int64)
    for sh, c in zip(shift, coeffs):
        new = base + sgn * np.asarray(sh, dtype=np.int64)
        ok = (new >= 0).all(axis=1)
        if not ok.any():
            continue
        new = new[ok]
        if (new[:, : src.a + 1].sum(axis=1) != tgt.xdeg).any() or (new[:, src.a + 1:].sum(axis=1) != tgt.ydeg).any():
            raise ValueError("action leaves the target space %s" % tgt.label())
        codes = tgt._codes(new)
        pos = np.searchsorted(tcodes, codes)
        pos = np.minimum(pos, len(tcodes) - 1)
        if not np.array_equal(tcodes[pos], codes):
            raise ValueError("action leaves the target space %s" % tgt.label())
        rows.append(pos)
        cols.append(col_ids[ok])
        vals.append(np.full(len(pos), c, dtype=np.int64))
    if not rows:
        return sp.csr_matrix((tgt.dim, src.dim), dtype=np.int64)
    out = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(tgt.dim, src.dim),
        dtype=np.int64,
    )
    out.eliminate_zeros()
    return out


def poly_act_sparse(g: BiPoly, src: CoeffSpace, tgt: CoeffSpace) -> sp.csr_matrix:
    """Action of an integral polynomial g; see :func:`act_sparse`."""
    shifts, coeffs = [], []
    for (u, v), c in g.terms.items():
        if c.denominator != 1:
            raise ValueError("non-integral coefficient in %s" % g)
        shifts.append(u + v)
        coeffs.append(c.numerator)
    if not shifts:
        return sp.csr_matrix((tgt.dim, src.dim), dtype=np.int64)
    return act_sparse(np.array(shifts, dtype=np.int64), coeffs, src, tgt)


# -- line bundle cohomology ----------------------------------------------------------


def h_dim_line_bundle(n: int, d: int, i: int) -> int:
    """dim H^i(P^n, O(d))."""
    if i == 0 and d >= 0:
        return binom(d + n, n)
    if i == n and d <= -n - 1:
        return binom(-d - 1, n)
    return 0


@dataclass(frozen=True)
class CohomBlock:
    kind: Kind
    coeff: CoeffSpace


@dataclass(frozen=True)
class CohomSpace:
    """H^i(P^a x P^b, O(m, n)) as an ordered direct sum of Künneth blocks."""

    a: int
    b: int
    level: int
    bidegree: tuple[int, int]
    blocks: tuple[CohomBlock, ...]

    @property
    def dim(self) -> int:
        return sum(blk.coeff.dim for blk in self.blocks)

    @property
    def kind(self) -> str | None:
        if not self.blocks:
            return None
        return "+".join(blk.kind.value for blk in self.blocks)

    def offset(self, coeff: CoeffSpace) -> int:
        off = 0
        for blk in self.blocks:
            if blk.coeff == coeff:
                return off
            off += blk.coeff.dim
        raise KeyError("%s is not a block of this space" % coeff.label())

    @property
    def basis(self) -> list:
        return [(blk.kind, e) for blk in self.blocks for e in blk.coeff.basis]

    def label(self) -> str:
        if not self.blocks:
            return "0"
        return " ⊕ ".join(blk.coeff.label() for blk in self.blocks)


@lru_cache(maxsize=4096)
def cohom_space(a: int, b: int, m: int, n: int, i: int) -> CohomSpace:
    blocks = []
    if i == a + b and m <= -a - 1 and n <= -b - 1:
        blocks.append(CohomBlock(Kind.HAB, CoeffSpace(a, b, -m - a - 1, -n - b - 1, True, True)))
    if i == a and m <= -a - 1 and n >= 0:
        blocks.append(CohomBlock(Kind.HA, CoeffSpace(a, b, -m - a - 1, n, True, False)))
    if i == b and m >= 0 and n <= -b - 1:
        blocks.append(CohomBlock(Kind.HB, CoeffSpace(a, b, m, -n - b - 1, False, True)))
    if i == 0 and m >= 0 and n >= 0:
        blocks.append(CohomBlock(Kind.H0, CoeffSpace(a, b, m, n)))
    return CohomSpace(a, b, i, (m, n), tuple(blocks))


def kunneth_dim(a: int, b: int, m: int, n: int, i: int) -> int:
    return sum(h_dim_line_bundle(a, m, p) * h_dim_line_bundle(b, n, i - p) for p in range(i + 1))


@lru_cache(maxsize=4096)
def horizontal_core(space: CohomSpace, target: CohomSpace) -> ModuleMapSpec:
    """Drop-1 core  W ⊗ H -> H'  of the multiplication map."""
    a, b = space.a, space.b
    if target.level != space.level or target.bidegree != (space.bidegree[0] + 1, space.bidegree[1] + 1):
        raise ValueError("target must be the same level at bidegree + (1, 1)")
    tkinds = [blk.kind for blk in target.blocks]
    if any(k not in [blk.kind for blk in space.blocks] for k in tkinds):
        raise ValueError("level/kind mismatch between %s and %s" % (space.label(), target.label()))
    nvar = a + b + 2
    mats = []
    for i, j in w_monomials(a, b):
        sh = np.zeros((1, nvar), dtype=np.int64)
        sh[0, i] = 1
        sh[0, a + 1 + j] = 1
        cols = []
        for s in space.blocks:
            if s.kind in tkinds:
                t = target.blocks[tkinds.index(s.kind)]
                blk = act_sparse(sh, [1], s.coeff, t.coeff)
                off = target.offset(t.coeff)
                blk = sp.vstack([
                    sp.csr_matrix((off, s.coeff.dim), dtype=np.int64),
                    blk,
                    sp.csr_matrix((target.dim - off - t.coeff.dim, s.coeff.dim), dtype=np.int64),
                ])
            else:
                blk = sp.csr_matrix((target.dim, s.coeff.dim), dtype=np.int64)
            cols.append(blk)
        if cols:
            mats.append(sp.hstack(cols, format="csr", dtype=np.int64))
        else:
            mats.append(sp.csr_matrix((target.dim, 0), dtype=np.int64))
    core = sp.hstack(mats, format="csr", dtype=np.int64)
    return ModuleMapSpec((a, b), 1, space.dim, target.dim, core, "mult", space, target)


def w_action(space: CohomSpace, target: CohomSpace) -> list[RatMatrix]:
    """One matrix H -> H' per W basis monomial x_i y_j, in rank order."""
    core = horizontal_core(space, target).core_sparse
    d = space.dim
    return [RatMatrix.from_sparse(core[:, r * d:(r + 1) * d]) for r in range(w_dim(space.a, space.b))]


# -- shape of the resolution ---------------------------------------------------------


def classify(a: int, b: int, k: int, l: int) -> ResolutionType:
    if k - l > b:
        return ResolutionType.TYPE2
    if k - l < -a:
        return ResolutionType.TYPE3
    return ResolutionType.TYPE1


def p_bounds(a: int, b: int, k: int, l: int) -> tuple[int, int]:
    lo = -min(k, l)
    hi = min(b - k, a - l)
    return min(lo, hi) - 1, max(lo, hi)


def regularity(a: int, b: int, k: int, l: int) -> int:
    return max(-min(k, l), min(b - k, a - l))


def strand_range(a: int, b: int, k: int, l: int, kdeg: int) -> tuple[int, int]:
    return kdeg - w_dim(a, b), kdeg + a + b


@dataclass(frozen=True)
class Summand:
    level: int
    twist: int
    space: CohomSpace

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass(frozen=True)
class TateTerm:
    a: int
    b: int
    k: int
    l: int
    p: int
    summands: tuple[Summand, ...]

    def by_level(self) -> dict[int, Summand]:
        return {s.level: s for s in self.summands}

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "summands": [
                {"level": s.level, "twist": s.twist, "dim": s.dim, "kind": s.space.kind}
                for s in self.summands
            ],
        }


def levels(a: int, b: int) -> list[int]:
    return sorted({a + b, a, b, 0}, reverse=True)


@lru_cache(maxsize=4096)
def tate_term(a: int, b: int, k: int, l: int, p: int) -> TateTerm:
    """T^p(F) = ⊕_i Ê(i-p) ⊗ H^i(O(k+p-i, l+p-i)), nonzero summands only."""
    out = []
    for i in levels(a, b):
        space = cohom_space(a, b, k + p - i, l + p - i, i)
        if space.dim:
            out.append(Summand(i, i - p, space))
    return TateTerm(a, b, k, l, p, tuple(out))


@dataclass(frozen=True)
class StrandBlock:
    """wedge^n W ⊗ H^i inside T^p(F)_kdeg."""

    level: int
    n: int
    space: CohomSpace

    @property
    def dim(self) -> int:
        return binom(w_dim(self.space.a, self.space.b), self.n) * self.space.dim


def strand_blocks(a: int, b: int, k: int, l: int, p: int, kdeg: int) -> tuple[StrandBlock, ...]:
    n_prime = w_dim(a, b)
    out = []
    for s in tate_term(a, b, k, l, p).summands:
        n = s.twist + kdeg
        if 0 <= n <= n_prime:
            out.append(StrandBlock(s.level, n, s.space))
    return tuple(out)


def strand_dim(a: int, b: int, k: int, l: int, p: int, kdeg: int) -> int:
    return sum(blk.dim for blk in strand_blocks(a, b, k, l, p, kdeg))


def terms_to_json(terms: list[TateTerm]) -> str:
    return json.dumps([t.to_json() for t in terms])


def terms_table(terms: list[TateTerm]) -> str:
    """Aligned plain-text table, one row per p."""
    rows = []
    for t in terms:
        cells = ["H^%d twist %d dim %d" % (s.level, s.twist, s.dim) for s in t.summands]
        rows.append((str(t.p), cells))
    pw = max((len(p) for p, _ in rows), default=1)
    cw = max((len(c) for _, cs in rows for c in cs), default=0)
    lines = []
    for p, cells in rows:
        body = "  ".join(c.rjust(cw) for c in cells) if cells else "0"
        lines.append("p=%s  %s" % (p.rjust(pw), body))
    return "\n".join(lines)
