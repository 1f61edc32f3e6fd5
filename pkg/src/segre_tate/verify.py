"""
Executable checks: chain condition and exactness of strands, the polynomial
identities behind the diagonal maps, the tree lemma, regularity, duality of
resolutions, and injectivity of the Jacobian pieces.

Every check returns a report with a ``to_json`` method producing
``{"check", "params", "pass", "details"}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator

import numpy as np

from .cohomology import (
    Kind,
    classify,
    kunneth_dim,
    levels,
    p_bounds,
    regularity,
    strand_dim,
    strand_range,
    tate_term,
)
from .differentials import (
    FormTuple,
    differential_sparse,
    incidence_det,
    jacobian_component_core,
    sylvester_delta,
    sylvester_delta_prime,
    toric_jacobian,
)
from .exterior import _perm_sign, expand_sparse, w_dim, w_monomials
from .linalg import checked_product, sparse_rank
from .poly import BiPoly, QuadPoly, binom, dim_bigraded, tilde


# -- seeded forms ----------------------------------------------------------------------

LCG_MULT = 6364136223846793005
LCG_INC = 1442695040888963407
LCG_MOD = 2**64


class LinearGenerator:
    """64-bit linear congruential generator.

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64,
    starting from state = seed.  Each coefficient is ((state >> 33) mod 11) - 5,
    taken after advancing, so values lie in [-5, 5].
    """

    def __init__(self, seed: int):
        self.state = seed % LCG_MOD

    def next_coeff(self) -> int:
        self.state = (LCG_MULT * self.state + LCG_INC) % LCG_MOD
        return (self.state >> 33) % 11 - 5

    def form(self, a: int, b: int) -> BiPoly:
        """Coefficients of x_i y_j drawn in (i, j) lexicographic order."""
        return BiPoly.bilinear([[self.next_coeff() for _ in range(b + 1)] for _ in range(a + 1)])

    def forms(self, a: int, b: int, count: int) -> FormTuple:
        return FormTuple((a, b), tuple(self.form(a, b) for _ in range(count)))


def _params_json(params: dict) -> dict:
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in params.items()}


@dataclass
class Report:
    check: str
    params: dict
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"check": self.check, "params": _params_json(self.params), "pass": self.passed, "details": self.details}


# -- strands -------------------------------------------------------------------------


@dataclass
class StrandReport:
    a: int
    b: int
    k: int
    l: int
    kdeg: int
    prange: tuple[int, int]
    dims: list[int]
    ranks: list[int]
    is_complex: bool
    is_exact: bool
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return self.is_complex and self.is_exact

    def to_json(self) -> dict:
        details = {
            "prange": list(self.prange),
            "dims": self.dims,
            "ranks": self.ranks,
            "is_complex": self.is_complex,
            "is_exact": self.is_exact,
        }
        if self.counterexample is not None:
            details["counterexample"] = self.counterexample
        return {
            "check": "strand",
            "params": {"a": self.a, "b": self.b, "k": self.k, "l": self.l, "kdeg": self.kdeg},
            "pass": self.passed,
            "dims": self.dims,
            "ranks": self.ranks,
            "details": details,
        }


def check_strand(a: int, b: int, k: int, l: int, kdeg: int, exactness: bool = True) -> StrandReport:
    """d^{p+1} d^p = 0 and rank(d^{p-1}) + rank(d^p) = dim T^p on the window.

    Outside the window the terms vanish, so the window carries the whole strand;
    the vanishing of the two neighbouring terms is checked as well.
    """
    lo, hi = strand_range(a, b, k, l, kdeg)
    ps = list(range(lo, hi + 1))
    dims = [strand_dim(a, b, k, l, p, kdeg) for p in ps]
    mats = {p: differential_sparse(a, b, k, l, p, kdeg) for p in range(lo - 1, hi + 1)}
    counter = None
    is_complex = True
    for p in range(lo - 1, hi):
        comp = checked_product(mats[p + 1], mats[p])
        if comp.nnz:
            is_complex = False
            coo = comp.tocoo()
            i = int(np.lexsort((coo.col, coo.row))[0])
            counter = {
                "reason": "nonzero composite",
                "p": p,
                "row": int(coo.row[i]),
                "col": int(coo.col[i]),
                "value": int(coo.data[i]),
            }
            break
    ranks = [sparse_rank(mats[p]) for p in ps] if exactness else []
    is_exact = is_complex and exactness
    if exactness:
        outside = (strand_dim(a, b, k, l, lo - 1, kdeg), strand_dim(a, b, k, l, hi + 1, kdeg))
        if any(outside):
            is_exact = False
            counter = counter or {"reason": "nonzero term outside the window", "dims": list(outside)}
        prev = 0  # rank of d^{lo-1}, whose source is zero
        for p, dim, rk in zip(ps, dims, ranks):
            if prev + rk != dim:
                is_exact = False
                if counter is None:
                    counter = {"reason": "rank condition", "p": p, "dim": dim, "rank_in": prev, "rank_out": rk}
                break
            prev = rk
    return StrandReport(a, b, k, l, kdeg, (lo, hi), dims, ranks, is_complex, is_exact, counter)


# -- identities ------------------------------------------------------------------------


@dataclass
class IdentityReport:
    name: str
    a: int
    b: int
    trials: int
    seed: int
    failures: int
    first_failure: int | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        details = {"trials": self.trials, "failures": self.failures}
        if self.first_failure is not None:
            details["first_failure_trial"] = self.first_failure
        return {
            "check": "identity:" + self.name,
            "params": {"a": self.a, "b": self.b, "seed": self.seed},
            "pass": self.passed,
            "details": details,
        }


def delta_prime_alternating_sum(t: FormTuple) -> BiPoly:
    """sum_i (-1)^i f_i δ'(f_0 .. f̂_i .. f_{b+1})."""
    a, b = t.ambient
    fs = t.forms
    total = BiPoly.zero(a, b)
    for i in range(len(fs)):
        rest = FormTuple(t.ambient, fs[:i] + fs[i + 1:])
        term = fs[i] * sylvester_delta_prime(rest)
        total = total - term if i % 2 else total + term
    return total


def shuffle_sign(s: tuple[int, ...], n: int) -> int:
    """Sign of the permutation listing s (sorted) then its complement (sorted)."""
    comp = tuple(i for i in range(n) if i not in s)
    return _perm_sign(tuple(s) + comp)


def laplace_sum(t: FormTuple) -> BiPoly:
    """sum over |S| = a+1 of ε(S) δ(f_S) δ'(f_{S^c})."""
    a, b = t.ambient
    n = len(t)
    total = BiPoly.zero(a, b)
    for s in combinations(range(n), a + 1):
        comp = [i for i in range(n) if i not in s]
        fs = FormTuple(t.ambient, tuple(t.forms[i] for i in s))
        fc = FormTuple(t.ambient, tuple(t.forms[i] for i in comp))
        total = total + (sylvester_delta(fs) * sylvester_delta_prime(fc)).scale(shuffle_sign(s, n))
    return total


def swap_sum(t: FormTuple) -> QuadPoly:
    """sum_i (-1)^i f_i J~(f_0 .. f̂_i .. f_{a+b+1}) in the duplicated ring."""
    total = QuadPoly(t.ambient)
    fs = t.forms
    for i in range(len(fs)):
        rest = FormTuple(t.ambient, fs[:i] + fs[i + 1:])
        term = QuadPoly.lower(fs[i]) * tilde(toric_jacobian(rest))
        total = total - term if i % 2 else total + term
    return total


IDENTITIES = ("delta_prime", "laplace", "swap")


def _identity_holds(name: str, t: FormTuple) -> bool:
    if name == "delta_prime":
        return delta_prime_alternating_sum(t).is_zero()
    if name == "laplace":
        return laplace_sum(t).is_zero()
    q = swap_sum(t)
    return q.swap() == q


def check_identities(a: int, b: int, trials: int, seed: int) -> list[IdentityReport]:
    """Each identity on ``trials`` form tuples from a LinearGenerator(seed)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    counts = {"delta_prime": b + 2, "laplace": a + b + 2, "swap": a + b + 2}
    out = []
    for name in IDENTITIES:
        gen = LinearGenerator(seed)
        failures, first = 0, None
        for trial in range(trials):
            if not _identity_holds(name, gen.forms(a, b, counts[name])):
                failures += 1
                first = trial if first is None else first
        out.append(IdentityReport(name, a, b, trials, seed, failures, first))
    return out


# -- tree lemma ------------------------------------------------------------------------


def is_spanning_tree(a: int, b: int, pairs) -> bool:
    """Union-find on vertices x_0..x_a, y_0..y_b with one edge per x_i y_j."""
    parent = list(range(a + b + 2))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in pairs:
        ri, rj = find(i), find(a + 1 + j)
        if ri == rj:
            return False
        parent[ri] = rj
    roots = {find(v) for v in range(a + b + 2)}
    return len(roots) == 1


def check_tree_lemma(a: int, b: int) -> Report:
    from .differentials import tree_jacobian

    mons = w_monomials(a, b)
    subsets = trees = 0
    bad = []
    for sub in combinations(mons, a + b + 1):
        subsets += 1
        det_m = incidence_det(a, b, sub)
        tree = is_spanning_tree(a, b, sub)
        trees += tree
        _, jac = tree_jacobian(sub, a, b)
        direct = toric_jacobian(FormTuple.monomials(a, b, sub))
        ok = det_m in (-1, 0, 1) and (det_m != 0) == tree and jac == direct
        if not ok and len(bad) < 5:
            bad.append({"monomials": [list(m) for m in sub], "detM": det_m, "tree": tree})
    return Report(
        "tree",
        {"a": a, "b": b},
        not bad,
        {"subsets": subsets, "spanning_trees": trees, "failures": bad},
    )


# -- regularity ------------------------------------------------------------------------


def brute_force_regularity(a: int, b: int, k: int, l: int, window: int) -> int | None:
    """Least m in [-window, window] with H^i(F(m'-i)) = 0 for all i > 0, m' >= m in the window."""
    best = None
    for m in range(window, -window - 1, -1):
        if any(kunneth_dim(a, b, k + m - i, l + m - i, i) for i in range(1, a + b + 1)):
            break
        best = m
    return best


def check_regularity(a: int, b: int, k: int, l: int, window: int) -> Report:
    reg = regularity(a, b, k, l)
    if window < p_bounds(a, b, k, l)[1] + 2:
        raise ValueError("window must be at least p+ + 2")
    brute = brute_force_regularity(a, b, k, l, window)
    m = reg - 1
    witness = [i for i in range(1, a + b + 1) if kunneth_dim(a, b, k + m - i, l + m - i, i)]
    details = {"formula": reg, "brute_force": brute, "witness_levels": witness}
    if witness:
        details["witness_case"] = 1 if witness[-1] == a + b else 2
    return Report("regularity", {"a": a, "b": b, "k": k, "l": l, "window": window}, brute == reg and bool(witness), details)


# -- duality ---------------------------------------------------------------------------


DUAL_KIND = {Kind.H0: Kind.HAB, Kind.HAB: Kind.H0, Kind.HA: Kind.HB, Kind.HB: Kind.HA}


def dual_sheaf(a: int, b: int, k: int, l: int) -> tuple[int, int]:
    return -a - 1 - k, -b - 1 - l


def check_duality(a: int, b: int, k: int, l: int, prange: tuple[int, int]) -> Report:
    """T^p(F) at level i against T^{a+b-p}(G) at level a+b-i, block by block."""
    gk, gl = dual_sheaf(a, b, k, l)
    mismatches = []
    compared = 0
    for p in range(prange[0], prange[1] + 1):
        tf = tate_term(a, b, k, l, p).by_level()
        tg = tate_term(a, b, gk, gl, a + b - p).by_level()
        for i in levels(a, b):
            sf, sg = tf.get(i), tg.get(a + b - i)
            blocks_f = sorted((blk.kind.value, blk.coeff.dim) for blk in sf.space.blocks) if sf else []
            blocks_g = sorted((DUAL_KIND[blk.kind].value, blk.coeff.dim) for blk in sg.space.blocks) if sg else []
            compared += 1
            if blocks_f != blocks_g:
                mismatches.append({"p": p, "level": i, "F": blocks_f, "G": blocks_g})
    tf_, tg_ = classify(a, b, k, l), classify(a, b, gk, gl)
    swap = {1: 1, 2: 3, 3: 2}
    types_ok = swap[int(tf_)] == int(tg_)
    return Report(
        "duality",
        {"a": a, "b": b, "k": k, "l": l, "prange": list(prange)},
        not mismatches and types_ok,
        {
            "G": [gk, gl],
            "type_F": str(tf_),
            "type_G": str(tg_),
            "compared": compared,
            "mismatches": mismatches[:5],
        },
    )


# -- injectivity -----------------------------------------------------------------------


def check_injectivity(a: int, b: int, beta: int) -> Report:
    """J_{b,β} expanded on wedge^{N'} W ⊗ S*_{0,a-β} has full column rank."""
    spec = jacobian_component_core(a, b, b, beta)
    mat = expand_sparse(spec, w_dim(a, b))
    rk = sparse_rank(mat)
    dom = dim_bigraded(a, b, 0, a - beta)
    return Report(
        "injectivity",
        {"a": a, "b": b, "beta": beta},
        rk == dom == mat.shape[1],
        {"rank": rk, "domain_dim": dom, "shape": list(mat.shape)},
    )


# -- suites ----------------------------------------------------------------------------


def default_kdeg_range(a: int, b: int) -> tuple[int, int]:
    return -2, w_dim(a, b) + a + b + 2


def strand_grid(a: int, b: int, krange, lrange, kdeg_range) -> Iterator[tuple[int, int, int]]:
    for k in range(krange[0], krange[1] + 1):
        for l in range(lrange[0], lrange[1] + 1):
            for kd in range(kdeg_range[0], kdeg_range[1] + 1):
                yield k, l, kd


def run_all(a: int = 1, b: int = 1, trials: int = 100, seed: int = 0, krange=(-2, 2), lrange=(-2, 2)) -> list[dict]:
    """Every check on the default grid, in a fixed order."""
    out = []
    for k, l, kd in strand_grid(a, b, krange, lrange, default_kdeg_range(a, b)):
        out.append(check_strand(a, b, k, l, kd).to_json())
    out += [r.to_json() for r in check_identities(a, b, trials, seed)]
    out.append(check_tree_lemma(a, b).to_json())
    for k in range(krange[0], krange[1] + 1):
        for l in range(lrange[0], lrange[1] + 1):
            pp = p_bounds(a, b, k, l)[1]
            out.append(check_regularity(a, b, k, l, max(10, pp + 2)).to_json())
    for k in range(krange[0], krange[1] + 1):
        for l in range(lrange[0], lrange[1] + 1):
            pm, pp = p_bounds(a, b, k, l)
            out.append(check_duality(a, b, k, l, (pm - 2, pp + 2)).to_json())
    return out
