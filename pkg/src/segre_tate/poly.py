"""
Bigraded sparse polynomials over Q in x_0..x_a, y_0..y_b, and the
duplicate-variable ring Q[X, Y, x, y] that receives F(X+x, Y+y).

A monomial is a pair ``(u, v)`` of exponent tuples (x-part, y-part).
Coefficients are :class:`fractions.Fraction`; zero coefficients are never
stored.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence


class DivisionNotExact(ArithmeticError):
    pass


class AmbientMismatch(ValueError):
    pass


def binom(n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def dim_bigraded(a: int, b: int, s: int, t: int) -> int:
    """dim S_{s,t} for S = Q[x_0..x_a, y_0..y_b]."""
    if s < 0 or t < 0:
        return 0
    return binom(s + a, a) * binom(t + b, b)


@lru_cache(maxsize=None)
def compositions(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of length n and total degree d, lexicographically."""
    if d < 0:
        return ()
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in compositions(n - 1, d - first):
            out.append((first,) + rest)
    # lex order on exponent tuples (increasing)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def monomial_basis(a: int, b: int, s: int, t: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """Monomials of S_{s,t} in lexicographic order on the concatenation (u, v)."""
    return tuple(product(compositions(a + 1, s), compositions(b + 1, t)))


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, str):
        return Fraction(c)
    return Fraction(c)


def format_rational(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return "%d/%d" % (c.numerator, c.denominator)


def _mono_str(u, v, names=("x", "y")) -> str:
    parts = []
    for name, exps in zip(names, (u, v)):
        for i, e in enumerate(exps):
            if e == 1:
                parts.append("%s_%d" % (name, i))
            elif e > 1:
                parts.append("%s_%d^%d" % (name, i, e))
    return "*".join(parts)


def _terms_str(items) -> str:
    if not items:
        return "0"
    out = []
    for mono, c in items:
        ms = mono
        if not ms:
            s = format_rational(abs(c))
        elif abs(c) == 1:
            s = ms
        else:
            s = "%s*%s" % (format_rational(abs(c)), ms)
        if not out:
            out.append(s if c > 0 else "-" + s)
        else:
            out.append(("+ " if c > 0 else "- ") + s)
    return " ".join(out)


class BiPoly:
    """Element of S = Q[x_0..x_a, y_0..y_b]. Treat as immutable."""

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient: tuple[int, int], terms: Mapping | Iterable = ()):
        a, b = ambient
        self.ambient = (a, b)
        clean = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (u, v), c in items:
            u, v = tuple(u), tuple(v)
            if len(u) != a + 1 or len(v) != b + 1 or min(u + v, default=0) < 0:
                raise ValueError("bad monomial %r for ambient %r" % ((u, v), ambient))
            c = _coerce(c)
            if c:
                clean[(u, v)] = clean.get((u, v), 0) + c
                if not clean[(u, v)]:
                    del clean[(u, v)]
        self.terms = clean

    # constructors

    @classmethod
    def zero(cls, a, b):
        return cls((a, b))

    @classmethod
    def const(cls, a, b, c=1):
        return cls((a, b), {((0,) * (a + 1), (0,) * (b + 1)): c})

    @classmethod
    def monomial(cls, a, b, u, v, c=1):
        return cls((a, b), {(tuple(u), tuple(v)): c})

    @classmethod
    def x(cls, a, b, i):
        u = [0] * (a + 1)
        u[i] = 1
        return cls.monomial(a, b, u, [0] * (b + 1))

    @classmethod
    def y(cls, a, b, j):
        v = [0] * (b + 1)
        v[j] = 1
        return cls.monomial(a, b, [0] * (a + 1), v)

    @classmethod
    def xy(cls, a, b, i, j):
        """The bilinear monomial x_i y_j."""
        u = [0] * (a + 1)
        v = [0] * (b + 1)
        u[i] = 1
        v[j] = 1
        return cls.monomial(a, b, u, v)

    @classmethod
    def bilinear(cls, coeffs: Sequence[Sequence]) -> "BiPoly":
        """sum_ij coeffs[i][j] x_i y_j from an (a+1) x (b+1) array."""
        a = len(coeffs) - 1
        b = len(coeffs[0]) - 1
        terms = {}
        for i, row in enumerate(coeffs):
            if len(row) != b + 1:
                raise ValueError("ragged coefficient matrix")
            for j, c in enumerate(row):
                u = tuple(int(r == i) for r in range(a + 1))
                v = tuple(int(r == j) for r in range(b + 1))
                terms[(u, v)] = c
        return cls((a, b), terms)

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def bidegrees(self) -> set:
        return {(sum(u), sum(v)) for (u, v) in self.terms}

    @property
    def degree(self) -> tuple[int, int] | None:
        """Bidegree if homogeneous and nonzero, else None."""
        degs = self.bidegrees()
        if len(degs) == 1:
            return next(iter(degs))
        return None

    def is_homogeneous_of(self, s: int, t: int) -> bool:
        return all(sum(u) == s and sum(v) == t for (u, v) in self.terms)

    def coefficient(self, u, v) -> Fraction:
        return self.terms.get((tuple(u), tuple(v)), Fraction(0))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: kv[0][0] + kv[0][1])

    def bilinear_coeffs(self) -> list[list[Fraction]]:
        """Inverse of :meth:`bilinear`; requires the form to lie in S_{1,1}."""
        a, b = self.ambient
        if not self.is_homogeneous_of(1, 1):
            raise ValueError("not a bilinear form")
        out = [[Fraction(0)] * (b + 1) for _ in range(a + 1)]
        for (u, v), c in self.terms.items():
            out[u.index(1)][v.index(1)] = c
        return out

    # arithmetic

    def _check(self, other):
        if not isinstance(other, BiPoly):
            return BiPoly.const(*self.ambient, other)
        if other.ambient != self.ambient:
            raise AmbientMismatch("%r vs %r" % (self.ambient, other.ambient))
        return other

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return BiPoly(self.ambient, terms)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly(self.ambient, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            return self.scale(other)
        other = self._check(other)
        terms: dict = {}
        for (u1, v1), c1 in self.terms.items():
            for (u2, v2), c2 in other.terms.items():
                key = (tuple(p + q for p, q in zip(u1, u2)), tuple(p + q for p, q in zip(v1, v2)))
                terms[key] = terms.get(key, 0) + c1 * c2
        return BiPoly(self.ambient, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "BiPoly":
        c = _coerce(c)
        return BiPoly(self.ambient, {m: c * v for m, v in self.terms.items()})

    def __pow__(self, n: int):
        out = BiPoly.const(*self.ambient)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.ambient == other.ambient and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == BiPoly.const(*self.ambient, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ambient, frozenset(self.terms.items())))

    def __repr__(self):
        return "BiPoly(%s)" % self

    def __str__(self):
        return _terms_str([(_mono_str(u, v), c) for (u, v), c in self.sorted_terms()])

    # serialization

    def to_json(self) -> list[dict]:
        return [
            {"xexp": list(u), "yexp": list(v), "coef": format_rational(c)}
            for (u, v), c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, a: int, b: int, records: list[dict]) -> "BiPoly":
        return cls((a, b), [((r["xexp"], r["yexp"]), Fraction(str(r["coef"]))) for r in records])


def poly_arith(kind: str, p: BiPoly, q) -> BiPoly:
    """Dispatch for ``add``, ``sub``, ``mul`` and ``scale``."""
    if kind == "add":
        return p + q
    if kind == "sub":
        return p - q
    if kind == "mul":
        return p * q
    if kind == "scale":
        return p.scale(q)
    raise ValueError("unknown operation %r" % kind)


def partial(p: BiPoly, var: tuple[str, int]) -> BiPoly:
    """Formal derivative with respect to ``('x', i)`` or ``('y', j)``."""
    which, idx = var
    pos = {"x": 0, "y": 1}[which]
    terms = {}
    for mono, c in p.terms.items():
        exps = list(mono[pos])
        e = exps[idx]
        if e == 0:
            continue
        exps[idx] = e - 1
        new = (tuple(exps), mono[1]) if pos == 0 else (mono[0], tuple(exps))
        terms[new] = c * e
    return BiPoly(p.ambient, terms)


def poly_det(mat: Sequence[Sequence[BiPoly]]) -> BiPoly:
    """Determinant by Laplace expansion along rows, memoized on column subsets."""
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("matrix is not square")
    if n == 0:
        raise ValueError("empty matrix has no ambient")
    ambient = mat[0][0].ambient
    for row in mat:
        for e in row:
            if e.ambient != ambient:
                raise AmbientMismatch("entries have different ambients")

    memo: dict[int, BiPoly] = {}

    def minor(row: int, cols: int) -> BiPoly:
        # determinant of rows row..n-1 restricted to the column bitmask
        if row == n:
            return BiPoly.const(*ambient)
        hit = memo.get(cols)
        if hit is not None:
            return hit
        total = BiPoly(ambient)
        sign = 1
        for c in range(n):
            if not cols >> c & 1:
                continue
            entry = mat[row][c]
            if entry:
                sub = minor(row + 1, cols & ~(1 << c))
                if sub:
                    term = entry * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[cols] = total
        return total

    return minor(0, (1 << n) - 1)


def exact_div_monomial(p: BiPoly, mono) -> BiPoly:
    """Divide every term of p by the monomial ``(u, v)``."""
    mu, mv = (tuple(e) for e in mono)
    terms = {}
    for (u, v), c in p.terms.items():
        nu = tuple(p_ - q for p_, q in zip(u, mu))
        nv = tuple(p_ - q for p_, q in zip(v, mv))
        if min(nu + nv, default=0) < 0:
            raise DivisionNotExact("%s is not divisible by %s" % (_mono_str(u, v), _mono_str(mu, mv)))
        terms[(nu, nv)] = c
    return BiPoly(p.ambient, terms)


# -- the duplicate-variable ring -------------------------------------------------


class QuadPoly:
    """Element of Q[X, Y, x, y]; keys are (U, V, u, v) exponent tuples."""

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient, terms: Mapping | Iterable = ()):
        self.ambient = tuple(ambient)
        clean = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            key = tuple(tuple(e) for e in key)
            c = _coerce(c)
            if c:
                clean[key] = clean.get(key, 0) + c
                if not clean[key]:
                    del clean[key]
        self.terms = clean

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, QuadPoly):
            return NotImplemented
        return self.ambient == other.ambient and self.terms == other.terms

    def __hash__(self):
        return hash((self.ambient, frozenset(self.terms.items())))

    def __add__(self, other: "QuadPoly"):
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return QuadPoly(self.ambient, terms)

    def __neg__(self):
        return QuadPoly(self.ambient, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, QuadPoly):
            c = _coerce(other)
            return QuadPoly(self.ambient, {k: c * v for k, v in self.terms.items()})
        terms: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(tuple(p + q for p, q in zip(e1, e2)) for e1, e2 in zip(k1, k2))
                terms[key] = terms.get(key, 0) + c1 * c2
        return QuadPoly(self.ambient, terms)

    __rmul__ = __mul__

    @classmethod
    def lower(cls, p: BiPoly) -> "QuadPoly":
        """Embed p in the lowercase variables x, y."""
        a, b = p.ambient
        z = ((0,) * (a + 1), (0,) * (b + 1))
        return cls(p.ambient, {(z[0], z[1], u, v): c for (u, v), c in p.terms.items()})

    @classmethod
    def upper(cls, p: BiPoly) -> "QuadPoly":
        """Embed p in the uppercase variables X, Y."""
        a, b = p.ambient
        z = ((0,) * (a + 1), (0,) * (b + 1))
        return cls(p.ambient, {(u, v, z[0], z[1]): c for (u, v), c in p.terms.items()})

    def swap(self) -> "QuadPoly":
        """Interchange (x, y) with (X, Y)."""
        return QuadPoly(self.ambient, {(u, v, U, V): c for (U, V, u, v), c in self.terms.items()})

    def uppercase_part(self) -> BiPoly:
        """Set x = y = 0 and rename X, Y to x, y."""
        return BiPoly(self.ambient, {(U, V): c for (U, V, u, v), c in self.terms.items() if not any(u) and not any(v)})

    def merge(self) -> BiPoly:
        """Set X = x, Y = y."""
        terms: dict = {}
        for (U, V, u, v), c in self.terms.items():
            key = (tuple(p + q for p, q in zip(U, u)), tuple(p + q for p, q in zip(V, v)))
            terms[key] = terms.get(key, 0) + c
        return BiPoly(self.ambient, terms)

    def pairs(self) -> Iterator:
        """Yield ((U, V), (u, v), coef)."""
        for (U, V, u, v), c in self.terms.items():
            yield (U, V), (u, v), c

    def __repr__(self):
        return "QuadPoly(%s)" % self

    def __str__(self):
        items = []
        for (U, V, u, v), c in sorted(self.terms.items()):
            s = "*".join(t for t in (_mono_str(U, V, ("X", "Y")), _mono_str(u, v)) if t)
            items.append((s, c))
        return _terms_str(items)


def _split_exponents(e: tuple[int, ...]):
    """All (upper, lower, multinomial weight) with upper + lower = e."""
    for upper in product(*(range(k + 1) for k in e)):
        lower = tuple(k - j for k, j in zip(e, upper))
        w = 1
        for k, j in zip(e, upper):
            w *= comb(k, j)
        yield upper, lower, w


def tilde(p: BiPoly) -> QuadPoly:
    """F(X + x, Y + y) expanded in the duplicate-variable ring."""
    terms: dict = {}
    for (u, v), c in p.terms.items():
        for U, lu, wu in _split_exponents(u):
            for V, lv, wv in _split_exponents(v):
                key = (U, V, lu, lv)
                terms[key] = terms.get(key, 0) + c * wu * wv
    return QuadPoly(p.ambient, terms)


def quad_component(q: QuadPoly, alpha: int, beta: int) -> QuadPoly:
    """Terms whose lowercase bidegree is exactly (alpha, beta)."""
    return QuadPoly(
        q.ambient,
        {k: c for k, c in q.terms.items() if sum(k[2]) == alpha and sum(k[3]) == beta},
    )
