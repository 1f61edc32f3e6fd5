import json
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segre_tate.cohomology import cohom_space, horizontal_core, strand_dim
from segre_tate.differentials import (
    FormError,
    FormTuple,
    assemble_differential,
    diagonal_for,
    differential_sparse,
    horizontal_sign,
    jacobian_component_core,
    sylvester_delta,
    sylvester_delta_prime,
    sylvester_map_core,
    toric_jacobian,
    tree_jacobian,
)
from segre_tate.exterior import expand_sparse, w_dim, wedge_index
from segre_tate.linalg import checked_product, rank_exact
from segre_tate.poly import BiPoly

from oracles import gauss_rank, leibniz_det


def xy(a, b, i, j):
    return BiPoly.xy(a, b, i, j)


def mono(a, b, *pairs):
    return FormTuple.monomials(a, b, pairs)


@st.composite
def form_tuples(draw, a, b, n):
    mats = [[[draw(st.integers(-3, 3)) for _ in range(b + 1)] for _ in range(a + 1)] for _ in range(n)]
    return FormTuple.from_coeffs(a, b, mats)


def test_toric_jacobian_examples():
    assert toric_jacobian(mono(1, 1, (0, 0), (0, 1), (1, 1))) == xy(1, 1, 0, 1)
    assert toric_jacobian(mono(2, 1, (0, 0), (0, 1), (1, 0), (1, 1))).is_zero()
    f = mono(1, 1, (0, 0), (0, 1), (1, 1)).forms
    assert toric_jacobian(FormTuple((1, 1), (f[0], f[0], f[2]))).is_zero()
    with pytest.raises(FormError):
        toric_jacobian(mono(1, 1, (0, 0), (0, 1)))


def test_form_tuple_validation():
    with pytest.raises(FormError):
        FormTuple((1, 1), (BiPoly.x(1, 1, 0),))
    with pytest.raises(FormError):
        FormTuple.from_json('{"a": 1, "b": 1, "forms": [[["1"]]]}')
    with pytest.raises(FormError):
        FormTuple.from_json("not json")
    t = FormTuple.from_json('{"a": 1, "b": 1, "forms": [[["1/2", "0"], ["0", "-3"]]]}')
    assert t.to_json() == {"a": 1, "b": 1, "forms": [[["1/2", "0"], ["0", "-3"]]]}
    assert json.loads(json.dumps(t.to_json())) == t.to_json()


def jacobian_by_leibniz(t):
    # independent evaluation of the defining determinant, then division by x_0 y_b
    from segre_tate.poly import exact_div_monomial, partial

    a, b = t.ambient
    rows = [list(t.forms)]
    rows += [[partial(f, ("x", i)) for f in t.forms] for i in range(1, a + 1)]
    rows += [[partial(f, ("y", j)) for f in t.forms] for j in range(b)]
    det = leibniz_det(rows)
    return exact_div_monomial(det, (tuple(int(i == 0) for i in range(a + 1)), tuple(int(j == b) for j in range(b + 1))))


@pytest.mark.parametrize("a,b", [(1, 1), (2, 1), (1, 2)])
@given(data=st.data())
@settings(max_examples=15, deadline=None)
def test_toric_jacobian_properties(a, b, data):
    t = data.draw(form_tuples(a, b, a + b + 1))
    jac = toric_jacobian(t)
    assert jac == jacobian_by_leibniz(t)
    assert jac.is_zero() or jac.degree == (b, a)
    swapped = FormTuple(t.ambient, (t.forms[1], t.forms[0]) + t.forms[2:])
    assert toric_jacobian(swapped) == -jac


def test_tree_jacobian_examples():
    det_m, jac = tree_jacobian(mono(1, 1, (0, 0), (0, 1), (1, 1)))
    assert det_m in (1, -1) and jac == xy(1, 1, 0, 1).scale(det_m)
    assert jac == toric_jacobian(mono(1, 1, (0, 0), (0, 1), (1, 1)))
    assert tree_jacobian(mono(2, 1, (0, 0), (0, 1), (1, 0), (1, 1))) == (0, BiPoly.zero(2, 1))
    det_m, jac = tree_jacobian([(0, 0), (0, 1), (1, 0)], 1, 1)
    assert det_m in (1, -1) and jac == xy(1, 1, 0, 0).scale(det_m)
    with pytest.raises(FormError):
        tree_jacobian([(0, 0), (0, 0), (1, 0)], 1, 1)


def test_sylvester_examples():
    a = b = 1
    assert sylvester_delta(mono(1, 1, (0, 0), (1, 1))) == BiPoly.monomial(1, 1, (0, 0), (1, 1))
    assert sylvester_delta(mono(1, 1, (0, 0), (0, 1))).is_zero()
    assert sylvester_delta_prime(mono(1, 1, (0, 0), (0, 1))) == BiPoly.monomial(1, 1, (2, 0), (0, 0))
    assert sylvester_delta_prime(mono(1, 1, (0, 0), (1, 1))) == BiPoly.monomial(1, 1, (1, 1), (0, 0))
    f = xy(a, b, 0, 0) + xy(a, b, 1, 1).scale(2)
    assert sylvester_delta(FormTuple((1, 1), (f, f))).is_zero()
    with pytest.raises(FormError):
        sylvester_delta(mono(1, 1, (0, 0)))


@given(form_tuples(2, 1, 3), form_tuples(2, 1, 2))
@settings(max_examples=20, deadline=None)
def test_sylvester_degrees_and_alternation(t, u):
    d = sylvester_delta(t)
    assert d.is_zero() or d.degree == (0, 3)
    assert sylvester_delta(FormTuple(t.ambient, (t.forms[2], t.forms[1], t.forms[0]))) == -d
    dp = sylvester_delta_prime(u)
    assert dp.is_zero() or dp.degree == (2, 0)


def core_column(spec, wedge, coeff_pos):
    return spec.core_sparse[:, wedge * spec.dim_a + coeff_pos].toarray().ravel().tolist()


def test_jacobian_component_examples():
    # top component returns J(ω) itself
    spec = jacobian_component_core(1, 1, 1, 1)
    assert (spec.dim_a, spec.dim_b, spec.m) == (1, 4, 3)
    w = wedge_index(1, 1, (0, 1, 3))  # x0y0, x0y1, x1y1
    col = core_column(spec, w, 0)
    basis = spec.codomain.basis
    assert col == [1 if e == ((1, 0), (0, 1)) else 0 for e in basis]
    # bottom component pairs J in uppercase variables against S*_{1,1}
    spec = jacobian_component_core(1, 1, 0, 0)
    assert (spec.dim_a, spec.dim_b) == (4, 1)
    row = [spec.core_sparse[0, w * 4 + c] for c in range(4)]
    assert row == [1 if e == ((1, 0), (0, 1)) else 0 for e in spec.domain.basis]
    assert jacobian_component_core(1, 1, 2, 0).core_sparse.nnz == 0


def test_sylvester_core_examples():
    spec = sylvester_map_core(1, 1, "delta_prime", 0)
    w = wedge_index(1, 1, (0, 1))  # x0y0 ∧ x0y1
    assert core_column(spec, w, 0) == [1 if e == ((2, 0), (0, 0)) else 0 for e in spec.codomain.basis]
    spec = sylvester_map_core(1, 1, "delta_star", 0)
    w = wedge_index(1, 1, (0, 3))  # x0y0 ∧ x1y1, δ = y0 y1
    pos = spec.domain.index[((0, 0), (1, 1))]
    assert core_column(spec, w, pos) == [1]
    spec = sylvester_map_core(1, 1, "delta_prime", 1)
    pos = spec.domain.index[((0, 1), (0, 0))]  # h = x1
    w = wedge_index(1, 1, (0, 1))
    assert core_column(spec, w, pos) == [1 if e == ((2, 1), (0, 0)) else 0 for e in spec.codomain.basis]
    with pytest.raises(ValueError):
        sylvester_map_core(1, 1, "delta", -1)


@pytest.mark.parametrize("kind,param", [("delta", 0), ("delta", 1), ("delta_prime", 0), ("delta_prime", 2)])
def test_starred_cores_are_transposes(kind, param):
    # δ*_α and δ_α pair the same coefficients: ⟨δ*(ω ⊗ φ_μ), ν⟩ = coefficient of μ in δ(ω)·ν
    a, b = 2, 1
    plain = sylvester_map_core(a, b, kind, param)
    star = sylvester_map_core(a, b, kind + "_star", param)
    n_w = plain.core_sparse.shape[1] // plain.dim_a
    for w in range(n_w):
        p_block = plain.core_sparse[:, w * plain.dim_a:(w + 1) * plain.dim_a].toarray()
        s_block = star.core_sparse[:, w * star.dim_a:(w + 1) * star.dim_a].toarray()
        assert (p_block == s_block.T).all()


def test_diagonal_for_examples():
    d = diagonal_for(1, 1, 0, 0, 0)
    assert (d.sign, d.spec.label, d.source_level, d.target_level) == (1, "J_{1,1}", 2, 0)
    assert diagonal_for(1, 1, 0, 0, -1).sign == -1
    d = diagonal_for(1, 1, 2, 0, -2)
    assert (d.spec.label, d.source_level, d.target_level) == ("δ*_0", 2, 1)
    d = diagonal_for(1, 1, 2, 0, -1)
    assert (d.spec.label, d.source_level, d.target_level) == ("δ'_0", 1, 0)
    assert diagonal_for(1, 1, 2, 0, 1) is None
    d = diagonal_for(2, 1, 0, 3, -2)
    assert (d.spec.label, d.source_level, d.target_level) == ("δ'*_0", 3, 2)
    d = diagonal_for(2, 1, 0, 3, -1)
    assert (d.spec.label, d.source_level, d.target_level) == ("δ_0", 2, 0)


def test_assembly_examples():
    m = assemble_differential(1, 1, 0, 0, -1, 0)
    assert m.shape == (7, 16) and rank_exact(m) == 7
    assert assemble_differential(1, 1, 0, 0, 0, 0).shape == (0, 7)
    m = assemble_differential(1, 1, 0, 0, 2, 3)
    assert m.shape == (16, 36) and rank_exact(m) == 16


def test_assembly_is_deterministic():
    first = assemble_differential(2, 1, 0, 0, -1, 2)
    assert first == assemble_differential(2, 1, 0, 0, -1, 2)
    assert first.is_integral()


@pytest.mark.parametrize("a,b", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_top_level_sign(a, b):
    assert horizontal_sign(a, b, a + b) == (-1) ** (a + b + 1)
    assert horizontal_sign(a, b, 0) == 1


@pytest.mark.parametrize("a,b", [(1, 1), (2, 1), (1, 2)])
def test_commuting_square(a, b):
    # bottom ∘ J_{α,β} = (-1)^{a+b+1} J_{α+1,β+1} ∘ top on every graded piece
    n_prime = w_dim(a, b)
    k = l = 0
    for p in range(-1, min(b, a) - 1):
        al, be = k + p + 1, l + p + 1
        top_src = cohom_space(a, b, k + p - a - b, l + p - a - b, a + b)
        top_tgt = cohom_space(a, b, k + p + 1 - a - b, l + p + 1 - a - b, a + b)
        bot_src = cohom_space(a, b, k + p + 1, l + p + 1, 0)
        bot_tgt = cohom_space(a, b, k + p + 2, l + p + 2, 0)
        top = horizontal_core(top_src, top_tgt)
        bottom = horizontal_core(bot_src, bot_tgt)
        j0 = jacobian_component_core(a, b, al, be)
        j1 = jacobian_component_core(a, b, al + 1, be + 1)
        for n in range(a + b + 2, n_prime + 1):
            left = checked_product(expand_sparse(bottom, n - a - b - 1), expand_sparse(j0, n))
            right = checked_product(expand_sparse(j1, n - 1), expand_sparse(top, n))
            assert ((left - right * (-1) ** (a + b + 1)).toarray() == 0).all()


@pytest.mark.parametrize("args", [(1, 1, 0, 0, 0), (1, 1, 2, 0, 0), (2, 1, 0, 3, 2), (1, 2, -1, 1, 3)])
def test_composites_vanish(args):
    a, b, k, l, kdeg = args
    for p in range(kdeg - w_dim(a, b) - 1, kdeg + a + b + 1):
        assert checked_product(differential_sparse(a, b, k, l, p + 1, kdeg), differential_sparse(a, b, k, l, p, kdeg)).nnz == 0


def test_rank_cross_check_on_small_strand():
    # the component-wise rank agrees with plain Gauss-Jordan
    for p in (-3, -2, -1):
        m = assemble_differential(1, 1, 1, 0, p, 1)
        if m.rows and m.cols:
            assert rank_exact(m) == gauss_rank(m.to_dense())
