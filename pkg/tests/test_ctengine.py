import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import same, sym_ct
from qdyson.ctengine import (
    DysonInstance,
    build_F,
    d_brute,
    d_brute_schur,
    dyson_product,
    dyson_product_generic,
    relation_coefficient,
    two_part_ct,
)
from qdyson.identities import qdyson_rhs
from qdyson.laurent import LaurentPoly, xw_context
from qdyson.qpoly import QPoly, ScalarQ
from qdyson.symfun import partitions


def inst(a, n0, v, lam):
    return DysonInstance(tuple(a), n0, tuple(v), tuple(lam))


def vplus(v):
    return tuple(sorted((x for x in v if x > 0), reverse=True))


@st.composite
def small_instances(draw, max_n=3, max_a=2, vlo=-1, vhi=2):
    n = draw(st.integers(1, max_n))
    a = tuple(draw(st.integers(1, max_a)) for _ in range(n))
    n0 = draw(st.integers(0, n))
    v = tuple(draw(st.integers(vlo, vhi)) for _ in range(n))
    total = sum(v)
    lam = draw(st.sampled_from(list(partitions(total)))) if total >= 0 else ()
    return DysonInstance(a, n0, v, lam)


def test_dyson_product_examples():
    ctx = xw_context(2)
    expected = LaurentPoly.parse(ctx, "(-1) * x1 * x2^-1 + (1 + q) + (-q) * x1^-1 * x2")
    assert dyson_product((1, 1), 0) == expected
    assert dyson_product((1, 1), 2) == LaurentPoly.constant(ctx, 1)
    assert dyson_product((3,), 0) == LaurentPoly.constant(xw_context(1), 1)


def test_d_brute_examples():
    assert d_brute(inst((1, 1), 0, (1, 0), (1,))) == ScalarQ(QPoly([0, 1]))
    assert d_brute(inst((1, 1), 0, (0, 1), (1,))) == ScalarQ(1)
    assert d_brute(inst((1, 1), 0, (1, 1), (1,))).is_zero()
    assert d_brute_schur(inst((1, 1), 0, (1, 0), (1,))) == ScalarQ(QPoly([0, 1]))


def test_two_part_ct_examples():
    assert two_part_ct((1, 1), 0) == ScalarQ(QPoly([1, 1]))
    assert two_part_ct((1, 1), 2) == ScalarQ(1)
    assert two_part_ct((1, 2, 1), 0) == ScalarQ(qdyson_rhs((1, 2, 1)))


def test_build_F_examples():
    F = build_F((1,), 0, 1)
    assert F.numerator == LaurentPoly.constant(F.numerator.ctx, 1)
    assert F.den == ((0, (1, -1)),)
    assert build_F((2,), 0, 1).den == ((0, (1, -1)), (1, (1, -1)))
    F = build_F((1, 1), 1, 1)
    assert F.numerator == LaurentPoly.constant(F.numerator.ctx, 1)
    assert F.den == ((0, (0, 1, -1)),)


def test_qdyson_constant_term():
    for n in range(1, 4):
        for a in itertools.product(range(1, 4), repeat=n):
            assert two_part_ct(a, 0) == ScalarQ(qdyson_rhs(a))


def test_against_sympy_expansion():
    cases = [
        ((1, 1), 0, (1, 0), (1,)),
        ((2, 1), 1, (1, 1), (1, 1)),
        ((2, 1), 0, (2, 0), (2,)),
        ((1, 2), 2, (1, 0), (1,)),
        ((1, 1, 1), 0, (1, 0, 1), (2,)),
        ((2, 1, 1), 1, (0, 1, 1), (1, 1)),
        ((2, 2), 1, (-1, 2), (1,)),
    ]
    for a, n0, v, lam in cases:
        assert same(d_brute(inst(a, n0, v, lam)), sym_ct(a, n0, v, lam)), (a, n0, v, lam)


@given(small_instances())
def test_homogeneity(x):
    off = DysonInstance(x.a, x.n0, x.v, x.lam + (1,))
    assert d_brute(off).is_zero()


@given(small_instances(vlo=0))
def test_schur_matches_complete_at_vplus(x):
    y = DysonInstance(x.a, x.n0, x.v, vplus(x.v))
    assert d_brute_schur(y) == d_brute(y)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.data())
def test_packed_kernel_matches_generic_product(a, data):
    n0 = data.draw(st.integers(0, len(a)))
    assert dyson_product(a, n0) == dyson_product_generic(a, n0)


def test_relation_coefficient_matches_brute():
    for n in (1, 2):
        for a in itertools.product((1, 2), repeat=n):
            for n0 in range(n + 1):
                for v in itertools.product(range(-1, 3), repeat=n):
                    if sum(v) < 0:
                        continue
                    for lam in partitions(sum(v), max_len=2):
                        x = inst(a, n0, v, lam)
                        assert relation_coefficient(x) == d_brute(x), x


@given(small_instances())
def test_instance_json_round_trip(x):
    assert DysonInstance.from_json(x.to_json()) == x


def test_instance_validation():
    with pytest.raises(ValueError):
        inst((0, 1), 0, (0, 0), ())
    with pytest.raises(ValueError):
        inst((1, 1), 3, (0, 0), ())
    with pytest.raises(ValueError):
        inst((1, 1), 0, (0,), ())
    assert d_brute(DysonInstance((), 0, (), ())) == ScalarQ(1)
