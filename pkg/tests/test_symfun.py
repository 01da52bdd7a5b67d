import itertools

import pytest
from hypothesis import given, strategies as st

from qdyson.laurent import LaurentPoly, xw_context
from qdyson.qpoly import QPoly, ScalarQ
from qdyson.symfun import (
    Alphabet,
    build_alphabet,
    complete_h,
    h_lambda,
    jacobi_trudi_expansion,
    partitions,
    schur_bialternant,
    schur_jt,
    ssyt_schur,
)

CTX = xw_context(2)


def x(i, k=1, coeff=1):
    return LaurentPoly(CTX, {CTX.monomial(**{f"x{i}": k}): coeff})


def test_build_alphabet_examples():
    assert build_alphabet((2, 1), 1).letters == ((1, 0), (2, 0))
    assert build_alphabet((1, 1), 0).letters == ((1, 0), (2, 0))
    assert build_alphabet((1,), 1).letters == ()
    assert build_alphabet((3, 2), 0).letters == ((1, 0), (1, 1), (1, 2), (2, 0), (2, 1))
    with pytest.raises(ValueError):
        build_alphabet((0, 1), 0)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=4), st.data())
def test_alphabet_size(a, data):
    n0 = data.draw(st.integers(0, len(a)))
    assert len(build_alphabet(a, n0)) == sum(a) - n0


def test_complete_h_examples():
    two_letters = Alphabet(((1, 0), (1, 1)), 2)
    assert complete_h(2, two_letters) == x(1, 2, ScalarQ(QPoly([1, 1, 1])))
    assert complete_h(0, two_letters) == LaurentPoly.constant(CTX, 1)
    assert complete_h(1, build_alphabet((2, 1), 1)) == x(1) + x(2)


def test_h_lambda_examples():
    al = build_alphabet((1, 1), 0)
    assert h_lambda((), al) == LaurentPoly.constant(CTX, 1)
    assert h_lambda((1, 1), al) == (x(1) + x(2)) ** 2
    assert h_lambda((2,), Alphabet(((1, 0), (1, 1)), 2)) == x(1, 2, ScalarQ(QPoly([1, 1, 1])))


def test_schur_examples():
    al = build_alphabet((1, 1), 0)
    letters = al.as_terms()
    assert schur_jt((1, 1), al) == x(1) * x(2)
    assert schur_jt((), al) == LaurentPoly.constant(CTX, 1)
    assert schur_jt((3,), al) == complete_h(3, al)
    assert schur_bialternant((1, 1), letters) == x(1) * x(2)
    assert schur_bialternant((1,), letters) == x(1) + x(2)
    assert schur_bialternant((), letters[:1]) == LaurentPoly.constant(CTX, 1)


def test_bialternant_rejects_repeated_letters():
    letters = build_alphabet((1, 1), 0).as_terms()
    with pytest.raises(ValueError):
        schur_bialternant((1,), [letters[0], letters[0]])


def test_jacobi_trudi_small_expansions():
    assert jacobi_trudi_expansion((1, 1)) == {(1, 1): 1, (2,): -1}
    assert jacobi_trudi_expansion((1, 1, 1)) == {(1, 1, 1): 1, (2, 1): -2, (3,): 1}


def test_jacobi_trudi_size_independent():
    for size in range(4):
        for lam in partitions(size):
            base = jacobi_trudi_expansion(lam)
            for extra in range(1, 3):
                assert jacobi_trudi_expansion(lam, max(len(lam), 1) + extra) == base
    with pytest.raises(ValueError):
        jacobi_trudi_expansion((1, 1), 1)


def test_generating_function_truncation():
    # sum_{r<=R} h_r z^r == prod 1/(1 - z*letter) mod z^{R+1}, with z carried as w1^-1
    ctx = xw_context(2, 1)
    al = build_alphabet((2, 2), 1)
    R = 4
    z = ctx.monomial(w1=-1)
    series = LaurentPoly.constant(ctx, 1)
    for i, e in al.letters:
        letter = LaurentPoly.term(ctx, tuple(a + b for a, b in zip(ctx.monomial(**{f"x{i}": 1}), z)), ScalarQ.q_power(e))
        geo = sum((letter**k for k in range(1, R + 1)), LaurentPoly.constant(ctx, 1))
        series = series * geo
        series = LaurentPoly(ctx, {m: c for m, c in series.terms.items() if m[2] >= -R})
    lhs = LaurentPoly(ctx, {})
    for r in range(R + 1):
        hr = complete_h(r, al, ctx)
        lhs = lhs + hr * LaurentPoly.term(ctx, ctx.monomial(w1=-r))
    assert lhs == series


@given(st.permutations([(1, 0), (1, 1), (2, 0), (2, 2)]), st.integers(0, 4))
def test_complete_h_symmetric_in_letters(perm, r):
    base = Alphabet(((1, 0), (1, 1), (2, 0), (2, 2)), 2)
    assert complete_h(r, Alphabet(tuple(perm), 2)) == complete_h(r, base)


def test_jt_equals_bialternant_and_tableaux():
    for a, n0 in [((2, 1), 0), ((3,), 0), ((2, 2), 0), ((3, 2), 1), ((1, 1, 1), 0)]:
        al = build_alphabet(a, n0)
        letters = al.as_terms()
        for size in range(5):
            for lam in partitions(size, max_len=3):
                jt = schur_jt(lam, al)
                assert jt == ssyt_schur(lam, letters)
                if len(lam) <= len(letters):
                    assert jt == schur_bialternant(lam, letters)
                else:
                    assert jt.is_zero()


def test_partitions_enumeration():
    assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert list(partitions(0)) == [()]
    assert list(partitions(4, max_len=2)) == [(4,), (3, 1), (2, 2)]
    counts = [len(list(partitions(k))) for k in range(9)]
    assert counts == [1, 1, 2, 3, 5, 7, 11, 15, 22]
