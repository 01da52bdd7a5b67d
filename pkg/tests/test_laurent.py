import pytest
from hypothesis import given, strategies as st

from qdyson.laurent import (
    ContextMismatch,
    FactoredRational,
    LaurentPoly,
    VarContext,
    coefficient,
    lowest_degree_in,
    lp_arith,
    poch_monomial,
    substitute,
    xw_context,
)
from qdyson.qpoly import QPoly, ScalarQ

CTX = xw_context(2, 1)  # x1, x2, w1


def mono(**e):
    return CTX.monomial(**e)


def lp(terms):
    return LaurentPoly(CTX, {mono(**m): c for m, c in terms})


small_scalars = st.builds(lambda c, k: ScalarQ.q_power(k, c), st.integers(-3, 3), st.integers(-2, 2))
monos = st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-1, 1))
laurents = st.dictionaries(monos, small_scalars, max_size=5).map(lambda d: LaurentPoly(CTX, d))


def test_dyson_pair_expansion():
    p = lp_arith(
        poch_monomial(CTX, mono(x1=1, x2=-1), 1, 0),
        poch_monomial(CTX, mono(x1=-1, x2=1), 1, 1),
        "mul",
    )
    expected = lp([({}, ScalarQ(QPoly([1, 1]))), ({"x1": -1, "x2": 1}, ScalarQ.q_power(1, -1)), ({"x1": 1, "x2": -1}, -1)])
    assert p == expected
    assert coefficient(p, CTX.zero_monomial()) == ScalarQ(QPoly([1, 1]))
    assert coefficient(p, mono(x1=5)).is_zero()


def test_identities_with_zero_and_one():
    p = poch_monomial(CTX, mono(x1=1, w1=-1), 2, 0)
    assert p + LaurentPoly(CTX, {}) == p
    assert p * LaurentPoly.constant(CTX, 1) == p
    assert coefficient(lp([({"x1": 1}, ScalarQ(QPoly([1, 1])))]), mono(x1=1)) == ScalarQ(QPoly([1, 1]))


def test_poch_monomial_examples():
    assert poch_monomial(CTX, mono(x1=1, x2=-1), 1, 0) == lp([({}, 1), ({"x1": 1, "x2": -1}, -1)])
    assert poch_monomial(CTX, mono(x1=-1, x2=1), 1, 1) == lp([({}, 1), ({"x1": -1, "x2": 1}, ScalarQ.q_power(1, -1))])
    two = poch_monomial(CTX, mono(x1=1, w1=-1), 2, 0)
    assert two == lp([({}, 1), ({"x1": 1, "w1": -1}, ScalarQ(QPoly([-1, -1]))), ({"x1": 2, "w1": -2}, ScalarQ.q_power(1))])
    assert poch_monomial(CTX, mono(x1=1), 0, 3) == LaurentPoly.constant(CTX, 1)


def test_substitute_examples():
    target = mono(x1=1)
    out_ctx = CTX.without("w1")
    assert substitute(poch_monomial(CTX, mono(x1=1, w1=-1), 1, 0), "w1", 0, target).is_zero()
    w2 = lp([({"w1": 2}, 1)])
    assert substitute(w2, "w1", 1, target) == LaurentPoly(out_ctx, {out_ctx.monomial(x1=2): ScalarQ.q_power(2)})
    p = lp([({}, 1), ({"x2": 1, "w1": -1}, ScalarQ.q_power(1, -1))])
    expected = LaurentPoly(out_ctx, {out_ctx.zero_monomial(): 1, out_ctx.monomial(x1=-1, x2=1): -1})
    assert substitute(p, "w1", 1, target) == expected
    with pytest.raises(ValueError):
        substitute(p, "w1", 0, mono(w1=1))


def test_lowest_degree_examples():
    assert lowest_degree_in(lp([({"x1": 2}, 1), ({"x1": 3}, ScalarQ.q_power(1))]), "x1") == 2
    assert lowest_degree_in(lp([({}, 1), ({"x1": 1}, 1)]), "x1") == 0
    assert lowest_degree_in(lp([({"x1": -1, "x2": 1}, 1)]), "x1") == -1
    with pytest.raises(ValueError):
        lowest_degree_in(LaurentPoly(CTX, {}), "x1")


def test_context_mismatch():
    other = xw_context(2, 2)
    with pytest.raises(ContextMismatch):
        LaurentPoly.constant(CTX, 1) + LaurentPoly.constant(other, 1)


def test_text_round_trip():
    p = poch_monomial(CTX, mono(x1=1, w1=-1), 2, 0) * poch_monomial(CTX, mono(x1=-1, x2=1), 2, 1)
    assert LaurentPoly.parse(CTX, str(p)) == p
    assert "(1 + q)" in str(lp([({}, ScalarQ(QPoly([1, 1])))]))


def test_factored_rational_equality():
    ctx = VarContext(("y",))
    y = ctx.monomial(y=1)
    # (1 - y^2) / (1 - y) == 1 + y
    num = LaurentPoly(ctx, {ctx.zero_monomial(): 1, ctx.monomial(y=2): -1})
    left = FactoredRational(num, ((0, y),))
    right = FactoredRational(LaurentPoly(ctx, {ctx.zero_monomial(): 1, y: 1}), ())
    assert left.equals(right)
    assert not left.equals(FactoredRational(LaurentPoly.constant(ctx, 1), ()))


@given(laurents, laurents, monos)
def test_coefficient_is_linear(p, r, e):
    assert coefficient(p + r, e) == coefficient(p, e) + coefficient(r, e)


@given(laurents, laurents, laurents)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(
    st.dictionaries(st.integers(-2, 2), small_scalars, max_size=4),
    st.dictionaries(st.integers(-2, 2), small_scalars, max_size=4),
)
def test_constant_term_multiplicative_on_disjoint_variables(d1, d2):
    p = LaurentPoly(CTX, {mono(x1=k): c for k, c in d1.items()})
    r = LaurentPoly(CTX, {mono(x2=k): c for k, c in d2.items()})
    assert (p * r).constant_term() == p.constant_term() * r.constant_term()


@given(monos, st.integers(0, 3), st.integers(0, 3))
def test_poch_splitting(m, j, k):
    if not any(m):
        m = (1, 0, 0)
    assert poch_monomial(CTX, m, j + k, 0) == poch_monomial(CTX, m, j, 0) * poch_monomial(CTX, m, k, j)
