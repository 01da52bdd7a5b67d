import itertools

import pytest
from hypothesis import given, strategies as st

from qdyson.ctengine import DysonInstance, d_brute
from qdyson.identities import (
    DegenerateError,
    check_e_sum,
    check_transsum,
    dominance_leq,
    kadell_rhs,
    l_weight,
    max_subset_scores,
    qdyson_rhs,
    vanishing_predicate,
)
from qdyson.qpoly import QPoly, ScalarQ, q_multinomial
from qdyson.symfun import partitions


def test_qdyson_rhs_examples():
    assert qdyson_rhs((1, 1)) == QPoly([1, 1])
    assert qdyson_rhs((4,)) == QPoly([1])
    assert qdyson_rhs((1, 2, 1)) == q_multinomial(4, (1, 2, 1))


def test_kadell_examples():
    assert kadell_rhs((1, 1), 1, 1) == ScalarQ(QPoly([0, 1]))
    assert kadell_rhs((1, 1), 2, 1) == ScalarQ(1)


def test_kadell_matches_brute():
    for n in range(1, 4):
        for a in itertools.product(range(1, 3 if n == 3 else 4), repeat=n):
            for k in range(1, n + 1):
                for r in range(1, 4):
                    v = tuple(r if i == k else 0 for i in range(1, n + 1))
                    assert kadell_rhs(a, k, r) == d_brute(DysonInstance(a, 0, v, (r,))), (a, k, r)


def test_vanishing_examples():
    w = vanishing_predicate((1, 1), (2,), 2, 0)
    assert w is not None and w.j == 1
    assert [row[0] for row in w.per_subset] == [(1,), (2,)]
    assert vanishing_predicate((0, 1), (1,), 2, 0) is None
    assert vanishing_predicate((2, 0), (1, 1), 2, 1) is None
    with pytest.raises(ValueError):
        vanishing_predicate((1, 1), (1,), 2, 0)


def test_dominance_examples():
    assert dominance_leq((1, 1), (2,))
    assert not dominance_leq((2,), (1, 1))
    assert dominance_leq((2, 1), (2, 1))


def test_l_weight_examples():
    a = (5, 7, 11)
    assert l_weight(3, {1}, {2}, a) == 5 + 11
    assert l_weight(3, set(), {1, 2}, a) == 0
    assert l_weight(2, {2}, {2}, a) == 0
    with pytest.raises(ValueError):
        l_weight(2, {3}, set(), a)


def test_e_sum():
    for n in range(9):
        for t in range(n + 1):
            assert check_e_sum(n, t)


def test_transsum_examples():
    assert check_transsum(2, (1, 2), (1, 1), 1)
    assert check_transsum(3, (1, 3), (1, 2, 1), 2)
    assert check_transsum(3, (1, 2, 3), (2, 1, 1), 1)


def test_transsum_grid():
    checked = 0
    for m in range(2, 5):
        for size in (2, 3):
            for I in itertools.combinations(range(1, m + 1), size):
                for a in itertools.product((1, 2), repeat=m):
                    for r in (1, 2, 3):
                        try:
                            assert check_transsum(m, I, a, r), (m, I, a, r)
                            checked += 1
                        except DegenerateError:
                            pass
    assert checked > 0


@given(
    st.integers(1, 5),
    st.data(),
)
def test_l_weight_matches_pair_enumeration(m, data):
    a = tuple(data.draw(st.lists(st.integers(0, 5), min_size=m, max_size=m)))
    I = set(data.draw(st.lists(st.integers(1, m), max_size=m)))
    J = set(data.draw(st.lists(st.integers(1, m), max_size=m)))
    expected = sum(a[j - 1] for i in I for j in range(1, m + 1) if i <= j and j not in J)
    assert l_weight(m, I, J, a) == expected


@given(st.integers(0, 7), st.data())
def test_dominance_matches_prefix_definition(size, data):
    parts = list(partitions(size))
    mu = data.draw(st.sampled_from(parts))
    nu = data.draw(st.sampled_from(parts))
    pad = size + 1
    pm = [sum(mu[:k]) for k in range(pad)]
    pn = [sum(nu[:k]) for k in range(pad)]
    assert dominance_leq(mu, nu) == all(x <= y for x, y in zip(pm, pn))
    if dominance_leq(mu, nu) and dominance_leq(nu, mu):
        assert mu == nu


@given(st.integers(2, 3), st.data())
def test_predicate_implies_zero(n, data):
    a = tuple(data.draw(st.lists(st.integers(1, 2), min_size=n, max_size=n)))
    n0 = data.draw(st.integers(0, n))
    v = tuple(data.draw(st.lists(st.integers(-1, 3), min_size=n, max_size=n)))
    if sum(v) < 0:
        return
    lam = data.draw(st.sampled_from(list(partitions(sum(v)))))
    w = vanishing_predicate(v, lam, n, n0)
    scores = max_subset_scores(v, n, n0)
    padded = tuple(lam) + (0,) * n
    holds = [scores[j - 1] < sum(padded[:j]) for j in range(1, n)]
    assert (w is not None) == any(holds)
    if w is not None:
        assert w.j == holds.index(True) + 1
        assert d_brute(DysonInstance(a, n0, v, lam)).is_zero()


@given(st.integers(2, 3), st.data())
def test_dominance_corollary(n, data):
    a = tuple(data.draw(st.lists(st.integers(1, 2), min_size=n, max_size=n)))
    n0 = data.draw(st.integers(0, n))
    v = tuple(data.draw(st.lists(st.integers(-1, 3), min_size=n, max_size=n)))
    if sum(v) < 0:
        return
    vp = tuple(sorted(v, reverse=True))
    lam = data.draw(st.sampled_from(list(partitions(sum(v)))))
    if not dominance_leq(lam, vp):
        assert d_brute(DysonInstance(a, n0, v, lam)).is_zero()
