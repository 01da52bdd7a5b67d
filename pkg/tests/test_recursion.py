import itertools
import json

import pytest
from hypothesis import given, strategies as st

from qdyson.ctengine import DysonInstance, d_brute, two_part_ct
from qdyson.identities import kadell_rhs
from qdyson.qpoly import ScalarQ
from qdyson.recursion import (
    PreconditionError,
    analyze,
    cross_validate,
    d_recursive,
    recursion_prefactor,
    step_case1,
    step_case2,
)


def vplus(v):
    return tuple(sorted((x for x in v if x > 0), reverse=True))


def at_vplus(a, n0, v):
    return DysonInstance(tuple(a), n0, tuple(v), vplus(v))


@st.composite
def composition_instances(draw, max_n=3, max_a=3, max_v=3):
    n = draw(st.integers(1, max_n))
    a = tuple(draw(st.integers(1, max_a)) for _ in range(n))
    n0 = draw(st.integers(0, n))
    v = tuple(draw(st.integers(0, max_v)) for _ in range(n))
    return at_vplus(a, n0, v)


def test_analyze_examples():
    an = analyze((3, 0, 1), 3, 1)
    assert (an.r, an.S1, an.S2) == (1, (1,), (3,))
    an = analyze((0, 0), 2, 0)
    assert (an.r, an.S1, an.S2) == (0, (), (1, 2))
    an = analyze((2, 0), 2, 2, (2, 1))
    assert (an.r, an.S1, an.S2) == (2, (1,), ())
    assert an.a_tilde == (1, 0) and an.alpha == (0, 0)


def test_step_case1_example():
    parent = DysonInstance((2, 1), 2, (2, 0), (2,))
    pref, sub = step_case1(parent)
    assert sub == DysonInstance((1,), 1, (0,), ())
    assert pref * d_brute(sub) == d_brute(parent)


def test_step_case1_head_mismatch():
    with pytest.raises(PreconditionError, match="lambda head mismatch"):
        step_case1(DysonInstance((2, 1), 2, (2, 0), (1, 1)))


def test_step_case2_examples():
    pref, sub = step_case2(DysonInstance((1, 1), 0, (0, 1), (1,)))
    assert pref == ScalarQ(1)
    assert sub == DysonInstance((1,), 0, (0,), ())
    parent = DysonInstance((1, 1), 0, (1, 1), (1, 1))
    pref, sub = step_case2(parent)
    assert sub.n == 0
    assert pref * d_brute(sub) == d_brute(parent)
    with pytest.raises(PreconditionError):
        step_case2(DysonInstance((1, 1), 0, (1, 1), (1,)))


def test_prefactor_rejects_r_zero():
    with pytest.raises(PreconditionError):
        recursion_prefactor((1, 1), (1,), 0, 2)


def test_d_recursive_examples():
    value, trace = d_recursive(DysonInstance((1, 1), 0, (0, 1), (1,)))
    assert value == ScalarQ(1)
    assert [s.case for s in trace.steps] == ["2", "base"]
    assert trace.steps[0].removed == (2,)
    assert trace.steps[1].prefactor == ScalarQ(1)

    value, trace = d_recursive(DysonInstance((1, 2), 1, (1, 0), (1,)))
    assert value.is_zero() and trace.steps[-1].case == "zero"
    assert d_brute(DysonInstance((1, 2), 1, (1, 0), (1,))).is_zero()

    for a, n0 in [((2, 1), 1), ((1, 2, 1), 0), ((2, 2), 2)]:
        value, trace = d_recursive(DysonInstance(a, n0, (0,) * len(a), ()))
        assert value == two_part_ct(a, n0)
        assert len(trace.steps) == 1


def test_policies():
    bad = DysonInstance((1, 1), 0, (2, 0), (1, 1))
    with pytest.raises(PreconditionError):
        d_recursive(bad, "strict")
    value, trace = d_recursive(bad, "fallback")
    assert value == d_brute(bad)
    assert trace.steps[-1].case == "fallback"
    with pytest.raises(ValueError):
        d_recursive(bad, "lenient")
    neg = DysonInstance((1, 1), 0, (2, -1), (1,))
    with pytest.raises(PreconditionError):
        d_recursive(neg, "strict")


def test_recursion_matches_brute_exhaustively():
    for n in range(1, 4):
        for a in itertools.product(range(1, 3), repeat=n):
            for n0 in range(n + 1):
                for v in itertools.product(range(3), repeat=n):
                    x = at_vplus(a, n0, v)
                    value, trace = d_recursive(x, "strict")
                    assert value == d_brute(x), x


@given(composition_instances())
def test_trace_reconstruction(x):
    value, trace = d_recursive(x)
    assert trace.product() == value
    if trace.steps[-1].case == "zero":
        assert value.is_zero()
    for st_ in trace.steps:
        if st_.case in ("1", "2"):
            step = step_case1 if st_.case == "1" else step_case2
            pref, sub = step(st_.remaining)
            assert pref == st_.prefactor
            assert pref * d_brute(sub) == d_brute(st_.remaining)


@given(composition_instances(max_n=3, max_a=2, max_v=2))
def test_trace_json_is_plain_data(x):
    _, trace = d_recursive(x)
    data = json.loads(trace.dumps())
    assert len(data) == len(trace.steps)
    assert all(set(d) == {"case", "removed", "prefactor", "remaining"} for d in data)


def test_cross_validate():
    x = DysonInstance((1, 2), 0, (0, 2), (2,))
    rep = cross_validate(x)
    assert rep["status"] == "verified"
    assert rep["values"]["kadell"] == str(kadell_rhs((1, 2), 2, 2)) == rep["values"]["brute"]
    rep = cross_validate(DysonInstance((1, 2), 1, (1, 0), (1,)))
    assert rep["status"] == "verified"
    assert rep["values"]["brute"] == "0"
    rep = cross_validate(DysonInstance((2, 1), 1, (0, 0), ()))
    assert rep["values"]["recursion"] == str(two_part_ct((2, 1), 1))
