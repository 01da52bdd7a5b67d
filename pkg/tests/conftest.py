import itertools

import pytest
import sympy as sp
from hypothesis import HealthCheck, settings

from qdyson.qpoly import QPoly, ScalarQ

settings.register_profile(
    "qdyson",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("qdyson")

Q = sp.Symbol("q")


def to_sympy(x) -> sp.Expr:
    """ScalarQ / QPoly -> sympy rational function in q."""
    if isinstance(x, QPoly):
        return sum(c * Q**k for k, c in enumerate(x.c))
    return to_sympy(x.num) / to_sympy(x.den)


def same(x, expr) -> bool:
    return sp.cancel(to_sympy(x) - expr) == 0


def sym_poch(z, k: int) -> sp.Expr:
    return sp.prod([1 - z * Q**t for t in range(k)])


def sym_qbinom(n: int, k: int) -> sp.Expr:
    if k < 0 or k > n:
        return sp.Integer(0)
    return sp.cancel(sym_poch(Q ** (n - k + 1), k) / sym_poch(Q, k))


def sym_ct(a, n0, v, lam) -> sp.Expr:
    """Coefficient of x^v in h_lam(X^(a;n0)) * two-part Dyson product, by sympy expansion.

    Only for tiny instances.  h_r is built as a sum over multisets of letters.
    """
    n = len(a)
    xs = sp.symbols(f"x1:{n + 1}")
    letters = []
    for i in range(n):
        count = a[i] - 1 if i < n0 else a[i]
        letters += [xs[i] * Q**e for e in range(count)]
    expr = sp.Integer(1)
    for r in lam:
        expr *= sum((sp.prod(c) for c in itertools.combinations_with_replacement(letters, r)), sp.Integer(0))
    for i in range(n):
        for j in range(i + 1, n):
            chi = 1 if i < n0 else 0
            expr *= sym_poch(xs[i] / xs[j], a[i] - chi) * sym_poch(Q * xs[j] / xs[i], a[j] - chi)
    shift = sum(a) * 2 + 4
    mono = sp.prod([x**shift for x in xs])
    poly = sp.Poly(sp.expand(expr * mono), *xs)
    return sp.expand(poly.coeff_monomial(sp.prod([x ** (vi + shift) for x, vi in zip(xs, v)])))


@pytest.fixture
def q():
    return Q
