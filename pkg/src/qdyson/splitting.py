"""Partial fractions of F_{n,n0}(a; x, w) in w_1 and the inductive formula they give."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .identities import DegenerateError
from .ctengine import DysonInstance, build_F, build_F_named, d_brute, truncated_exponent
from .laurent import FactoredRational, LaurentPoly, VarContext, lowest_degree_in, poch_monomial, substitute
from .qpoly import ScalarQ, poch_int, q_binomial
from .recursion import analyze

__all__ = [
    "FactoredRational",
    "SplitBounds",
    "verify_poch_lemma",
    "split_context",
    "build_Aij",
    "build_Bij",
    "coefficient_family",
    "build_coefficient",
    "residue",
    "residue_check",
    "verify_split",
    "degree_claims",
    "inductive_d",
]

LEMMA_RANGES = {"b1": (0, 0), "b2": (-1, -1), "c": (0, -1)}  # t from lo to j + hi


@dataclass(frozen=True)
class SplitBounds:
    """Size guard for :func:`verify_split`; raise it to go past desk scale."""

    max_n: int = 3
    max_a: int = 3
    max_s: int = 2


def verify_poch_lemma(i: int, j: int, t: int, which: str) -> bool:
    """Check one of the three Pochhammer quotient identities in Z(q)[y, 1/y]."""
    if which not in LEMMA_RANGES:
        raise ValueError(f"which must be one of {sorted(LEMMA_RANGES)}")
    if i < 0 or j < 0:
        raise ValueError("i and j must be nonnegative")
    lo, hi = LEMMA_RANGES[which]
    if not lo <= t <= j + hi:
        raise ValueError(f"t={t} outside {lo}..{j + hi} for {which}")
    ctx = VarContext(("y",))
    y, inv = (1,), (-1,)

    def P(mono, k, shift):
        return poch_monomial(ctx, mono, k, shift)

    if which == "b1":
        left = P(inv, i, 0) * P(y, j, 1)
        right = P(y, t, 1 - i) * P(y, j - t, t + 1) * P(inv, i, -t)
        right = right.mul_qpow(i * t)
    elif which == "b2":
        left = P(y, j, 0) * P(inv, i, 1)
        right = P(y, t + 1, -i) * P(y, j - t - 1, t + 1) * P(inv, i, -t)
        right = right.mul_qpow(i * (t + 1))
    else:
        left = P(y, j, 0) * P(inv, i, 1)
        right = P(y, t, -i) * P(y, j - t - 1, t + 1) * P(inv, i + 1, -t)
        right = right.mul_monomial(y).mul_qpow((i + 1) * t).scale(-1)
    return left == right


def split_context(n: int, s: int) -> VarContext:
    """x_1..x_n, w_2..w_s: the variables left once w_1 is substituted away."""
    return VarContext(tuple(f"x{k}" for k in range(1, n + 1)) + tuple(f"w{t}" for t in range(2, s + 1)))


def _ratio(ctx: VarContext, i: int, l: int) -> tuple[int, ...]:
    return ctx.monomial(**{f"x{i}": 1, f"x{l}": -1})


def _sub_F(ctx: VarContext, a: tuple[int, ...], n0: int, i: int, s: int) -> FactoredRational:
    xnames = [f"x{k}" for k in range(1, len(a) + 1) if k != i]
    wnames = [f"w{t}" for t in range(2, s + 1)]
    sub_a = tuple(x for k, x in enumerate(a, start=1) if k != i)
    return build_F_named(ctx, sub_a, n0, xnames, wnames)


def _check_ij(a, n0, i, j, s, first_block: bool):
    n = len(a)
    if s < 1:
        raise ValueError("s must be at least 1")
    if first_block and not 1 <= i <= n0:
        raise ValueError(f"A needs 1 <= i <= n0, got i={i}")
    if not first_block and not n0 < i <= n:
        raise ValueError(f"B needs n0 < i <= n, got i={i}")
    top = a[i - 1] - (2 if first_block else 1)
    if not 0 <= j <= top:
        raise ValueError(f"j={j} outside 0..{top}")


def build_Aij(a: Sequence[int], n0: int, i: int, j: int, s: int) -> FactoredRational:
    """Closed-form coefficient of 1/(1 - q^j x_i/w_1) for a first-block index i."""
    a = tuple(a)
    n = len(a)
    _check_ij(a, n0, i, j, s, True)
    ctx = split_context(n, s)
    ai = a[i - 1]
    expo = j * (sum(a) - ai - n0 + 1) + sum(a[l - 1] - 1 for l in range(i + 1, n0 + 1))
    scalar = ScalarQ.q_power(expo) / (poch_int(-j, j) * poch_int(1, ai - j - 2))
    sub = _sub_F(ctx, a, n0 - 1, i, s)
    num = sub.numerator.scale(scalar)
    for l in range(1, n + 1):
        if l == i:
            continue
        m = _ratio(ctx, i, l)
        al = a[l - 1]
        if l < i:
            num = num * poch_monomial(ctx, m, j, 2 - al) * poch_monomial(ctx, m, ai - j - 1, j + 1)
        elif l <= n0:
            num = num * poch_monomial(ctx, m, j + 1, 1 - al) * poch_monomial(ctx, m, ai - j - 2, j + 1)
        else:
            num = num.mul_monomial(m).scale(-1)
            num = num * poch_monomial(ctx, m, j, 1 - al) * poch_monomial(ctx, m, ai - j - 2, j + 1)
    den = list(sub.den)
    for t in range(2, s + 1):
        m = ctx.monomial(**{f"x{i}": 1, f"w{t}": -1})
        den.extend((e, m) for e in range(ai - 1))
    return FactoredRational(num, tuple(den))


def build_Bij(a: Sequence[int], n0: int, i: int, j: int, s: int) -> FactoredRational:
    """Closed-form coefficient of 1/(1 - q^j x_i/w_1) for a second-block index i."""
    a = tuple(a)
    n = len(a)
    _check_ij(a, n0, i, j, s, False)
    ctx = split_context(n, s)
    ai = a[i - 1]
    expo = j * (sum(a) - ai - n0) + sum(a[i:])
    scalar = ScalarQ.q_power(expo) / (poch_int(-j, j) * poch_int(1, ai - j - 1))
    sub = _sub_F(ctx, a, n0, i, s)
    num = sub.numerator.scale(scalar)
    for l in range(1, n + 1):
        if l == i:
            continue
        m = _ratio(ctx, i, l)
        al = a[l - 1]
        if l <= n0:
            num = num * poch_monomial(ctx, m, j, 2 - al) * poch_monomial(ctx, m, ai - j - 1, j + 1)
        elif l < i:
            num = num * poch_monomial(ctx, m, j, 1 - al) * poch_monomial(ctx, m, ai - j, j + 1)
        else:
            num = num * poch_monomial(ctx, m, j + 1, -al) * poch_monomial(ctx, m, ai - j - 1, j + 1)
    den = list(sub.den)
    for t in range(2, s + 1):
        m = ctx.monomial(**{f"x{i}": 1, f"w{t}": -1})
        den.extend((e, m) for e in range(ai))
    return FactoredRational(num, tuple(den))


def coefficient_family(a: Sequence[int], n0: int):
    """All (i, j) pairs of the splitting, 1-based i, in summation order."""
    a = tuple(a)
    for i in range(1, len(a) + 1):
        for j in range(truncated_exponent(a, n0, i)):
            yield i, j


def build_coefficient(a: Sequence[int], n0: int, i: int, j: int, s: int) -> FactoredRational:
    return build_Aij(a, n0, i, j, s) if i <= n0 else build_Bij(a, n0, i, j, s)


def residue(a: Sequence[int], n0: int, i: int, j: int, s: int) -> FactoredRational:
    """F * (1 - q^j x_i/w_1) evaluated at w_1 = q^j x_i, straight from the definition of F."""
    a = tuple(a)
    n = len(a)
    F = build_F(a, n0, s)
    pole = (j, F.ctx.monomial(**{f"x{i}": 1, "w1": -1}))
    den = Counter(F.den)
    if den[pole] != 1:
        raise ValueError(f"(i, j) = ({i}, {j}) is not a simple pole of F")
    den[pole] -= 1
    out_ctx = split_context(n, s)
    target = F.ctx.monomial(**{f"x{i}": 1})
    num = substitute(F.numerator, "w1", j, target, out_ctx)
    k = F.ctx.index("w1")
    scalar = ScalarQ(1)
    new_den = []
    for (e, m), mult in den.items():
        for _ in range(mult):
            w = m[k]
            if not w:
                mono = LaurentPoly.term(F.ctx, m).embed(out_ctx)
                (mm,) = mono.terms
                new_den.append((e, mm))
                continue
            # 1 - q^e x^m with w_1 -> q^j x_i
            e2 = e + j * w
            m2 = tuple(x + w * tt for x, tt in zip(m, target))
            m2 = m2[:k] + (0,) + m2[k + 1:]
            mono = LaurentPoly.term(F.ctx, m2).embed(out_ctx)
            (mm,) = mono.terms
            if any(mm):
                new_den.append((e2, mm))
            else:
                scalar = scalar * (1 - ScalarQ.q_power(e2))
    return FactoredRational(num.scale(scalar.inverse()), tuple(new_den))


def residue_check(a: Sequence[int], n0: int, i: int, j: int, s: int) -> bool:
    return build_coefficient(a, n0, i, j, s).equals(residue(a, n0, i, j, s))


def verify_split(a: Sequence[int], n0: int, s: int, bounds: SplitBounds | None = None) -> bool:
    """F equals the sum of its partial fractions in w_1, compared after clearing all denominators."""
    a = tuple(a)
    n = len(a)
    bounds = bounds or SplitBounds()
    if n > bounds.max_n or max(a, default=0) > bounds.max_a or s > bounds.max_s:
        raise ValueError(f"instance exceeds {bounds}; pass larger bounds to force it")
    F = build_F(a, n0, s)
    if not any(truncated_exponent(a, n0, i) for i in range(1, n + 1)):
        # no pole in w_1: F is a Laurent polynomial and the sum over poles is empty
        raise DegenerateError("F has no pole in w1 (n0 = n and every a_i = 1)")
    full_den = F.den
    lhs = F.numerator
    rhs = LaurentPoly(F.ctx, {})
    for i, j in coefficient_family(a, n0):
        coeff = build_coefficient(a, n0, i, j, s).embed(F.ctx)
        pole = (j, F.ctx.monomial(**{f"x{i}": 1, "w1": -1}))
        term = FactoredRational(coeff.numerator, coeff.den + (pole,))
        rhs = rhs + term.cleared_against(full_den)
    return lhs == rhs


def degree_claims(a: Sequence[int], n0: int, s: int) -> list[tuple[int, int, int, int]]:
    """(i, j, lowest x_i-degree, claimed bound) per coefficient.

    The denominators of A_ij/B_ij expand as power series in x_i starting at
    degree 0, so the numerator's lowest x_i-degree is that of the series.
    """
    a = tuple(a)
    n = len(a)
    out = []
    for i, j in coefficient_family(a, n0):
        c = build_coefficient(a, n0, i, j, s)
        bound = n - n0 if i <= n0 else 0
        low = lowest_degree_in(c.numerator, f"x{i}")
        out.append((i, j, low, bound))
    return out


def inductive_d(inst: DysonInstance) -> ScalarQ:
    """D_{v,lambda} as a sum over S1 and S2 of (n-1)-variable values, lambda_1 = r required."""
    n, n0, a, v, lam = inst.n, inst.n0, inst.a, inst.v, inst.lam
    if n < 2:
        raise ValueError("inductive formula needs n >= 2")
    an = analyze(v, n, n0, a)
    lam1 = lam[0] if lam else 0
    if lam1 != an.r:
        raise ValueError(f"lambda_1 = {lam1} differs from r = {an.r}")
    if sum(v) != sum(lam):
        return ScalarQ(0)
    if lam1 == 0 and not any(truncated_exponent(a, n0, i) for i in range(1, n + 1)):
        # F is then a polynomial in 1/w_1 of degree 0 and the pole sum misses it;
        # for lambda_1 > 0 that polynomial part has no w_1^{-lambda_1} term anyway
        raise DegenerateError("lambda is empty and F has no pole in w1 (n0 = n, every a_i = 1)")
    top = sum(a) + an.r - 1 - n0
    rest_lam = lam[1:]
    total = ScalarQ(0)
    for i in an.S1:
        if a[i - 1] < 2:
            continue  # empty j-range
        shifted = tuple(x + al for x, al in zip(v, an.alpha))
        sub = DysonInstance(_drop(a, i), n0 - 1, _drop(shifted, i), rest_lam)
        coeff = ScalarQ(q_binomial(top, a[i - 1] - 2)).mul_qpow(sum(a[l - 1] - 1 for l in range(i + 1, n0 + 1)))
        if (n - n0) % 2:
            coeff = -coeff
        total = total + coeff * d_brute(sub)
    for i in an.S2:
        sub = DysonInstance(_drop(a, i), n0, _drop(v, i), rest_lam)
        coeff = ScalarQ(q_binomial(top, a[i - 1] - 1)).mul_qpow(sum(a[i:]))
        total = total + coeff * d_brute(sub)
    return total


def _drop(seq: Sequence[int], i: int) -> tuple[int, ...]:
    return tuple(x for k, x in enumerate(seq, start=1) if k != i)
