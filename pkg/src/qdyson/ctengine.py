"""Brute-force constant terms of the two-part q-Dyson product.

This module is the ground-truth oracle: every value is a literal coefficient
of an expanded finite product.  The expansion runs in the packed kernel of
:mod:`qdyson._kernel`; :func:`dyson_product` converts back to a
:class:`~qdyson.laurent.LaurentPoly` for inspection.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import _kernel as K
from .laurent import FactoredRational, LaurentPoly, VarContext, poch_monomial, xw_context
from .qpoly import QPoly, ScalarQ
from .symfun import Alphabet, Partition, as_partition, build_alphabet, jacobi_trudi_expansion

__all__ = [
    "DysonInstance",
    "dyson_product",
    "dyson_product_generic",
    "d_brute",
    "d_brute_schur",
    "two_part_ct",
    "build_F",
    "build_F_named",
    "truncated_exponent",
    "relation_coefficient",
]


@dataclass(frozen=True)
class DysonInstance:
    """Parameters (a, n0, v, lambda) of D_{v,lambda}(a; n, n0); n = len(a).

    n = 0 is allowed: recursion steps can remove every index, and the empty
    product has constant term 1.
    """

    a: tuple[int, ...]
    n0: int
    v: tuple[int, ...]
    lam: Partition = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))
        object.__setattr__(self, "lam", as_partition(self.lam))
        if any(x < 1 for x in self.a):
            raise ValueError(f"a must be positive, got {self.a}")
        if not 0 <= self.n0 <= len(self.a):
            raise ValueError(f"n0={self.n0} outside 0..{len(self.a)}")
        if len(self.v) != len(self.a):
            raise ValueError("v and a must have the same length")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def homogeneous(self) -> bool:
        return sum(self.v) == sum(self.lam)

    def key(self) -> tuple:
        return (self.n, self.n0, self.a, self.v, self.lam)

    def to_json(self) -> dict:
        return {"a": list(self.a), "n0": self.n0, "v": list(self.v), "lambda": list(self.lam)}

    @classmethod
    def from_json(cls, obj: dict | str) -> "DysonInstance":
        if isinstance(obj, str):
            obj = json.loads(obj)
        a = obj["a"]
        return cls(tuple(a), int(obj.get("n0", 0)), tuple(obj.get("v", [0] * len(a))), tuple(obj.get("lambda", [])))

    def __str__(self) -> str:
        return f"a={self.a} n0={self.n0} v={self.v} lambda={self.lam}"


def truncated_exponent(a: Sequence[int], n0: int, i: int) -> int:
    """a_i - chi(i <= n0) for a 1-based index i."""
    return a[i - 1] - (1 if i <= n0 else 0)


def _dyson_width(a: tuple[int, ...], n0: int, extra_l1: int = 1) -> int:
    return K.width_for((1 << K.dyson_factor_count(a, n0)) * extra_l1)


def dyson_product(a: Sequence[int], n0: int = 0, ctx: VarContext | None = None) -> LaurentPoly:
    """prod_{i<j} (x_i/x_j)_{a_i - chi(i<=n0)} (q x_j/x_i)_{a_j - chi(i<=n0)}."""
    a = tuple(a)
    n = len(a)
    ctx = ctx or xw_context(n)
    width = _dyson_width(a, n0)
    packed = K.dyson(a, n0, width)
    terms = {}
    for key, c in packed.items():
        e = K.decode(key, n)
        mono = ctx.monomial(**{f"x{i + 1}": x for i, x in enumerate(e)})
        terms[mono] = ScalarQ(QPoly(K.unpack_poly(c, width)))
    return LaurentPoly(ctx, terms)


def dyson_product_generic(a: Sequence[int], n0: int = 0, ctx: VarContext | None = None) -> LaurentPoly:
    """Same product built factor by factor with LaurentPoly arithmetic (slow reference route)."""
    a = tuple(a)
    n = len(a)
    ctx = ctx or xw_context(n)
    out = LaurentPoly.constant(ctx, 1)
    for i, j, b, c in K.pair_exponents(a, n0):
        mono = ctx.monomial(**{f"x{i + 1}": 1, f"x{j + 1}": -1})
        inv = tuple(-x for x in mono)
        out = out * poch_monomial(ctx, mono, b, 0) * poch_monomial(ctx, inv, c, 1)
    return out


def _extract(weights_lam: dict[Partition, int], inst: DysonInstance) -> ScalarQ:
    alphabet = build_alphabet(inst.a, inst.n0)
    counts = alphabet.counts()
    l1 = sum(abs(c) * K.h_l1(mu, len(alphabet)) for mu, c in weights_lam.items())
    width = _dyson_width(inst.a, inst.n0, max(l1, 1))
    packed_p = K.dyson(inst.a, inst.n0, width)
    combo = K.h_combination(tuple(sorted(weights_lam.items())), counts, width)
    return ScalarQ(QPoly(K.unpack_poly(K.extract(combo, packed_p, inst.v), width)))


@lru_cache(maxsize=None)
def _d_brute_cached(a: tuple, n0: int, v: tuple, lam: Partition) -> ScalarQ:
    inst = DysonInstance(a, n0, v, lam)
    return _extract({lam: 1}, inst)


def d_brute(inst: DysonInstance) -> ScalarQ:
    """Coefficient of x**v in h_lambda(X^(a;n0)) times the two-part Dyson product."""
    if not inst.homogeneous:
        return ScalarQ(0)
    return _d_brute_cached(inst.a, inst.n0, inst.v, inst.lam)


@lru_cache(maxsize=None)
def _d_brute_schur_cached(a: tuple, n0: int, v: tuple, lam: Partition) -> ScalarQ:
    inst = DysonInstance(a, n0, v, lam)
    return _extract(jacobi_trudi_expansion(lam), inst)


def d_brute_schur(inst: DysonInstance) -> ScalarQ:
    """As :func:`d_brute` with the Schur function s_lambda in place of h_lambda."""
    if not inst.homogeneous:
        return ScalarQ(0)
    return _d_brute_schur_cached(inst.a, inst.n0, inst.v, inst.lam)


def two_part_ct(a: Sequence[int], n0: int = 0) -> ScalarQ:
    """Constant term D(a; n, n0) of the two-part Dyson product."""
    a = tuple(a)
    return d_brute(DysonInstance(a, n0, (0,) * len(a), ()))


def build_F_named(
    ctx: VarContext,
    a: Sequence[int],
    n0: int,
    xnames: Sequence[str],
    wnames: Sequence[str],
) -> FactoredRational:
    """F_{n,n0}(a; x, w) over the listed variable names inside ``ctx``."""
    a = tuple(a)
    n = len(a)
    if len(xnames) != n:
        raise ValueError("need one x name per entry of a")
    num = LaurentPoly.constant(ctx, 1)
    for i, j, b, c in K.pair_exponents(a, n0):
        mono = ctx.monomial(**{xnames[i]: 1, xnames[j]: -1})
        inv = tuple(-x for x in mono)
        for t in range(b):
            num = num.mul_linear(t, mono)
        for t in range(1, c + 1):
            num = num.mul_linear(t, inv)
    den = []
    for i in range(n):
        for wname in wnames:
            mono = ctx.monomial(**{xnames[i]: 1, wname: -1})
            den.extend((t, mono) for t in range(truncated_exponent(a, n0, i + 1)))
    return FactoredRational(num, tuple(den))


def build_F(a: Sequence[int], n0: int, s: int) -> FactoredRational:
    """F_{n,n0}(a; x, w) with w = (w_1..w_s), in the context x_1..x_n, w_1..w_s."""
    if s < 1:
        raise ValueError("s must be at least 1")
    a = tuple(a)
    n = len(a)
    ctx = xw_context(n, s)
    return build_F_named(ctx, a, n0, ctx.names[:n], ctx.names[n:])


def alphabet_of(inst: DysonInstance) -> Alphabet:
    return build_alphabet(inst.a, inst.n0)


def _truncate_w(p: LaurentPoly, k: int, max_deg: int) -> LaurentPoly:
    # keep terms whose w-exponent lies in -max_deg..0
    return LaurentPoly(p.ctx, {m: c for m, c in p.terms.items() if -max_deg <= m[k] <= 0})


def relation_coefficient(inst: DysonInstance, s: int | None = None) -> ScalarQ:
    """Coefficient of x**v * w**(-lambda) in F_{n,n0}(a; x, w) expanded in powers of x/w.

    Each 1/(1 - c*x_i/w_t) becomes a geometric series cut at w_t-degree
    lambda_t, which is exact for this coefficient.  Independent of the
    alphabet/complete-function route used by :func:`d_brute`.
    """
    lam = inst.lam
    s = max(len(lam), 1) if s is None else s
    if s < len(lam):
        raise ValueError("need at least len(lambda) w variables")
    F = build_F(inst.a, inst.n0, s)
    ctx = F.ctx
    n = inst.n
    parts = list(lam) + [0] * (s - len(lam))
    out = F.numerator
    for t in range(s):
        k = n + t
        series = LaurentPoly.constant(ctx, 1)
        for e, m in F.den:
            if m[k] == 0:
                continue
            term = LaurentPoly.term(ctx, m, ScalarQ.q_power(e))
            geo = LaurentPoly.constant(ctx, 1)
            power = LaurentPoly.constant(ctx, 1)
            for _ in range(parts[t]):
                power = power * term
                geo = geo + power
            series = _truncate_w(series * geo, k, parts[t])
        out = out * series
    target = tuple(inst.v) + tuple(-p for p in parts)
    return out.coefficient(target)
