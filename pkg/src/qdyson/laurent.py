"""Sparse multivariate Laurent polynomials with ScalarQ coefficients.

Every polynomial lives in an explicit :class:`VarContext` (an ordered tuple of
variable names, x-block first then w-block).  Arithmetic between different
contexts raises :class:`ContextMismatch`; moving between contexts is always
an explicit :meth:`LaurentPoly.embed`.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .qpoly import ONE, ZERO, ScalarQ, parse_scalar

Monomial = tuple[int, ...]
Coeff = Union[ScalarQ, int]

__all__ = [
    "ContextMismatch",
    "VarContext",
    "LaurentPoly",
    "FactoredRational",
    "poch_monomial",
    "substitute",
    "lowest_degree_in",
    "coefficient",
    "lp_arith",
    "xw_context",
]


class ContextMismatch(ValueError):
    """Operands live over different ambient variable sets."""


@dataclass(frozen=True)
class VarContext:
    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"variable {name!r} not in context {self.names}") from None

    def zero_monomial(self) -> Monomial:
        return (0,) * len(self.names)

    def monomial(self, **exps: int) -> Monomial:
        """Build an exponent vector from keyword exponents, e.g. ``monomial(x1=1, x2=-1)``."""
        e = [0] * len(self.names)
        for name, k in exps.items():
            e[self.index(name)] = k
        return tuple(e)

    def without(self, name: str) -> "VarContext":
        return VarContext(tuple(v for v in self.names if v != name))

    def gen(self, name: str) -> "LaurentPoly":
        return LaurentPoly(self, {self.monomial(**{name: 1}): ONE})


def xw_context(n: int, s: int = 0) -> VarContext:
    return VarContext(tuple(f"x{i}" for i in range(1, n + 1)) + tuple(f"w{j}" for j in range(1, s + 1)))


def _add_mono(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _as_scalar(c: Coeff) -> ScalarQ:
    return c if isinstance(c, ScalarQ) else ScalarQ(c)


class LaurentPoly:
    """Finitely supported map Monomial -> ScalarQ; zero coefficients are never stored."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: VarContext, terms: Mapping[Monomial, Coeff] | None = None):
        self.ctx = ctx
        clean: dict[Monomial, ScalarQ] = {}
        for m, c in (terms or {}).items():
            if len(m) != ctx.nvars:
                raise ValueError(f"monomial {m} has wrong length for {ctx.names}")
            c = _as_scalar(c)
            if c:
                clean[tuple(m)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, ctx: VarContext, terms: dict[Monomial, ScalarQ]) -> "LaurentPoly":
        p = object.__new__(cls)
        p.ctx = ctx
        p.terms = terms
        return p

    @classmethod
    def constant(cls, ctx: VarContext, c: Coeff = 1) -> "LaurentPoly":
        return cls(ctx, {ctx.zero_monomial(): c})

    @classmethod
    def term(cls, ctx: VarContext, mono: Monomial, c: Coeff = 1) -> "LaurentPoly":
        return cls(ctx, {tuple(mono): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def _check(self, other: "LaurentPoly"):
        if self.ctx != other.ctx:
            raise ContextMismatch(f"{self.ctx.names} vs {other.ctx.names}")

    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, ScalarQ)):
            return LaurentPoly.constant(self.ctx, other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, ScalarQ)):
            other = LaurentPoly.constant(self.ctx, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __add__(self, other) -> "LaurentPoly":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return LaurentPoly._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return self._lift(other) - self

    def scale(self, c: Coeff) -> "LaurentPoly":
        c = _as_scalar(c)
        if not c:
            return LaurentPoly._raw(self.ctx, {})
        return LaurentPoly._raw(self.ctx, {m: v * c for m, v in self.terms.items()})

    def mul_qpow(self, k: int) -> "LaurentPoly":
        return LaurentPoly._raw(self.ctx, {m: v.mul_qpow(k) for m, v in self.terms.items()})

    def mul_monomial(self, mono: Monomial) -> "LaurentPoly":
        return LaurentPoly._raw(self.ctx, {_add_mono(m, mono): v for m, v in self.terms.items()})

    def mul_linear(self, qexp: int, mono: Monomial) -> "LaurentPoly":
        """Multiply by the binomial (1 - q**qexp * x**mono)."""
        return self - self.mul_monomial(mono).mul_qpow(qexp)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, ScalarQ)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (mb, cb), = b.items()
            return LaurentPoly._raw(self.ctx, {_add_mono(m, mb): c * cb for m, c in a.items()})
        acc: dict[Monomial, list[ScalarQ]] = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                acc.setdefault(_add_mono(ma, mb), []).append(ca * cb)
        out = {}
        for m, parts in acc.items():
            s = _sum_scalars(parts)
            if s:
                out[m] = s
        return LaurentPoly._raw(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        out = LaurentPoly.constant(self.ctx, 1)
        for _ in range(k):
            out = out * self
        return out

    def coefficient(self, mono: Monomial) -> ScalarQ:
        return self.terms.get(tuple(mono), ZERO)

    def constant_term(self) -> ScalarQ:
        return self.coefficient(self.ctx.zero_monomial())

    def embed(self, ctx: VarContext) -> "LaurentPoly":
        """Re-express in a context containing every variable actually used."""
        pos = []
        for k, name in enumerate(self.ctx.names):
            if name in ctx.names:
                pos.append(ctx.index(name))
            else:
                pos.append(None)
        out = {}
        for m, c in self.terms.items():
            e = [0] * ctx.nvars
            for k, x in enumerate(m):
                if x:
                    if pos[k] is None:
                        raise ContextMismatch(f"variable {self.ctx.names[k]} missing from {ctx.names}")
                    e[pos[k]] = x
            out[tuple(e)] = c
        return LaurentPoly._raw(ctx, out)

    def total_degree_range(self) -> tuple[int, int]:
        degs = [sum(m) for m in self.terms]
        return min(degs), max(degs)

    def sorted_terms(self) -> list[tuple[Monomial, ScalarQ]]:
        """Graded lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = [f"({c})"]
            for name, e in zip(self.ctx.names, m):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            parts.append(" * ".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly[{','.join(self.ctx.names)}]({self})"

    @classmethod
    def parse(cls, ctx: VarContext, text: str) -> "LaurentPoly":
        """Parse the rendering produced by ``str``."""
        text = text.strip()
        if text == "0":
            return cls(ctx, {})
        terms: dict[Monomial, ScalarQ] = {}
        for chunk in _split_top(text):
            chunk = chunk.strip()
            if not chunk.startswith("("):
                raise ValueError(f"cannot parse term {chunk!r}")
            close = _matching_paren(chunk)
            coef = parse_scalar(chunk[1:close])
            rest = chunk[close + 1:]
            if not re.fullmatch(r"(?:\s*\*\s*[A-Za-z]\w*(?:\^-?\d+)?)*\s*", rest):
                raise ValueError(f"cannot parse monomial {rest!r}")
            e = [0] * ctx.nvars
            for name, exp in re.findall(r"([A-Za-z]\w*)(?:\^(-?\d+))?", rest):
                e[ctx.index(name)] += int(exp) if exp else 1
            key = tuple(e)
            terms[key] = terms.get(key, ZERO) + coef
        return cls(ctx, terms)


def _matching_paren(text: str) -> int:
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return i
    raise ValueError(f"unbalanced parentheses in {text!r}")


def _split_top(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and text.startswith(" + ", i):
            out.append("".join(cur))
            cur = []
            i += 3
            continue
        cur.append(ch)
        i += 1
    out.append("".join(cur))
    return out


def _sum_scalars(parts: list[ScalarQ]) -> ScalarQ:
    if len(parts) == 1:
        return parts[0]
    # group by denominator so the gcd work happens once per distinct denominator
    groups: dict[tuple, ScalarQ] = {}
    for p in parts:
        key = p.den.c
        g = groups.get(key)
        if g is None:
            groups[key] = ScalarQ._raw(p.num, p.den)
        else:
            groups[key] = ScalarQ._raw(g.num + p.num, p.den)
    total = ZERO
    for g in groups.values():
        total = total + ScalarQ(g.num, g.den)
    return total


# --------------------------------------------------------------------- operations


def lp_arith(p: LaurentPoly, r: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return p + r
    if op == "sub":
        return p - r
    if op == "mul":
        return p * r
    raise ValueError(f"unknown op {op!r}")


def coefficient(p: LaurentPoly, mono: Monomial) -> ScalarQ:
    return p.coefficient(mono)


def poch_monomial(ctx: VarContext, mono: Monomial, k: int, shift: int = 0) -> LaurentPoly:
    """(q**shift * x**mono; q)_k as a Laurent polynomial."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = LaurentPoly.constant(ctx, 1)
    for t in range(k):
        out = out.mul_linear(shift + t, mono)
    return out


def substitute(p: LaurentPoly, var: str, qexp: int, target: Monomial, ctx_out: VarContext | None = None) -> LaurentPoly:
    """Substitute ``var -> q**qexp * x**target``; ``target`` is over ``p.ctx``.

    The result drops ``var`` from the context unless ``ctx_out`` is given.
    """
    k = p.ctx.index(var)
    if target[k]:
        raise ValueError(f"substitution target involves {var}")
    ctx_out = ctx_out or p.ctx.without(var)
    out: dict[Monomial, ScalarQ] = {}
    for m, c in p.terms.items():
        e = m[k]
        new = tuple(x + e * t for x, t in zip(m, target))
        new = new[:k] + (0,) + new[k + 1:]
        coeff = c.mul_qpow(qexp * e)
        s = out.get(new)
        out[new] = coeff if s is None else s + coeff
    res = LaurentPoly(p.ctx, out)
    return res.embed(ctx_out)


def lowest_degree_in(p: LaurentPoly, var: str) -> int:
    if p.is_zero():
        raise ValueError("lowest degree of the zero polynomial is undefined")
    k = p.ctx.index(var)
    return min(m[k] for m in p.terms)


# --------------------------------------------------------------------- factored rationals

DenFactor = tuple[int, Monomial]  # (qexp, mono) meaning 1 - q**qexp * x**mono


@dataclass(frozen=True)
class FactoredRational:
    """``numerator / prod(1 - q**e * x**m for (e, m) in den)``."""

    numerator: LaurentPoly
    den: tuple[DenFactor, ...]

    def __post_init__(self):
        object.__setattr__(self, "den", tuple(sorted(self.den)))
        for e, m in self.den:
            if not any(m) and e == 0:
                raise ZeroDivisionError("denominator factor 1 - 1 vanishes")

    @property
    def ctx(self) -> VarContext:
        return self.numerator.ctx

    def den_poly(self, factors: Iterable[DenFactor] | None = None) -> LaurentPoly:
        out = LaurentPoly.constant(self.ctx, 1)
        for e, m in (self.den if factors is None else factors):
            out = out.mul_linear(e, m)
        return out

    def embed(self, ctx: VarContext) -> "FactoredRational":
        num = self.numerator.embed(ctx)
        den = []
        for e, m in self.den:
            mono = LaurentPoly.term(self.ctx, m).embed(ctx)
            (mm,) = mono.terms
            den.append((e, mm))
        return FactoredRational(num, tuple(den))

    def cleared_against(self, full_den: Sequence[DenFactor]) -> LaurentPoly:
        """numerator * (full_den / den); ``den`` must be a sub-multiset of ``full_den``."""
        rest = Counter(full_den)
        rest.subtract(Counter(self.den))
        if any(v < 0 for v in rest.values()):
            raise ValueError("denominator is not contained in the clearing multiset")
        out = self.numerator
        for (e, m), mult in sorted(rest.items()):
            for _ in range(mult):
                out = out.mul_linear(e, m)
        return out

    def equals(self, other: "FactoredRational") -> bool:
        """Cross-multiplied equality after cancelling the common denominator factors."""
        if self.ctx != other.ctx:
            raise ContextMismatch(f"{self.ctx.names} vs {other.ctx.names}")
        a, b = Counter(self.den), Counter(other.den)
        common = a & b
        only_a = list((a - common).elements())
        only_b = list((b - common).elements())
        left = self.numerator
        for e, m in only_b:
            left = left.mul_linear(e, m)
        right = other.numerator
        for e, m in only_a:
            right = right.mul_linear(e, m)
        return left == right
