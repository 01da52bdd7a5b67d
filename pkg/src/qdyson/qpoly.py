"""Exact polynomials and rational functions in the single formal variable q.

``QPoly`` is an integer polynomial stored as an ascending coefficient tuple.
``ScalarQ`` is a reduced fraction of two ``QPoly`` values; it also carries
Laurent-in-q values such as ``1 - q**-1``.
"""

from __future__ import annotations

import re
from functools import lru_cache
from math import gcd as igcd
from typing import Iterable, Sequence, Union

__all__ = [
    "QPoly",
    "ScalarQ",
    "poch_int",
    "q_binomial",
    "q_multinomial",
    "scalar_arith",
    "parse_qpoly",
    "parse_scalar",
]

# below this length schoolbook multiplication beats packing
_PACK_THRESHOLD = 12


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def pack(coeffs: Sequence[int], width: int) -> int:
    """Evaluate an integer polynomial at ``q = 2**width``."""
    x = 0
    for c in reversed(coeffs):
        x = (x << width) + c
    return x


def unpack(x: int, width: int) -> tuple[int, ...]:
    """Inverse of :func:`pack` for coefficients bounded by ``2**(width-1)``."""
    mask = (1 << width) - 1
    half = 1 << (width - 1)
    out = []
    while x:
        d = x & mask
        if d >= half:
            d -= 1 << width
        out.append(d)
        x = (x - d) >> width
    return _strip(out)


def _mul_coeffs(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    if len(a) < _PACK_THRESHOLD or len(b) < _PACK_THRESHOLD:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return _strip(out)
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    width = bound.bit_length() + 2
    return unpack(pack(a, width) * pack(b, width), width)


class QPoly:
    """Integer polynomial in q, canonical (no trailing zero coefficients)."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[int] = ()):
        self.c = _strip(int(x) for x in coeffs)

    @classmethod
    def _raw(cls, coeffs: tuple[int, ...]) -> "QPoly":
        p = object.__new__(cls)
        p.c = coeffs
        return p

    @classmethod
    def const(cls, k: int) -> "QPoly":
        return cls._raw((k,) if k else ())

    @classmethod
    def monomial(cls, k: int, coeff: int = 1) -> "QPoly":
        if k < 0:
            raise ValueError("negative q-power is not a polynomial")
        return cls._raw((0,) * k + (coeff,) if coeff else ())

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.c) - 1

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def valuation(self) -> int:
        """Lowest q-degree carrying a nonzero coefficient."""
        for k, x in enumerate(self.c):
            if x:
                return k
        raise ValueError("zero polynomial has no valuation")

    def content(self) -> int:
        g = 0
        for x in self.c:
            g = igcd(g, x)
            if g == 1:
                break
        return g

    def __eq__(self, other) -> bool:
        if isinstance(other, QPoly):
            return self.c == other.c
        if isinstance(other, int):
            return self.c == ((other,) if other else ())
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.c)

    def __add__(self, other: "QPoly") -> "QPoly":
        if isinstance(other, int):
            other = QPoly.const(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] += y
        return QPoly._raw(_strip(out))

    __radd__ = __add__

    def __neg__(self) -> "QPoly":
        return QPoly._raw(tuple(-x for x in self.c))

    def __sub__(self, other: "QPoly") -> "QPoly":
        if isinstance(other, int):
            other = QPoly.const(other)
        return self + (-other)

    def __rsub__(self, other: int) -> "QPoly":
        return QPoly.const(other) - self

    def __mul__(self, other: Union["QPoly", int]) -> "QPoly":
        if isinstance(other, int):
            if not other:
                return QPoly._raw(())
            return QPoly._raw(tuple(x * other for x in self.c))
        return QPoly._raw(_mul_coeffs(self.c, other.c))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QPoly":
        out = QPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int) -> "QPoly":
        """Multiply by q**k (k may be negative if the low coefficients vanish)."""
        if not self.c:
            return self
        if k >= 0:
            return QPoly._raw((0,) * k + self.c)
        if any(self.c[:-k]):
            raise ValueError("shift would produce negative q-powers")
        return QPoly._raw(self.c[-k:])

    def exact_div_int(self, k: int) -> "QPoly":
        return QPoly._raw(tuple(x // k for x in self.c))

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        """Division over the integers; requires the result to be integral.

        Raises ``ArithmeticError`` if a quotient coefficient is not an integer.
        """
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        d = other.c
        dl = d[-1]
        nq = len(r) - len(d) + 1
        if nq <= 0:
            return QPoly._raw(()), self
        quo = [0] * nq
        for k in range(nq - 1, -1, -1):
            top = r[k + len(d) - 1]
            if top:
                qk, rem = divmod(top, dl)
                if rem:
                    raise ArithmeticError("non-integral polynomial quotient")
                quo[k] = qk
                for i, y in enumerate(d):
                    r[k + i] -= qk * y
        return QPoly._raw(_strip(quo)), QPoly._raw(_strip(r))

    def exact_div(self, other: "QPoly") -> "QPoly":
        quo, rem = self.divmod(other)
        if not rem.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return quo

    def primitive(self) -> "QPoly":
        g = self.content()
        if g in (0, 1):
            return self
        return self.exact_div_int(g)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.c):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        return f"QPoly({self})"

    def __str__(self) -> str:
        return _render(self.c)


def _prem(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Pseudo-remainder of a by b."""
    r = list(a)
    lb = b[-1]
    db = len(b) - 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for i, y in enumerate(b):
            r[shift + i] -= lr * y
        while r and r[-1] == 0:
            r.pop()
    return tuple(r)


def _primitive_tuple(c: tuple[int, ...]) -> tuple[int, ...]:
    g = 0
    for x in c:
        g = igcd(g, x)
        if g == 1:
            return c
    return tuple(x // g for x in c) if g else c


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Greatest common divisor over Z[q] (primitive PRS); positive leading coefficient."""
    if a.is_zero():
        g = b
    elif b.is_zero():
        g = a
    else:
        # factor out shared powers of q first; it is the commonest common factor here
        v = min(a.valuation(), b.valuation())
        x, y = a.c[a.valuation():], b.c[b.valuation():]
        cont = igcd(QPoly._raw(x).content(), QPoly._raw(y).content())
        x, y = _primitive_tuple(x), _primitive_tuple(y)
        if len(x) < len(y):
            x, y = y, x
        while len(y) > 1:
            r = _prem(x, y)
            x, y = y, _primitive_tuple(r)
        if len(y) == 1:
            core = (1,)
        else:
            core = x
        g = QPoly._raw((0,) * v + tuple(cont * z for z in core))
    if g.lc < 0:
        g = -g
    return g


class ScalarQ:
    """Exact element of Q(q) in canonical reduced form ``num / den``.

    Canonical: gcd(num, den) = 1 in Q[q], den has positive leading
    coefficient, and num and den share no integer content.  The zero value
    is ``0 / 1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Union[QPoly, int] = 0, den: Union[QPoly, int] = 1):
        if isinstance(num, int):
            num = QPoly.const(num)
        if isinstance(den, int):
            den = QPoly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("ScalarQ with zero denominator")
        self.num, self.den = _normalize(num, den)

    @classmethod
    def _raw(cls, num: QPoly, den: QPoly) -> "ScalarQ":
        s = object.__new__(cls)
        s.num = num
        s.den = den
        return s

    @classmethod
    def q_power(cls, k: int, coeff: int = 1) -> "ScalarQ":
        if k >= 0:
            return cls._raw(QPoly.monomial(k, coeff), _ONE_POLY)
        return cls(QPoly.const(coeff), QPoly.monomial(-k))

    def is_zero(self) -> bool:
        return not self.num.c

    def is_one(self) -> bool:
        return self.num.c == (1,) and self.den.c == (1,)

    def is_poly(self) -> bool:
        return self.den.c == (1,)

    def as_qpoly(self) -> QPoly:
        if not self.is_poly():
            raise ValueError(f"{self} is not a polynomial in q")
        return self.num

    def __eq__(self, other) -> bool:
        if isinstance(other, ScalarQ):
            return self.num.c == other.num.c and self.den.c == other.den.c
        if isinstance(other, (int, QPoly)):
            return self == ScalarQ(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num.c, self.den.c))

    def __bool__(self) -> bool:
        return bool(self.num.c)

    def __neg__(self) -> "ScalarQ":
        return ScalarQ._raw(-self.num, self.den)

    def __add__(self, other) -> "ScalarQ":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num.c:
            return other
        if not other.num.c:
            return self
        if self.den.c == (1,) and other.den.c == (1,):
            return ScalarQ._raw(self.num + other.num, _ONE_POLY)
        if self.den.c == other.den.c:
            return ScalarQ(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        d1 = self.den.exact_div(g)
        d2 = other.den.exact_div(g)
        return ScalarQ(self.num * d2 + other.num * d1, d1 * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "ScalarQ":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "ScalarQ":
        return _coerce(other) - self

    def __mul__(self, other) -> "ScalarQ":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num.c or not other.num.c:
            return ZERO
        if self.den.c == (1,) and other.den.c == (1,):
            return ScalarQ._raw(self.num * other.num, _ONE_POLY)
        # cross-cancel: both inputs are already reduced
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = poly_gcd(a, d)
        g2 = poly_gcd(c, b)
        if not g1.is_one():
            a, d = a.exact_div(g1), d.exact_div(g1)
        if not g2.is_one():
            c, b = c.exact_div(g2), b.exact_div(g2)
        return _from_coprime(a * c, b * d)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScalarQ":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.num.c:
            raise ZeroDivisionError("division by the zero ScalarQ")
        return self * other.inverse()

    def __rtruediv__(self, other) -> "ScalarQ":
        return _coerce(other) / self

    def inverse(self) -> "ScalarQ":
        if not self.num.c:
            raise ZeroDivisionError("inverse of zero")
        return _from_coprime(self.den, self.num)

    def __pow__(self, k: int) -> "ScalarQ":
        if k < 0:
            return self.inverse() ** (-k)
        return _from_coprime(self.num ** k, self.den ** k)

    def mul_qpow(self, k: int) -> "ScalarQ":
        """Multiply by q**k without a gcd computation."""
        if not k or not self.num.c:
            return self
        num, den = self.num, self.den
        if k > 0:
            dv = den.valuation()
            t = min(dv, k)
            return ScalarQ._raw(num.shift(k - t), den.shift(-t))
        k = -k
        nv = num.valuation()
        t = min(nv, k)
        return ScalarQ._raw(num.shift(-t), den.shift(k - t))

    def __call__(self, x):
        from fractions import Fraction

        return Fraction(self.num(x)) / Fraction(self.den(x))

    def __repr__(self) -> str:
        return f"ScalarQ({self})"

    def __str__(self) -> str:
        if self.den.c == (1,):
            return _render(self.num.c)
        return f"({_render(self.num.c)}) / ({_render(self.den.c)})"


def _from_coprime(num: QPoly, den: QPoly) -> ScalarQ:
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if not num.c:
        return ZERO
    g = igcd(num.content(), den.content())
    if g != 1:
        num, den = num.exact_div_int(g), den.exact_div_int(g)
    if den.lc < 0:
        num, den = -num, -den
    return ScalarQ._raw(num, den)


def _normalize(num: QPoly, den: QPoly) -> tuple[QPoly, QPoly]:
    if num.is_zero():
        return num, _ONE_POLY
    if den.c != (1,):
        g = poly_gcd(num, den)
        if not g.is_one():
            num, den = num.exact_div(g), den.exact_div(g)
    s = _from_coprime(num, den)
    return s.num, s.den


def _coerce(x) -> ScalarQ:
    if isinstance(x, ScalarQ):
        return x
    if isinstance(x, int):
        return ScalarQ._raw(QPoly.const(x), _ONE_POLY)
    if isinstance(x, QPoly):
        return ScalarQ._raw(x, _ONE_POLY)
    return NotImplemented


_ONE_POLY = QPoly._raw((1,))
ZERO = ScalarQ._raw(QPoly._raw(()), _ONE_POLY)
ONE = ScalarQ._raw(_ONE_POLY, _ONE_POLY)


def scalar_arith(a: ScalarQ, b: ScalarQ, op: str) -> ScalarQ:
    """Dispatch ``op`` in {add, sub, mul, div}; division by zero raises."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


# ----------------------------------------------------------------- q-combinatorics


def poch_int(c: int, k: int) -> ScalarQ:
    """(q**c; q)_k = prod_{t<k} (1 - q**(c+t))."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _poch_int(c, k)


@lru_cache(maxsize=None)
def _poch_int(c: int, k: int) -> ScalarQ:
    if c >= 0:
        return ScalarQ._raw(_poch_poly(c, k), _ONE_POLY)
    # factors with negative exponent: 1 - q**-m = -(1 - q**m) / q**m
    num = _ONE_POLY
    sign = 1
    qdrop = 0
    for t in range(k):
        e = c + t
        if e == 0:
            return ZERO
        if e > 0:
            num = num * _one_minus(e)
        else:
            num = num * _one_minus(-e)
            sign = -sign
            qdrop += -e
    return ScalarQ(num * sign, QPoly.monomial(qdrop))


@lru_cache(maxsize=None)
def _one_minus(e: int) -> QPoly:
    if e == 0:
        return QPoly._raw(())
    return QPoly._raw((1,) + (0,) * (e - 1) + (-1,))


@lru_cache(maxsize=None)
def _poch_poly(c: int, k: int) -> QPoly:
    if k == 0:
        return _ONE_POLY
    return _poch_poly(c, k - 1) * _one_minus(c + k - 1)


def q_binomial(n: int, k: int) -> QPoly:
    """Gaussian binomial [n choose k]_q; 0 outside 0 <= k <= n.

    Negative n with k > 0 is rejected rather than extended.
    """
    if k < 0:
        return QPoly._raw(())
    if n < 0:
        if k == 0:
            return _ONE_POLY
        raise ValueError(f"q_binomial({n}, {k}) is not a polynomial")
    if k > n:
        return QPoly._raw(())
    return _q_binomial(n, min(k, n - k))


@lru_cache(maxsize=None)
def _q_binomial(n: int, k: int) -> QPoly:
    if k == 0:
        return _ONE_POLY
    # Pascal: [n,k] = [n-1,k-1] + q^k [n-1,k]
    left = _q_binomial(n - 1, min(k - 1, n - k)) if k - 1 <= n - 1 else QPoly._raw(())
    right = _q_binomial(n - 1, min(k, n - 1 - k)) if k <= n - 1 else QPoly._raw(())
    return left + right.shift(k)


def q_multinomial(n: int, parts: Sequence[int]) -> QPoly:
    """(q)_n / prod (q)_{t_i}; missing mass n - sum(parts) is an implicit part."""
    parts = [int(t) for t in parts]
    if any(t < 0 for t in parts):
        raise ValueError("parts must be nonnegative")
    total = sum(parts)
    if total > n:
        raise ValueError(f"parts sum {total} exceeds n={n}")
    out = _ONE_POLY
    rest = n
    for t in parts:
        out = out * q_binomial(rest, t)
        rest -= t
    return out


# ----------------------------------------------------------------- text grammar


def _render(c: Sequence[int]) -> str:
    if not c:
        return "0"
    pieces = []
    for k, x in enumerate(c):
        if not x:
            continue
        mag = abs(x)
        if k == 0:
            body = str(mag)
        else:
            qpart = "q" if k == 1 else f"q^{k}"
            body = qpart if mag == 1 else f"{mag}*{qpart}"
        if not pieces:
            pieces.append(("-" if x < 0 else "") + body)
        else:
            pieces.append((" - " if x < 0 else " + ") + body)
    return "".join(pieces)


_TERM = re.compile(r"^(?:(\d+)(?:\*q(?:\^(\d+))?)?|q(?:\^(\d+))?)$")


def parse_qpoly(text: str) -> QPoly:
    """Parse the canonical rendering, e.g. ``"1 + q - 2*q^3"``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, int] = {}
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        m = _TERM.match(body)
        if not m:
            raise ValueError(f"bad term {body!r} in {text!r}")
        if m.group(1) is not None:
            c = int(m.group(1))
            if "q" in body:
                k = int(m.group(2)) if m.group(2) else 1
            else:
                k = 0
        else:
            c = 1
            k = int(m.group(3)) if m.group(3) else 1
        coeffs[k] = coeffs.get(k, 0) + (c if sign == "+" else -c)
    if "".join(sign + body for sign, body in re.findall(r"([+-])([^+-]+)", s)) != s:
        raise ValueError(f"cannot parse {text!r}")
    top = max(coeffs) if coeffs else -1
    return QPoly(coeffs.get(k, 0) for k in range(top + 1))


def parse_scalar(text: str) -> ScalarQ:
    """Parse ``"num"`` or ``"(num) / (den)"``."""
    s = text.strip()
    m = re.fullmatch(r"\((.*)\)\s*/\s*\((.*)\)", s)
    if m:
        return ScalarQ(parse_qpoly(m.group(1)), parse_qpoly(m.group(2)))
    return ScalarQ(parse_qpoly(s))
