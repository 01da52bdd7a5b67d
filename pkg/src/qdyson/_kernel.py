"""Packed integer kernel for the brute-force constant-term oracle.

Two Kronecker substitutions turn a Laurent polynomial in x_1..x_n with
coefficients in Z[q] into a plain ``dict[int, int]``:

* the exponent vector e is encoded as ``sum((e_i + OFF) << (EBITS * i))``, so
  multiplying monomials is integer addition of keys (minus a fixed bias);
* a q-polynomial coefficient is evaluated at ``q = 2**W``.  This is a ring
  homomorphism, so only the final coefficient has to be unpacked, and that
  is exact as long as its q-coefficients are below ``2**(W-1)``.

All q-exponents appearing here are nonnegative.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Sequence

from .qpoly import pack, q_binomial, unpack

EBITS = 16
OFF = 1 << (EBITS - 1)

Packed = dict[int, int]


def bias(n: int) -> int:
    return sum(OFF << (EBITS * i) for i in range(n))


def encode(e: Sequence[int]) -> int:
    key = 0
    for i, x in enumerate(e):
        if not -OFF <= x < OFF:
            raise OverflowError(f"exponent {x} outside packed range")
        key += (x + OFF) << (EBITS * i)
    return key


def decode(key: int, n: int) -> tuple[int, ...]:
    mask = (1 << EBITS) - 1
    return tuple(((key >> (EBITS * i)) & mask) - OFF for i in range(n))


def delta(e: Sequence[int]) -> int:
    """Key offset that adds the exponent vector ``e`` to an encoded monomial."""
    return sum(x << (EBITS * i) for i, x in enumerate(e))


def mul_linear(p: Packed, qexp: int, shift: int, width: int) -> Packed:
    """p * (1 - q**qexp * x**e) where ``shift = delta(e)``."""
    out = dict(p)
    s = qexp * width
    for k, c in p.items():
        kk = k + shift
        v = out.get(kk, 0) - (c << s)
        if v:
            out[kk] = v
        else:
            out.pop(kk, None)
    return out


def mul(p: Packed, r: Packed, n: int) -> Packed:
    z = bias(n)
    if len(p) < len(r):
        p, r = r, p
    out: Packed = {}
    for kr, cr in r.items():
        d = kr - z
        for kp, cp in p.items():
            k = kp + d
            out[k] = out.get(k, 0) + cp * cr
    return {k: c for k, c in out.items() if c}


def add_into(acc: Packed, p: Packed, scale: int = 1) -> None:
    for k, c in p.items():
        v = acc.get(k, 0) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


def pair_exponents(a: Sequence[int], n0: int) -> list[tuple[int, int, int, int]]:
    """(i, j, b, c) for each i<j: factor (x_i/x_j)_b (q x_j/x_i)_c."""
    out = []
    n = len(a)
    for i in range(n):
        chi = 1 if i < n0 else 0
        for j in range(i + 1, n):
            out.append((i, j, a[i] - chi, a[j] - chi))
    return out


def dyson_factor_count(a: Sequence[int], n0: int) -> int:
    return sum(max(b, 0) + max(c, 0) for _, _, b, c in pair_exponents(a, n0))


@lru_cache(maxsize=4096)
def dyson(a: tuple[int, ...], n0: int, width: int) -> Packed:
    n = len(a)
    p: Packed = {encode((0,) * n): 1}
    for i, j, b, c in pair_exponents(a, n0):
        e = [0] * n
        e[i], e[j] = 1, -1
        d = delta(e)
        for t in range(b):
            p = mul_linear(p, t, d, width)
        for t in range(1, c + 1):
            p = mul_linear(p, t, -d, width)
    return p


def _compositions(r: int, n: int):
    if n == 1:
        yield (r,)
        return
    for k in range(r + 1):
        for rest in _compositions(r - k, n - 1):
            yield (k,) + rest


@lru_cache(maxsize=None)
def _packed_qbinom(top: int, k: int, width: int) -> int:
    return pack(q_binomial(top, k).c, width)


@lru_cache(maxsize=8192)
def complete(r: int, letters: tuple[int, ...], width: int) -> Packed:
    """h_r of the alphabet with ``letters[i]`` letters x_i, x_i q, ..., x_i q**(letters[i]-1).

    Uses h_m(1, q, ..., q**(b-1)) = [m+b-1 choose m]_q per variable.
    """
    n = len(letters)
    out: Packed = {}
    for m in _compositions(r, n):
        c = 1
        for mi, b in zip(m, letters):
            if b == 0:
                if mi:
                    c = 0
                    break
                continue
            c *= _packed_qbinom(mi + b - 1, mi, width)
        if c:
            out[encode(m)] = c
    return out


@lru_cache(maxsize=65536)
def complete_product(lam: tuple[int, ...], letters: tuple[int, ...], width: int) -> Packed:
    n = len(letters)
    if not lam:
        return {encode((0,) * n): 1}
    head = complete_product(lam[:-1], letters, width)
    return mul(head, complete(lam[-1], letters, width), n)


@lru_cache(maxsize=65536)
def h_combination(items: tuple[tuple[tuple[int, ...], int], ...], letters: tuple[int, ...], width: int) -> Packed:
    """sum c * h_mu over ``items`` = ((mu, c), ...), packed."""
    if len(items) == 1 and items[0][1] == 1:
        return complete_product(items[0][0], letters, width)
    out: Packed = {}
    for mu, c in items:
        add_into(out, complete_product(mu, letters, width), c)
    return out


def h_l1(lam: Sequence[int], nletters: int) -> int:
    """Sum of |coefficients| of h_lam on an alphabet of ``nletters`` letters."""
    out = 1
    for r in lam:
        out *= comb(nletters + r - 1, r) if nletters else (1 if r == 0 else 0)
    return out


def width_for(bound: int) -> int:
    """Smallest multiple of 64 whose signed digit range holds ``bound``."""
    bits = bound.bit_length() + 2
    return max(64, -(-bits // 64) * 64)


def extract(weights: Packed, p: Packed, v: Sequence[int]) -> int:
    """Packed coefficient of x**v in weights * p."""
    n = len(v)
    target = encode(v) + bias(n)
    total = 0
    get = p.get
    for k, c in weights.items():
        pc = get(target - k)
        if pc:
            total += c * pc
    return total


def unpack_poly(x: int, width: int) -> tuple[int, ...]:
    return unpack(x, width)
