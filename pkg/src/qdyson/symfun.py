"""Finite alphabets X^(a; n0) and symmetric functions evaluated on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Sequence

from .laurent import LaurentPoly, VarContext, xw_context
from .qpoly import ScalarQ

__all__ = [
    "Alphabet",
    "Partition",
    "build_alphabet",
    "complete_h",
    "h_lambda",
    "jacobi_trudi_expansion",
    "schur_jt",
    "schur_bialternant",
    "ssyt_schur",
    "partitions",
    "conjugate_sort",
]

Partition = tuple[int, ...]


def as_partition(parts: Sequence[int]) -> Partition:
    """Trim zeros and validate weak decrease."""
    lam = tuple(int(p) for p in parts if p != 0)
    if any(p < 0 for p in lam):
        raise ValueError(f"partition parts must be nonnegative: {parts}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError(f"partition must be weakly decreasing: {parts}")
    return lam


def conjugate_sort(v: Sequence[int]) -> Partition:
    """v+ : entries sorted decreasingly with zeros dropped (v must be a composition)."""
    if any(x < 0 for x in v):
        raise ValueError("v+ is a partition only for weak compositions")
    return tuple(sorted((x for x in v if x), reverse=True))


def partitions(total: int, max_part: int | None = None, max_len: int | None = None):
    """All partitions of ``total`` in reverse lexicographic order."""
    if total < 0:
        return
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in partitions(total - first, first, None if max_len is None else max_len - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class Alphabet:
    """Letters q**power * x_index (1-based index); ``n`` is the number of x variables."""

    letters: tuple[tuple[int, int], ...]
    n: int

    def __len__(self) -> int:
        return len(self.letters)

    def counts(self) -> tuple[int, ...]:
        """Number of letters attached to each x_i."""
        out = [0] * self.n
        for i, _ in self.letters:
            out[i - 1] += 1
        return tuple(out)

    def as_terms(self, ctx: VarContext | None = None) -> list[LaurentPoly]:
        ctx = ctx or xw_context(self.n)
        out = []
        for i, e in self.letters:
            mono = ctx.monomial(**{f"x{i}": 1})
            out.append(LaurentPoly.term(ctx, mono, ScalarQ.q_power(e)))
        return out


def build_alphabet(a: Sequence[int], n0: int) -> Alphabet:
    a = tuple(a)
    n = len(a)
    if not 0 <= n0 <= n:
        raise ValueError(f"n0={n0} outside 0..{n}")
    if any(x < 1 for x in a):
        raise ValueError(f"alphabet requires positive a, got {a}")
    letters = []
    for i, ai in enumerate(a, start=1):
        count = ai - 1 if i <= n0 else ai
        letters.extend((i, e) for e in range(count))
    return Alphabet(tuple(letters), n)


def _complete_from_terms(r: int, terms: Sequence[LaurentPoly], ctx: VarContext) -> LaurentPoly:
    # letter-by-letter: prod_letters 1/(1 - z*letter) truncated at z**r
    h = [LaurentPoly.constant(ctx, 1)] + [LaurentPoly(ctx, {}) for _ in range(r)]
    for letter in terms:
        for k in range(1, r + 1):
            h[k] = h[k] + letter * h[k - 1]
    return h[r]


def complete_h(r: int, alphabet: Alphabet, ctx: VarContext | None = None) -> LaurentPoly:
    """Complete homogeneous symmetric function h_r on the alphabet."""
    if r < 0:
        raise ValueError("h_r needs r >= 0")
    ctx = ctx or xw_context(alphabet.n)
    return _complete_from_terms(r, alphabet.as_terms(ctx), ctx)


def h_lambda(lam: Sequence[int], alphabet: Alphabet, ctx: VarContext | None = None) -> LaurentPoly:
    ctx = ctx or xw_context(alphabet.n)
    out = LaurentPoly.constant(ctx, 1)
    for r in lam:
        out = out * complete_h(r, alphabet, ctx)
    return out


@lru_cache(maxsize=None)
def jacobi_trudi_expansion(lam: Partition, size: int | None = None) -> dict[Partition, int]:
    """det(h_{lam_i - i + j}) expanded by cofactors into the h-basis.

    Returns {mu: c_mu} with s_lam = sum c_mu h_mu.  The matrix size defaults
    to max(len(lam), 1); any size >= len(lam) gives the same expansion.
    h_0 = 1 and h_m = 0 for m < 0.
    """
    lam = as_partition(lam)
    if size is None:
        size = max(len(lam), 1)
    if size < len(lam):
        raise ValueError("determinant size must be at least len(lambda)")
    rows = list(lam) + [0] * (size - len(lam))

    @lru_cache(maxsize=None)
    def minor(row: int, free: frozenset) -> tuple[tuple[Partition, int], ...]:
        # determinant of rows row..size-1 against the columns in ``free``
        if row == size:
            return (((), 1),)
        acc: dict[Partition, int] = {}
        cols = sorted(free)
        for pos, col in enumerate(cols):
            idx = rows[row] - row + col
            if idx < 0:
                continue
            # sign of the cofactor relative to the remaining column order
            sign = -1 if pos % 2 else 1
            for mu, c in minor(row + 1, free - {col}):
                key = tuple(sorted(mu + ((idx,) if idx else ()), reverse=True))
                acc[key] = acc.get(key, 0) + sign * c
        return tuple((k, v) for k, v in acc.items() if v)

    return dict(minor(0, frozenset(range(size))))


def schur_jt(lam: Sequence[int], alphabet: Alphabet, ctx: VarContext | None = None) -> LaurentPoly:
    """Schur function via the Jacobi-Trudi determinant in complete functions."""
    ctx = ctx or xw_context(alphabet.n)
    out = LaurentPoly(ctx, {})
    for mu, c in sorted(jacobi_trudi_expansion(as_partition(lam)).items()):
        out = out + h_lambda(mu, alphabet, ctx).scale(c)
    return out


def _ssyt(lam: Partition, nletters: int):
    """Semistandard tableaux of shape lam with entries 0..nletters-1, as flat row-major lists."""
    cells = [(i, j) for i, row in enumerate(lam) for j in range(row)]
    filling: dict[tuple[int, int], int] = {}

    def rec(k: int):
        if k == len(cells):
            yield [filling[c] for c in cells]
            return
        i, j = cells[k]
        lo = 0
        if j > 0:
            lo = max(lo, filling[(i, j - 1)])
        if i > 0:
            lo = max(lo, filling[(i - 1, j)] + 1)
        for val in range(lo, nletters):
            filling[(i, j)] = val
            yield from rec(k + 1)
        filling.pop((i, j), None)

    yield from rec(0)


def ssyt_schur(lam: Sequence[int], letters: Sequence[LaurentPoly]) -> LaurentPoly:
    """Combinatorial Schur function: sum over semistandard tableaux."""
    lam = as_partition(lam)
    ctx = letters[0].ctx
    out = LaurentPoly(ctx, {})
    for tab in _ssyt(lam, len(letters)):
        term = LaurentPoly.constant(ctx, 1)
        for val in tab:
            term = term * letters[val]
        out = out + term
    return out


def _det(matrix: list[list[LaurentPoly]], ctx: VarContext) -> LaurentPoly:
    size = len(matrix)
    out = LaurentPoly(ctx, {})
    for perm in permutations(range(size)):
        inversions = sum(1 for x in range(size) for y in range(x + 1, size) if perm[x] > perm[y])
        term = LaurentPoly.constant(ctx, -1 if inversions % 2 else 1)
        for row, col in enumerate(perm):
            term = term * matrix[row][col]
        out = out + term
    return out


def schur_bialternant(lam: Sequence[int], letters: Sequence[LaurentPoly]) -> LaurentPoly:
    """Schur function as alternant / Vandermonde over distinct single-term letters.

    The quotient is obtained as the tableau sum and accepted only after the
    multiplication check ``alternant == quotient * vandermonde``.
    """
    lam = as_partition(lam)
    letters = list(letters)
    size = len(letters)
    if size < len(lam):
        raise ValueError("need at least len(lam) letters")
    if any(len(t) != 1 for t in letters):
        raise ValueError("letters must be single-term Laurent polynomials")
    if len({tuple(sorted((m, c) for m, c in t.terms.items())) for t in letters}) != size:
        raise ValueError("repeated letters make the Vandermonde vanish")
    ctx = letters[0].ctx
    parts = list(lam) + [0] * (size - len(lam))
    alternant = _det([[letters[i] ** (parts[j] + size - 1 - j) for j in range(size)] for i in range(size)], ctx)
    vandermonde = LaurentPoly.constant(ctx, 1)
    for i in range(size):
        for j in range(i + 1, size):
            vandermonde = vandermonde * (letters[i] - letters[j])
    quotient = ssyt_schur(lam, letters)
    if quotient * vandermonde != alternant:
        raise ArithmeticError("alternant is not divisible as expected")
    return quotient
