"""Closed forms and standalone identities around the two-part q-Dyson constant term."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain, combinations
from typing import Iterable, Sequence

from .qpoly import QPoly, ScalarQ, poch_int, q_binomial, q_multinomial

__all__ = [
    "DegenerateError",
    "VanishingWitness",
    "qdyson_rhs",
    "kadell_rhs",
    "vanishing_predicate",
    "max_subset_scores",
    "dominance_leq",
    "l_weight",
    "check_e_sum",
    "e_sum_lhs",
    "check_transsum",
    "transsum_sides",
    "nonempty_subsets",
]


class DegenerateError(ArithmeticError):
    """An identity was evaluated where one of its denominators is identically zero."""


def nonempty_subsets(items: Iterable[int]):
    items = sorted(items)
    return chain.from_iterable(combinations(items, k) for k in range(1, len(items) + 1))


def qdyson_rhs(a: Sequence[int]) -> QPoly:
    """(q)_{|a|} / prod (q)_{a_i}."""
    if any(x < 0 for x in a):
        raise ValueError("a must be nonnegative")
    return q_multinomial(sum(a), a)


def kadell_rhs(a: Sequence[int], k: int, r: int) -> ScalarQ:
    """Nonzero branch of Kadell's formula for v = (0^{k-1}, r, 0^{n-k}), k 1-based."""
    a = tuple(a)
    n = len(a)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    if r < 1:
        raise ValueError("r must be positive")
    total = sum(a)
    ak = a[k - 1]
    out = ScalarQ.q_power(sum(a[k:])) * ScalarQ(1 - QPoly.monomial(ak))
    out = out * poch_int(total + 1, r - 1) / poch_int(total - ak + 1, r)
    for i in range(n):
        out = out * ScalarQ(q_binomial(sum(a[i:]), a[i]))
    return out


@dataclass(frozen=True)
class VanishingWitness:
    """Smallest j with the vanishing inequality holding for every j-subset.

    ``per_subset`` holds (I, p_I, sum of v over I, lambda prefix sum) for each
    j-subset I (1-based indices).
    """

    j: int
    per_subset: tuple[tuple[tuple[int, ...], int, int, int], ...]


def _score(v: Sequence[int], subset: Sequence[int], n: int, n0: int, j: int) -> tuple[int, int]:
    p = sum(1 for i in subset if i <= n0)
    return sum(v[i - 1] for i in subset), p


def vanishing_predicate(v: Sequence[int], lam: Sequence[int], n: int, n0: int) -> VanishingWitness | None:
    """Witness that D_{v,lambda}(a; n, n0) vanishes, or None if no j qualifies."""
    v = tuple(v)
    lam = tuple(x for x in lam if x)
    if len(v) != n:
        raise ValueError("len(v) must equal n")
    if sum(v) != sum(lam):
        raise ValueError("vanishing criterion assumes |v| = |lambda|")
    for j in range(1, n):
        prefix = sum(lam[:j])
        rows = []
        ok = True
        for subset in combinations(range(1, n + 1), j):
            sv, p = _score(v, subset, n, n0, j)
            if sv - p * (n - n0 - j + p) >= prefix:
                ok = False
                break
            rows.append((subset, p, sv, prefix))
        if ok:
            return VanishingWitness(j, tuple(rows))
    return None


def max_subset_scores(v: Sequence[int], n: int, n0: int) -> tuple[int, ...]:
    """M_j = max over j-subsets of sum(v_I) - p_I (n - n0 - j + p_I), j = 1..n-1.

    The predicate holds at j iff M_j < lambda_1 + ... + lambda_j; grids use
    this to test many partitions against one v.
    """
    out = []
    for j in range(1, n):
        best = None
        for subset in combinations(range(1, n + 1), j):
            sv, p = _score(v, subset, n, n0, j)
            s = sv - p * (n - n0 - j + p)
            best = s if best is None else max(best, s)
        out.append(best)
    return tuple(out)


def dominance_leq(mu: Sequence[int], nu: Sequence[int]) -> bool:
    """Prefix-sum order on zero-padded sequences."""
    size = max(len(mu), len(nu))
    a = list(mu) + [0] * (size - len(mu))
    b = list(nu) + [0] * (size - len(nu))
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa > sb:
            return False
    return True


def l_weight(m: int, I: Iterable[int], J: Iterable[int], a: Sequence[int]) -> int:
    """L_{m,I,J}(a) = sum of a_j over 1 <= i <= j <= m with i in I and j not in J."""
    I, J = set(I), set(J)
    if len(a) < m:
        raise ValueError("need len(a) >= m")
    for x in I | J:
        if not 1 <= x <= m:
            raise ValueError(f"index {x} outside 1..{m}")
    if not I:
        return 0
    lo = min(I)
    # each j >= min(I) not in J is counted once per i in I with i <= j
    return sum(a[j - 1] * sum(1 for i in I if i <= j) for j in range(lo, m + 1) if j not in J)


def e_sum_lhs(n: int, t: int) -> ScalarQ:
    total = ScalarQ(0)
    for k in range(t + 1):
        total = total + ScalarQ.q_power(k * (n - t)) / (poch_int(-k, k) * poch_int(1, t - k))
    return total


def check_e_sum(n: int, t: int) -> bool:
    """sum_k q^{k(n-t)} / ((q^{-k})_k (q)_{t-k}) == [n choose t]."""
    if not 0 <= t <= n:
        raise ValueError("need 0 <= t <= n")
    return e_sum_lhs(n, t) == ScalarQ(q_binomial(n, t))


def _one_minus_q(e: int) -> ScalarQ:
    if e == 0:
        raise DegenerateError("1 - q**0 in a denominator")
    return ScalarQ(1) - ScalarQ.q_power(e)


def _delete(a: Sequence[int], i: int) -> tuple[int, ...]:
    return tuple(x for k, x in enumerate(a, start=1) if k != i)


def _reindex(S: Iterable[int], i: int) -> tuple[int, ...]:
    return tuple(x - 1 if x > i else x for x in S)


def transsum_sides(m: int, I: Sequence[int], a: Sequence[int], r: int) -> tuple[ScalarQ, ScalarQ]:
    """Both sides of the subset-sum transformation used by the recursion proof.

    ``a`` may be longer than ``m``; |a| is the full sum.  L on a^(i) reindexes
    I minus {i} and J to positions in a^(i) and uses m - 1 as upper limit.
    """
    I = tuple(sorted(set(I)))
    a = tuple(a)
    if len(I) < 2:
        raise ValueError("I needs at least two elements")
    if len(a) < m or any(not 1 <= i <= m for i in I):
        raise ValueError("indices must lie in 1..m <= len(a)")
    total = sum(a)

    def a_of(S):
        return sum(a[s - 1] for s in S)

    left = ScalarQ(0)
    for i in I:
        rest = tuple(x for x in I if x != i)
        ai = a[i - 1]
        a_del = _delete(a, i)
        head = sum(a[i:m])
        for J in nonempty_subsets(rest):
            L = l_weight(m - 1, _reindex(rest, i), _reindex(J, i), a_del)
            aJ = a_of(J)
            num = ScalarQ(1) - ScalarQ.q_power(ai)
            num = num * (ScalarQ(1) - ScalarQ.q_power(aJ))
            den = _one_minus_q(total - ai + r) * _one_minus_q(total - ai - aJ + r)
            sign = -1 if len(J) % 2 == 0 else 1
            left = left + (num / den).mul_qpow(head + L) * sign
    right = ScalarQ(0)
    for J in nonempty_subsets(I):
        aJ = a_of(J)
        term = (ScalarQ(1) - ScalarQ.q_power(aJ)) / _one_minus_q(total - aJ + r)
        sign = -1 if len(J) % 2 else 1
        right = right + term.mul_qpow(l_weight(m, I, J, a)) * sign
    return left, right


def check_transsum(m: int, I: Sequence[int], a: Sequence[int], r: int) -> bool:
    """Raises :class:`DegenerateError` when r zeroes one of the denominators."""
    left, right = transsum_sides(m, I, a, r)
    return left == right
