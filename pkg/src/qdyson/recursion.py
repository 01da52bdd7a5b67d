"""Subset-indexed recursions for D_{v,lambda}(a; n, n0) and the lambda = v+ evaluator."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .ctengine import DysonInstance, d_brute, two_part_ct
from .identities import kadell_rhs, l_weight, nonempty_subsets, qdyson_rhs
from .qpoly import ScalarQ, q_multinomial
from .symfun import conjugate_sort

__all__ = [
    "PreconditionError",
    "RecursionAnalysis",
    "TraceStep",
    "EvalTrace",
    "analyze",
    "step_case1",
    "step_case2",
    "recursion_prefactor",
    "d_recursive",
    "cross_validate",
]

POLICIES = ("strict", "fallback")


class PreconditionError(ValueError):
    """A recursion step was requested outside its hypotheses."""


@dataclass(frozen=True)
class RecursionAnalysis:
    r: int
    S1: tuple[int, ...]
    S2: tuple[int, ...]
    a_tilde: tuple[int, ...] | None
    alpha: tuple[int, ...]
    max1: int | None
    max2: int | None

    @property
    def s1(self) -> int:
        return len(self.S1)

    @property
    def s2(self) -> int:
        return len(self.S2)


def analyze(v: Sequence[int], n: int, n0: int, a: Sequence[int] | None = None) -> RecursionAnalysis:
    """r, S1, S2 (1-based), the shifted sequence a~ (if a is given) and alpha.

    max1/max2 are the block maxima max{v_i - n + n0 : i <= n0} and
    max{v_i : i > n0}, None for an empty block.
    """
    v = tuple(v)
    if n < 1 or len(v) != n:
        raise ValueError("need n >= 1 and len(v) == n")
    if not 0 <= n0 <= n:
        raise ValueError(f"n0={n0} outside 0..{n}")
    first = [v[i] - n + n0 for i in range(n0)]
    second = list(v[n0:])
    max1 = max(first) if first else None
    max2 = max(second) if second else None
    r = max(x for x in (max1, max2) if x is not None)
    S1 = tuple(i + 1 for i in range(n0) if first[i] == r)
    S2 = tuple(n0 + k + 1 for k, x in enumerate(second) if x == r)
    a_tilde = None
    if a is not None:
        a_tilde = tuple(x - 1 if i < n0 else x for i, x in enumerate(a))
    alpha = (0,) * n0 + (1,) * (n - n0)
    return RecursionAnalysis(r, S1, S2, a_tilde, alpha, max1, max2)


def _drop(seq: Sequence[int], S: Sequence[int]) -> tuple[int, ...]:
    S = set(S)
    return tuple(x for i, x in enumerate(seq, start=1) if i not in S)


@lru_cache(maxsize=None)
def recursion_prefactor(a_tilde: tuple[int, ...], S: tuple[int, ...], r: int, m: int) -> ScalarQ:
    """Multinomial ratio times the signed subset sum over nonempty J in S, with L_{m,S,J}."""
    if r < 1:
        raise PreconditionError("recursion needs r >= 1")
    total = sum(a_tilde)
    rest = _drop(a_tilde, S)
    ratio = ScalarQ(q_multinomial(total + r - 1, a_tilde)) / ScalarQ(q_multinomial(sum(rest) + r - 1, rest))
    acc = ScalarQ(0)
    for J in nonempty_subsets(S):
        aJ = sum(a_tilde[j - 1] for j in J)
        term = (1 - ScalarQ.q_power(aJ)) / (1 - ScalarQ.q_power(total - aJ + r))
        term = term.mul_qpow(l_weight(m, S, J, a_tilde))
        acc = acc - term if (len(S) - len(J)) % 2 else acc + term
    return ratio * acc


def _check_head(lam: Sequence[int], s: int, r: int) -> None:
    if len(lam) < s or any(p != r for p in lam[:s]):
        raise PreconditionError(f"lambda head mismatch: need {s} parts equal to r={r}, got {tuple(lam)}")


def step_case1(inst: DysonInstance, analysis: RecursionAnalysis | None = None) -> tuple[ScalarQ, DysonInstance]:
    """Remove the maximal first-block indices S1; returns (prefactor, sub-instance)."""
    an = analysis or analyze(inst.v, inst.n, inst.n0, inst.a)
    n, n0 = inst.n, inst.n0
    if not an.S1:
        raise PreconditionError("case 1 needs S1 nonempty")
    if an.r < 1:
        raise PreconditionError("r = 0 is outside the recursion's range")
    if an.max2 is not None and an.max1 < an.max2 + an.s1:
        raise PreconditionError("block gap: max1 < max2 + s1")
    _check_head(inst.lam, an.s1, an.r)
    # with the gap condition in force no second-block index can attain r
    assert not an.S2, "S2 must be empty in case 1"
    a_tilde = an.a_tilde or analyze(inst.v, n, n0, inst.a).a_tilde
    pref = recursion_prefactor(a_tilde, an.S1, an.r, n0)
    if (an.s1 * (n - n0)) % 2:
        pref = -pref
    shifted = tuple(x + an.s1 * al for x, al in zip(inst.v, an.alpha))
    sub = DysonInstance(_drop(inst.a, an.S1), n0 - an.s1, _drop(shifted, an.S1), inst.lam[an.s1:])
    return pref, sub


def step_case2(inst: DysonInstance, analysis: RecursionAnalysis | None = None) -> tuple[ScalarQ, DysonInstance]:
    """Remove the maximal second-block indices S2; returns (prefactor, sub-instance)."""
    an = analysis or analyze(inst.v, inst.n, inst.n0, inst.a)
    n, n0 = inst.n, inst.n0
    if not an.S2:
        raise PreconditionError("case 2 needs S2 nonempty")
    if an.r < 1:
        raise PreconditionError("r = 0 is outside the recursion's range")
    if an.max1 is not None and an.max2 < an.max1 + an.s2:
        raise PreconditionError("block gap: max2 < max1 + s2")
    _check_head(inst.lam, an.s2, an.r)
    assert not an.S1, "S1 must be empty in case 2"
    a_tilde = an.a_tilde or analyze(inst.v, n, n0, inst.a).a_tilde
    pref = recursion_prefactor(a_tilde, an.S2, an.r, n)
    sub = DysonInstance(_drop(inst.a, an.S2), n0, _drop(inst.v, an.S2), inst.lam[an.s2:])
    return pref, sub


@dataclass(frozen=True)
class TraceStep:
    case: str  # "1", "2", "base", "zero" or "fallback"
    removed: tuple[int, ...]
    prefactor: ScalarQ
    remaining: DysonInstance

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "removed": list(self.removed),
            "prefactor": str(self.prefactor),
            "remaining": self.remaining.to_json(),
        }


@dataclass(frozen=True)
class EvalTrace:
    steps: tuple[TraceStep, ...] = field(default=())

    def product(self) -> ScalarQ:
        out = ScalarQ(1)
        for st in self.steps:
            out = out * st.prefactor
        return out

    def to_json(self) -> list:
        return [st.to_json() for st in self.steps]

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _base_value(inst: DysonInstance) -> ScalarQ:
    if inst.n0 == 0:
        return ScalarQ(qdyson_rhs(inst.a))
    return two_part_ct(inst.a, inst.n0)


def _corollary_step(inst: DysonInstance) -> tuple[str, tuple, ScalarQ, DysonInstance | None]:
    n, n0, v = inst.n, inst.n0, inst.v
    if n0 < n:
        if n0 and min(v[n0:]) < max(v[:n0]):
            return "zero", (), ScalarQ(0), None
        an = analyze(v, n, n0, inst.a)
        pref, sub = step_case2(inst, an)
        return "2", an.S2, pref, sub
    an = analyze(v, n, n0, inst.a)
    pref, sub = step_case1(inst, an)
    return "1", an.S1, pref, sub


@lru_cache(maxsize=None)
def _d_recursive(inst: DysonInstance, policy: str) -> tuple[ScalarQ, EvalTrace]:
    steps: list[TraceStep] = []
    value = ScalarQ(1)
    cur = inst
    while True:
        if not any(cur.v):
            base = _base_value(cur)
            steps.append(TraceStep("base", (), base, cur))
            return value * base, EvalTrace(tuple(steps))
        try:
            case, removed, pref, sub = _corollary_step(cur)
        except PreconditionError:
            if policy == "strict":
                raise
            base = d_brute(cur)
            steps.append(TraceStep("fallback", (), base, cur))
            return value * base, EvalTrace(tuple(steps))
        steps.append(TraceStep(case, tuple(removed), pref, cur))
        if sub is None:
            return ScalarQ(0), EvalTrace(tuple(steps))
        value = value * pref
        cur = sub


def d_recursive(inst: DysonInstance, policy: str = "fallback") -> tuple[ScalarQ, EvalTrace]:
    """Evaluate D_{v,v+} by iterating the lambda = v+ recursion down to v = 0.

    Each trace step stores the instance it was applied to; the last step is
    the base value (or the brute-force fallback, or a zero verdict).
    """
    if policy not in POLICIES:
        raise ValueError(f"policy must be one of {POLICIES}")
    problem = None
    if inst.lam != conjugate_sort([max(x, 0) for x in inst.v]) or any(x < 0 for x in inst.v):
        problem = "evaluator needs a weak composition v and lambda = v+"
    if problem:
        if policy == "strict":
            raise PreconditionError(problem)
        base = d_brute(inst)
        return base, EvalTrace((TraceStep("fallback", (), base, inst),))
    return _d_recursive(inst, policy)


def _spike(v: Sequence[int]) -> tuple[int, int] | None:
    nz = [(i, x) for i, x in enumerate(v, start=1) if x]
    if len(nz) == 1 and nz[0][1] > 0:
        return nz[0]
    return None


def cross_validate(inst: DysonInstance) -> dict:
    """Brute force against the recursion (and Kadell's formula for n0 = 0 spikes)."""
    values: dict[str, ScalarQ | None] = {"brute": d_brute(inst)}
    try:
        values["recursion"] = d_recursive(inst, "fallback")[0]
    except Exception as exc:  # reported, not raised
        values["recursion"] = None
        values["recursion_error"] = str(exc)
    spike = _spike(inst.v)
    if inst.n0 == 0 and spike and inst.lam == (spike[1],):
        values["kadell"] = kadell_rhs(inst.a, spike[0], spike[1])
    got = [x for k, x in values.items() if isinstance(x, ScalarQ)]
    agree = len(got) == len([k for k in values if k != "recursion_error"]) and all(x == got[0] for x in got)
    return {
        "instance": inst.to_json(),
        "status": "verified" if agree else "mismatch",
        "values": {k: (str(x) if isinstance(x, ScalarQ) else x) for k, x in values.items()},
    }
