"""The eight acceptance grids, shared by the CLI ``suite`` command and the test suite.

Every check is an exact equality of ScalarQ/LaurentPoly values.  Grids are
split into independent chunks (one per (a, n0) or similar) so they can be
spread over worker processes; results are merged in chunk order, so output
does not depend on the number of workers.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .ctengine import DysonInstance, d_brute, d_brute_schur, two_part_ct
from .identities import (
    DegenerateError,
    check_e_sum,
    check_transsum,
    dominance_leq,
    kadell_rhs,
    max_subset_scores,
    qdyson_rhs,
)
from .laurent import LaurentPoly
from .qpoly import ScalarQ
from .recursion import PreconditionError, analyze, d_recursive, step_case1, step_case2
from .splitting import (
    LEMMA_RANGES,
    coefficient_family,
    degree_claims,
    inductive_d,
    residue_check,
    verify_poch_lemma,
    verify_split,
)
from .symfun import build_alphabet, conjugate_sort, partitions, schur_bialternant, schur_jt, ssyt_schur

__all__ = ["AcceptanceConfig", "CriterionResult", "CRITERIA", "run_criterion", "run_all", "default_jobs"]

MAX_FAILURES = 20


def default_jobs() -> int:
    env = os.environ.get("QDYSON_JOBS")
    if env:
        return max(1, int(env))
    return 1


@dataclass(frozen=True)
class AcceptanceConfig:
    """Grid bounds; the defaults are the published acceptance grids."""

    qdyson_max_n: int = 4
    qdyson_max_a: int = 3
    kadell_max_n: int = 3
    kadell_max_a: int = 3
    kadell_max_r: int = 3
    vanish_max_n: int = 4
    vanish_max_a: int = 2
    vanish_v_range: tuple[int, int] = (-1, 3)
    recur_max_n: int = 4
    recur_max_a: int = 3
    recur_v_max: int = 3
    split_max_a: int = 3
    split_n3_max_a: int = 2
    split_max_s: int = 2
    esum_max_n: int = 8
    transsum_max_m: int = 4
    transsum_max_a: int = 2
    transsum_r: tuple[int, ...] = (1, 2, 3)
    lemma_max: int = 3
    schur_max_len: int = 3
    schur_max_size: int = 4
    schur_max_letters: int = 4
    jobs: int = 1


@dataclass
class CriterionResult:
    number: int
    title: str
    checked: int = 0
    skipped: int = 0
    failures: list[str] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    elapsed_s: float = 0.0
    budget_s: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures and self.checked > 0

    @property
    def within_budget(self) -> bool:
        return self.elapsed_s <= self.budget_s

    def line(self) -> str:
        verdict = "PASS" if self.passed and self.within_budget else "FAIL"
        extra = " ".join(f"{k}={v}" for k, v in sorted(self.counts.items()))
        msg = f"[{verdict}] criterion {self.number}: {self.title}: checked={self.checked} skipped={self.skipped}"
        msg += f" failures={len(self.failures)} {extra} ({self.elapsed_s:.1f}s / budget {self.budget_s:.0f}s)"
        if not self.within_budget:
            msg += " over budget"
        return msg.replace("  ", " ")

    def to_json(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "checked": self.checked,
            "skipped": self.skipped,
            "counts": dict(self.counts),
            "failures": self.failures[:MAX_FAILURES],
            "elapsed_ms": int(self.elapsed_s * 1000),
            "budget_ms": int(self.budget_s * 1000),
        }


class _Tally:
    """Per-chunk accumulator; plain data so it pickles across processes."""

    def __init__(self):
        self.checked = 0
        self.skipped = 0
        self.failures: list[str] = []
        self.counts: dict[str, int] = {}

    def check(self, ok: bool, label) -> None:
        self.checked += 1
        if not ok and len(self.failures) < MAX_FAILURES:
            self.failures.append(str(label))

    def bump(self, key: str, k: int = 1) -> None:
        self.counts[key] = self.counts.get(key, 0) + k

    def merge_into(self, res: CriterionResult) -> None:
        res.checked += self.checked
        res.skipped += self.skipped
        room = MAX_FAILURES - len(res.failures)
        res.failures.extend(self.failures[:max(room, 0)])
        for k, v in self.counts.items():
            res.counts[k] = res.counts.get(k, 0) + v


def _run_chunks(worker: Callable, chunks: Sequence, jobs: int) -> list[_Tally]:
    if jobs <= 1 or len(chunks) < 2:
        return [worker(c) for c in chunks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, chunks, chunksize=max(1, len(chunks) // (4 * jobs))))


def _a_grid(n: int, max_a: int) -> Iterable[tuple[int, ...]]:
    return itertools.product(range(1, max_a + 1), repeat=n)


def _chunks_a_n0(max_n: int, max_a: int, extra=()) -> list[tuple]:
    return [(a, n0) + tuple(extra) for n in range(1, max_n + 1) for a in _a_grid(n, max_a) for n0 in range(n + 1)]


# ------------------------------------------------------------------ criterion 1


def _c1_chunk(a: tuple[int, ...]) -> _Tally:
    t = _Tally()
    t.check(two_part_ct(a, 0) == ScalarQ(qdyson_rhs(a)), f"a={a}")
    return t


def _c1_chunks(cfg: AcceptanceConfig):
    return [a for n in range(1, cfg.qdyson_max_n + 1) for a in _a_grid(n, cfg.qdyson_max_a)]


# ------------------------------------------------------------------ criterion 2


def _weak_compositions(total: int, n: int):
    for v in itertools.product(range(total + 1), repeat=n):
        if sum(v) == total:
            yield v


def _c2_chunk(a: tuple[int, ...], max_r: int) -> _Tally:
    t = _Tally()
    n = len(a)
    for r in range(1, max_r + 1):
        for v in _weak_compositions(r, n):
            inst = DysonInstance(a, 0, v, (r,))
            spike = [i for i, x in enumerate(v, start=1) if x]
            if len(spike) == 1:
                t.bump("spike")
                t.check(d_brute(inst) == kadell_rhs(a, spike[0], r), inst)
            else:
                t.bump("zero_branch")
                t.check(d_brute(inst).is_zero(), inst)
    return t


def _c2_worker(args):
    return _c2_chunk(*args)


def _c2_chunks(cfg: AcceptanceConfig):
    return [(a, cfg.kadell_max_r) for n in range(1, cfg.kadell_max_n + 1) for a in _a_grid(n, cfg.kadell_max_a)]


# ------------------------------------------------------------------ criterion 3


def _c3_chunk(a: tuple[int, ...], n0: int, lo: int, hi: int) -> _Tally:
    t = _Tally()
    n = len(a)
    for v in itertools.product(range(lo, hi + 1), repeat=n):
        total = sum(v)
        if total < 0:
            continue
        scores = max_subset_scores(v, n, n0)
        v_sorted = tuple(sorted(v, reverse=True))
        for lam in partitions(total):
            prefix = list(itertools.accumulate(lam))
            pre = [prefix[min(j, len(lam)) - 1] if lam else 0 for j in range(1, n)]
            hit = any(m < p for m, p in zip(scores, pre))
            dom = not dominance_leq(lam, v_sorted)
            if dom and not hit:
                # the corollary is derived from the theorem; this must never happen
                t.check(False, f"dominance without predicate: v={v} lam={lam} n0={n0}")
                continue
            if not hit:
                continue
            t.bump("predicate")
            if dom:
                t.bump("dominance")
            inst = DysonInstance(a, n0, v, lam)
            t.check(d_brute(inst).is_zero(), f"h: {inst}")
            t.check(d_brute_schur(inst).is_zero(), f"schur: {inst}")
    return t


def _c3_worker(args):
    return _c3_chunk(*args)


def _c3_chunks(cfg: AcceptanceConfig):
    lo, hi = cfg.vanish_v_range
    return _chunks_a_n0(cfg.vanish_max_n, cfg.vanish_max_a, (lo, hi))


# ------------------------------------------------------------------ criterion 4 and 8 grid


def _vplus_instances(a: tuple[int, ...], n0: int, vmax: int):
    for v in itertools.product(range(vmax + 1), repeat=len(a)):
        yield DysonInstance(a, n0, v, conjugate_sort(v))


def _c4_chunk(a: tuple[int, ...], n0: int, vmax: int) -> _Tally:
    t = _Tally()
    n = len(a)
    for inst in _vplus_instances(a, n0, vmax):
        target = d_brute(inst)
        an = analyze(inst.v, n, n0, a)
        for name, step in (("case1", step_case1), ("case2", step_case2)):
            try:
                pref, sub = step(inst, an)
            except PreconditionError:
                continue
            t.bump(name)
            t.check(pref * d_brute(sub) == target, f"{name}: {inst}")
        value, trace = d_recursive(inst, "fallback")
        if any(st.case == "fallback" for st in trace.steps):
            t.bump("fallback")
        t.check(value == target, f"d_recursive: {inst}")
        if 0 < n0 < n and min(inst.v[n0:]) < max(inst.v[:n0]):
            t.bump("corollary_zero")
            t.check(target.is_zero(), f"corollary zero: {inst}")
    return t


def _c4_worker(args):
    return _c4_chunk(*args)


def _c4_chunks(cfg: AcceptanceConfig):
    return _chunks_a_n0(cfg.recur_max_n, cfg.recur_max_a, (cfg.recur_v_max,))


# ------------------------------------------------------------------ criterion 5


def _c5_chunk(a: tuple[int, ...], n0: int, s: int) -> _Tally:
    t = _Tally()
    for i, j in coefficient_family(a, n0):
        t.bump("residue")
        t.check(residue_check(a, n0, i, j, s), f"residue a={a} n0={n0} i={i} j={j} s={s}")
    try:
        ok = verify_split(a, n0, s)
        t.bump("split")
        t.check(ok, f"split a={a} n0={n0} s={s}")
    except DegenerateError:
        t.skipped += 1
    for i, j, low, bound in degree_claims(a, n0, s):
        t.bump("degree")
        t.check(low >= bound, f"degree a={a} n0={n0} i={i} j={j} s={s}: {low} < {bound}")
    return t


def _c5_worker(args):
    return _c5_chunk(*args)


def _c5_chunks(cfg: AcceptanceConfig):
    out = []
    for s in range(1, cfg.split_max_s + 1):
        for n, max_a in ((1, cfg.split_max_a), (2, cfg.split_max_a), (3, cfg.split_n3_max_a)):
            for a in _a_grid(n, max_a):
                for n0 in range(n + 1):
                    out.append((a, n0, s))
    return out


# ------------------------------------------------------------------ criterion 6


def _c6_one(t: _Tally, inst: DysonInstance, tag: str) -> None:
    lam1 = inst.lam[0] if inst.lam else 0
    if lam1 != analyze(inst.v, inst.n, inst.n0, inst.a).r:
        return
    try:
        value = inductive_d(inst)
    except DegenerateError:
        t.skipped += 1
        return
    t.bump(tag)
    t.check(value == d_brute(inst), f"{tag}: {inst}")


def _c6_chunk(a, n0, vmax, lo, hi, general: bool) -> _Tally:
    t = _Tally()
    if len(a) < 2:
        return t
    if general:
        for v in itertools.product(range(lo, hi + 1), repeat=len(a)):
            if sum(v) < 0:
                continue
            for lam in partitions(sum(v)):
                _c6_one(t, DysonInstance(a, n0, v, lam), "vanishing_grid")
    else:
        for inst in _vplus_instances(a, n0, vmax):
            _c6_one(t, inst, "vplus_grid")
    return t


def _c6_worker(args):
    return _c6_chunk(*args)


def _c6_chunks(cfg: AcceptanceConfig):
    lo, hi = cfg.vanish_v_range
    out = [c + (lo, hi, False) for c in _chunks_a_n0(cfg.recur_max_n, cfg.recur_max_a, (cfg.recur_v_max,))]
    out += [c + (0, lo, hi, True) for c in _chunks_a_n0(cfg.vanish_max_n, cfg.vanish_max_a)]
    return out


# ------------------------------------------------------------------ criterion 7


def _c7_chunk(kind: str, cfg: AcceptanceConfig) -> _Tally:
    t = _Tally()
    if kind == "e_sum":
        for n in range(cfg.esum_max_n + 1):
            for k in range(n + 1):
                t.check(check_e_sum(n, k), f"e_sum n={n} t={k}")
    elif kind == "transsum":
        for m in range(2, cfg.transsum_max_m + 1):
            for size in (2, 3):
                for I in itertools.combinations(range(1, m + 1), size):
                    for a in _a_grid(m, cfg.transsum_max_a):
                        for r in cfg.transsum_r:
                            try:
                                ok = check_transsum(m, I, a, r)
                            except DegenerateError:
                                t.skipped += 1
                                continue
                            t.check(ok, f"transsum m={m} I={I} a={a} r={r}")
    else:
        for which, (lo, hi) in sorted(LEMMA_RANGES.items()):
            for i in range(cfg.lemma_max + 1):
                for j in range(cfg.lemma_max + 1):
                    for k in range(lo, j + hi + 1):
                        t.check(verify_poch_lemma(i, j, k, which), f"{which} i={i} j={j} t={k}")
    t.bump(kind, t.checked)
    return t


def _c7_worker(args):
    return _c7_chunk(*args)


def _c7_chunks(cfg: AcceptanceConfig):
    return [(kind, cfg) for kind in ("e_sum", "transsum", "poch_lemma")]


# ------------------------------------------------------------------ criterion 8


def _c8_grid_chunk(a, n0, vmax) -> _Tally:
    t = _Tally()
    for inst in _vplus_instances(a, n0, vmax):
        t.check(d_brute_schur(inst) == d_brute(inst), f"schur vs h: {inst}")
    t.bump("vplus_grid", t.checked)
    return t


def _schur_alphabets(max_letters: int):
    """Alphabets X^(a; n0) with at most ``max_letters`` letters, deduplicated by shape."""
    seen = set()
    for n in range(1, max_letters + 1):
        for a in _a_grid(n, max_letters):
            for n0 in range(n + 1):
                if any(x < 2 for x in a[:n0]):
                    continue  # keep every x_i present in the alphabet
                al = build_alphabet(a, n0)
                if 1 <= len(al) <= max_letters and al not in seen:
                    seen.add(al)
                    yield al


def _c8_jt_chunk(max_len: int, max_size: int, max_letters: int) -> _Tally:
    t = _Tally()
    lams = [lam for size in range(max_size + 1) for lam in partitions(size, max_len=max_len)]
    for al in _schur_alphabets(max_letters):
        letters = al.as_terms()
        for lam in lams:
            jt = schur_jt(lam, al)
            if len(lam) > len(letters):
                # too few letters: s_lambda vanishes, and so must the determinant
                t.bump("short_alphabet")
                t.check(jt.is_zero() and ssyt_schur(lam, letters).is_zero(), f"short alphabet {al} lam={lam}")
                continue
            t.bump("bialternant")
            t.check(jt == schur_bialternant(lam, letters), f"jt vs bialternant {al} lam={lam}")
    return t


def _c8_worker(args):
    if args[0] == "jt":
        return _c8_jt_chunk(*args[1:])
    return _c8_grid_chunk(*args[1:])


def _c8_chunks(cfg: AcceptanceConfig):
    out = [("jt", cfg.schur_max_len, cfg.schur_max_size, cfg.schur_max_letters)]
    out += [("grid",) + c for c in _chunks_a_n0(cfg.recur_max_n, cfg.recur_max_a, (cfg.recur_v_max,))]
    return out


# ------------------------------------------------------------------ registry


@dataclass(frozen=True)
class _Spec:
    title: str
    budget_s: float
    chunks: Callable[[AcceptanceConfig], list]
    worker: Callable


CRITERIA: dict[int, _Spec] = {
    1: _Spec("q-Dyson constant term", 120, _c1_chunks, _c1_chunk),
    2: _Spec("Kadell spike formula and zero branch", 120, _c2_chunks, _c2_worker),
    3: _Spec("vanishing predicate and dominance corollary (h and Schur)", 300, _c3_chunks, _c3_worker),
    4: _Spec("recursion steps, recursive evaluator, corollary zeros", 300, _c4_chunks, _c4_worker),
    5: _Spec("partial fractions: residues, full split, degree claims", 300, _c5_chunks, _c5_worker),
    6: _Spec("inductive formula", 120, _c6_chunks, _c6_worker),
    7: _Spec("auxiliary identities (e-sum, transsum, Pochhammer lemma)", 60, _c7_chunks, _c7_worker),
    8: _Spec("Schur vs complete at lambda = v+, Jacobi-Trudi vs bialternant", 120, _c8_chunks, _c8_worker),
}


def run_criterion(number: int, cfg: AcceptanceConfig | None = None) -> CriterionResult:
    cfg = cfg or AcceptanceConfig()
    crit = CRITERIA[number]
    res = CriterionResult(number, crit.title, budget_s=crit.budget_s)
    start = time.perf_counter()
    for tally in _run_chunks(crit.worker, crit.chunks(cfg), cfg.jobs):
        tally.merge_into(res)
    res.elapsed_s = time.perf_counter() - start
    return res


def run_all(cfg: AcceptanceConfig | None = None, only: Iterable[int] | None = None) -> list[CriterionResult]:
    cfg = cfg or AcceptanceConfig()
    return [run_criterion(k, cfg) for k in sorted(only or CRITERIA)]
