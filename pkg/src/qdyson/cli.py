"""Command-line harness: ``qdyson compute|verify|suite|gen``."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

from .acceptance import AcceptanceConfig, default_jobs, run_all
from .ctengine import DysonInstance, d_brute, d_brute_schur, two_part_ct
from .identities import DegenerateError, check_e_sum, kadell_rhs, qdyson_rhs, vanishing_predicate
from .qpoly import ScalarQ
from .recursion import PreconditionError, d_recursive
from .splitting import coefficient_family, degree_claims, inductive_d, residue_check, verify_split
from .symfun import conjugate_sort

__all__ = ["Report", "GenBounds", "run", "main", "gen_instances", "emit"]

STATUSES = ("verified", "mismatch", "skipped", "error")
METHODS = ("brute", "recursion", "both", "identity")


@dataclass
class Report:
    task: str
    params: dict
    method: str
    status: str
    value: str | None = None
    other: str | None = None  # second value when status is mismatch
    witness: object = None
    trace: object = None
    elapsed_ms: int = 0

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass(frozen=True)
class GenBounds:
    max_n: int = 3
    max_a: int = 3
    v_min: int = 0
    v_max: int = 3
    require_composition: bool = True
    count: int = 10
    lam_vplus: bool = True


def gen_instances(seed: int, bounds: GenBounds | None = None) -> list[DysonInstance]:
    """Deterministic pseudo-random instances; lambda = v+ (or a random partition of |v|)."""
    bounds = bounds or GenBounds()
    rng = random.Random(seed)
    lo = max(bounds.v_min, 0) if bounds.require_composition else bounds.v_min
    out = []
    while len(out) < bounds.count:
        n = rng.randint(1, bounds.max_n)
        a = tuple(rng.randint(1, bounds.max_a) for _ in range(n))
        n0 = rng.randint(0, n)
        v = tuple(rng.randint(lo, bounds.v_max) for _ in range(n))
        if sum(v) < 0:
            continue
        if bounds.lam_vplus and all(x >= 0 for x in v):
            lam = conjugate_sort(v)
        else:
            lam = _random_partition(rng, sum(v))
        out.append(DysonInstance(a, n0, v, lam))
    return out


def _random_partition(rng: random.Random, total: int) -> tuple[int, ...]:
    parts = []
    left = total
    while left:
        p = rng.randint(1, left)
        parts.append(p)
        left -= p
    return tuple(sorted(parts, reverse=True))


# ------------------------------------------------------------------ emitters


def _latex_escape(text: str) -> str:
    return text.replace("_", r"\_").replace("^", r"\^{}")


def emit(reports: Sequence[Report], fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps([r.to_json() for r in reports], indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["task", "method", "status", "value", "elapsed_ms"])
        for r in reports:
            w.writerow([r.task, r.method, r.status, r.value or "", r.elapsed_ms])
        return buf.getvalue()
    if fmt == "latex":
        lines = [r"\begin{tabular}{ll}", r"\hline", r"instance & value \\", r"\hline"]
        for r in reports:
            params = ", ".join(f"{k}={_fmt_param(v)}" for k, v in r.params.items())
            lines.append(f"${_latex_escape(params)}$ & ${_latex_escape(r.value or '')}$ \\\\")
        lines += [r"\hline", r"\end{tabular}"]
        return "\n".join(lines)
    raise ValueError(f"unknown format {fmt}")


def _fmt_param(v) -> str:
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(str(x) for x in v) + ")"
    return str(v)


# ------------------------------------------------------------------ tasks


def _timed(fn: Callable[[], Report]) -> Report:
    start = time.perf_counter()
    try:
        rep = fn()
    except Exception as exc:  # surfaced as a report, never a traceback
        rep = Report("error", {}, "brute", "error", value=None, witness=f"{type(exc).__name__}: {exc}")
    rep.elapsed_ms = int((time.perf_counter() - start) * 1000)
    return rep


def _compare(task: str, params: dict, method: str, x: ScalarQ, y: ScalarQ, **extra) -> Report:
    if x == y:
        return Report(task, params, method, "verified", value=str(x), **extra)
    return Report(task, params, method, "mismatch", value=str(x), other=str(y), **extra)


def _identity_value(inst: DysonInstance) -> ScalarQ | None:
    if inst.n0 == 0 and not any(inst.v) and not inst.lam:
        return ScalarQ(qdyson_rhs(inst.a))
    nz = [(i, x) for i, x in enumerate(inst.v, start=1) if x]
    if inst.n0 == 0 and len(nz) == 1 and nz[0][1] > 0 and inst.lam == (nz[0][1],):
        return kadell_rhs(inst.a, nz[0][0], nz[0][1])
    return None


def compute_task(inst: DysonInstance, method: str, policy: str = "fallback", trace: bool = False) -> Report:
    params = inst.to_json()
    if method == "brute":
        return Report("compute", params, method, "verified", value=str(d_brute(inst)))
    if method == "identity":
        val = _identity_value(inst)
        if val is None:
            return Report("compute", params, method, "skipped", witness="no closed form for this instance")
        return _compare("compute", params, method, val, d_brute(inst))
    value, tr = d_recursive(inst, policy)
    extra = {"trace": tr.to_json()} if trace else {}
    if method == "recursion":
        return Report("compute", params, method, "verified", value=str(value), **extra)
    return _compare("compute", params, method, value, d_brute(inst), **extra)


def _verify_qdyson(a: tuple[int, ...]) -> Report:
    return _compare("verify-qdyson", {"a": list(a)}, "identity", two_part_ct(a, 0), ScalarQ(qdyson_rhs(a)))


def _verify_kadell(args: tuple) -> Report:
    a, k, r = args
    v = [0] * len(a)
    v[k - 1] = r
    inst = DysonInstance(a, 0, v, (r,))
    return _compare("verify-kadell", {**inst.to_json(), "k": k}, "identity", d_brute(inst), kadell_rhs(a, k, r))


def _verify_vanishing(inst: DysonInstance) -> Report:
    params = inst.to_json()
    wit = vanishing_predicate(inst.v, inst.lam, inst.n, inst.n0)
    if wit is None:
        return Report("verify-vanishing", params, "brute", "skipped", value=str(d_brute(inst)), witness="predicate false")
    w = {"j": wit.j}
    value = d_brute(inst)
    schur = d_brute_schur(inst)
    if value.is_zero() and schur.is_zero():
        return Report("verify-vanishing", params, "brute", "verified", value="0", witness=w)
    return Report("verify-vanishing", params, "brute", "mismatch", value=str(value), other=str(schur), witness=w)


def _verify_recursion(inst: DysonInstance, policy: str = "fallback", trace: bool = False) -> Report:
    try:
        value, tr = d_recursive(inst, policy)
    except PreconditionError as exc:
        return Report("verify-recursion", inst.to_json(), "both", "error", witness=str(exc))
    extra = {"trace": tr.to_json()} if trace else {}
    return _compare("verify-recursion", inst.to_json(), "both", value, d_brute(inst), **extra)


def _verify_splitting(args: tuple) -> Report:
    a, n0, s = args
    params = {"a": list(a), "n0": n0, "s": s}
    bad = [f"residue i={i} j={j}" for i, j in coefficient_family(a, n0) if not residue_check(a, n0, i, j, s)]
    bad += [f"degree i={i} j={j}" for i, j, low, bound in degree_claims(a, n0, s) if low < bound]
    try:
        if not verify_split(a, n0, s):
            bad.append("split")
    except DegenerateError as exc:
        if bad:
            return Report("verify-splitting", params, "identity", "mismatch", witness=bad)
        return Report("verify-splitting", params, "identity", "skipped", witness=str(exc))
    if bad:
        return Report("verify-splitting", params, "identity", "mismatch", witness=bad)
    return Report("verify-splitting", params, "identity", "verified", value="true")


def _verify_inductive(inst: DysonInstance) -> Report:
    try:
        value = inductive_d(inst)
    except (ValueError, DegenerateError) as exc:
        return Report("verify-inductive", inst.to_json(), "both", "skipped", witness=str(exc))
    return _compare("verify-inductive", inst.to_json(), "both", value, d_brute(inst))


def _verify_schur(inst: DysonInstance) -> Report:
    return _compare("verify-schur", inst.to_json(), "brute", d_brute_schur(inst), d_brute(inst))


def _verify_esum(args: tuple) -> Report:
    n, t = args
    ok = check_e_sum(n, t)
    return Report("verify-esum", {"n": n, "t": t}, "identity", "verified" if ok else "mismatch", value=str(ok).lower())


# ------------------------------------------------------------------ argument parsing


def _int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qdyson", description="Two-part q-Dyson constant terms: compute and verify.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--output", choices=("json", "csv", "latex"), default="json")
        sp.add_argument("--jobs", type=int, default=None, help="worker processes (default: QDYSON_JOBS or 1)")

    def instance(sp):
        sp.add_argument("--a", type=_int_list)
        sp.add_argument("--n0", type=int, default=0)
        sp.add_argument("--v", type=_int_list)
        sp.add_argument("--lambda", dest="lam", type=_int_list, help="default: v+ (v sorted, zeros dropped)")
        sp.add_argument("--instance", help="instance JSON file")

    c = sub.add_parser("compute", help="value of D_{v,lambda}(a; n, n0)")
    instance(c)
    c.add_argument("--method", choices=METHODS, default="brute")
    c.add_argument("--policy", choices=("strict", "fallback"), default="fallback")
    c.add_argument("--trace", action="store_true")
    common(c)

    v = sub.add_parser("verify", help="check one family of identities")
    v.add_argument("target", choices=("qdyson", "kadell", "vanishing", "recursion", "splitting", "inductive", "schur", "esum"))
    instance(v)
    v.add_argument("--s", type=int, default=1)
    v.add_argument("--policy", choices=("strict", "fallback"), default="fallback")
    v.add_argument("--trace", action="store_true")
    v.add_argument("--max-n", type=int, default=3)
    v.add_argument("--max-a", type=int, default=2)
    v.add_argument("--max-v", type=int, default=2)
    common(v)

    s = sub.add_parser("suite", help="run the acceptance grids")
    s.add_argument("--only", type=_int_list, help="criterion numbers, e.g. 1,2,7")
    s.add_argument("--seed", type=int, default=0)
    common(s)

    g = sub.add_parser("gen", help="print random instances as JSON")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=10)
    g.add_argument("--max-n", type=int, default=3)
    g.add_argument("--max-a", type=int, default=3)
    g.add_argument("--v-min", type=int, default=0)
    g.add_argument("--v-max", type=int, default=3)
    g.add_argument("--allow-negative", action="store_true")
    return p


def _instance_from(args, parser) -> DysonInstance | None:
    if getattr(args, "instance", None):
        with open(args.instance) as fh:
            return DysonInstance.from_json(json.load(fh))
    if args.a is None:
        return None
    v = args.v if args.v is not None else (0,) * len(args.a)
    if args.lam is not None:
        lam = args.lam
    elif all(x >= 0 for x in v):
        lam = conjugate_sort(v)
    else:
        parser.error("--lambda is required when v has negative entries")
    try:
        return DysonInstance(args.a, args.n0, v, lam)
    except ValueError as exc:
        parser.error(str(exc))


def _map(fn, items, jobs: int) -> list[Report]:
    items = list(items)
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_TimedCall(fn), items))
    return [_TimedCall(fn)(x) for x in items]


class _TimedCall:
    def __init__(self, fn):
        self.fn = fn

    def __call__(self, x) -> Report:
        return _timed(lambda: self.fn(x))


def _grid_instances(max_n: int, max_a: int, max_v: int):
    for n in range(1, max_n + 1):
        for a in itertools.product(range(1, max_a + 1), repeat=n):
            for n0 in range(n + 1):
                for v in itertools.product(range(max_v + 1), repeat=n):
                    yield DysonInstance(a, n0, v, conjugate_sort(v))


def _verify(args, parser, jobs: int) -> list[Report]:
    inst = _instance_from(args, parser)
    t = args.target
    grid = lambda: _grid_instances(args.max_n, args.max_a, args.max_v)  # noqa: E731
    a_grid = [a for n in range(1, args.max_n + 1) for a in itertools.product(range(1, args.max_a + 1), repeat=n)]
    if t == "qdyson":
        items = [inst.a] if inst else a_grid
        reps = _map(_verify_qdyson, items, jobs)
    elif t == "kadell":
        if inst:
            nz = [(i, x) for i, x in enumerate(inst.v, start=1) if x]
            if len(nz) != 1 or nz[0][1] < 1:
                parser.error("kadell needs v with a single positive entry")
            items = [(inst.a, nz[0][0], nz[0][1])]
        else:
            items = [(a, k, r) for a in a_grid for k in range(1, len(a) + 1) for r in range(1, args.max_v + 1)]
        reps = _map(_verify_kadell, items, jobs)
    elif t == "splitting":
        if inst:
            items = [(inst.a, inst.n0, args.s)]
        else:
            items = [(a, n0, s) for a in a_grid if len(a) <= 3 for n0 in range(len(a) + 1) for s in (1, 2)]
        reps = _map(_verify_splitting, items, jobs)
    elif t == "esum":
        reps = _map(_verify_esum, [(n, k) for n in range(args.max_n + 1) for k in range(n + 1)], jobs)
    else:
        fn = {
            "vanishing": _verify_vanishing,
            "recursion": _RecursionCall(args.policy, args.trace),
            "inductive": _verify_inductive,
            "schur": _verify_schur,
        }[t]
        reps = _map(fn, [inst] if inst else list(grid()), jobs)
    return reps


class _RecursionCall:
    def __init__(self, policy: str, trace: bool):
        self.policy, self.trace = policy, trace

    def __call__(self, inst):
        return _verify_recursion(inst, self.policy, self.trace)


def _sort_key(rep: Report):
    p = rep.params
    return (len(p.get("a", ())), json.dumps(p, sort_keys=True))


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    jobs = args.jobs if getattr(args, "jobs", None) else default_jobs()
    try:
        if args.command == "gen":
            bounds = GenBounds(args.max_n, args.max_a, args.v_min, args.v_max, not args.allow_negative, args.count)
            print(json.dumps([i.to_json() for i in gen_instances(args.seed, bounds)]), file=out)
            return 0
        if args.command == "compute":
            inst = _instance_from(args, parser)
            if inst is None:
                parser.error("compute needs --a (or --instance)")
            reports = [_timed(lambda: compute_task(inst, args.method, args.policy, args.trace))]
        elif args.command == "verify":
            reports = sorted(_verify(args, parser, jobs), key=_sort_key)
        else:
            cfg = AcceptanceConfig(jobs=jobs)
            reports = []
            for res in run_all(cfg, args.only):
                print(res.line(), file=sys.stderr)
                reports.append(
                    Report(
                        f"criterion-{res.number}",
                        {"title": res.title},
                        "identity",
                        "verified" if res.passed and res.within_budget else "mismatch",
                        value=None,
                        witness=res.to_json(),
                        elapsed_ms=int(res.elapsed_s * 1000),
                    )
                )
    except SystemExit as exc:
        return int(exc.code or 0)
    print(emit(reports, args.output), file=out)
    return 0 if all(r.status in ("verified", "skipped") for r in reports) else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
