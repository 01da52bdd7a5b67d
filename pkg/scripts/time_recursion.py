"""Compare recursive evaluation against brute force on lambda = v+ instances.

Caches are cleared between the two passes so each timing starts cold.
"""

import argparse
import itertools
import time

from qdyson.ctengine import DysonInstance, _d_brute_cached, d_brute
from qdyson.recursion import _d_recursive, d_recursive
from qdyson.symfun import conjugate_sort


def instances(n, max_a, max_v):
    for a in itertools.product(range(1, max_a + 1), repeat=n):
        for n0 in range(n + 1):
            for v in itertools.product(range(max_v + 1), repeat=n):
                yield DysonInstance(a, n0, v, conjugate_sort(v))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--max-a", type=int, default=3)
    ap.add_argument("--max-v", type=int, default=3)
    args = ap.parse_args()
    grid = list(instances(args.n, args.max_a, args.max_v))

    _d_brute_cached.cache_clear()
    t0 = time.perf_counter()
    brute = [d_brute(x) for x in grid]
    t_brute = time.perf_counter() - t0

    _d_brute_cached.cache_clear()
    _d_recursive.cache_clear()
    t0 = time.perf_counter()
    rec = [d_recursive(x)[0] for x in grid]
    t_rec = time.perf_counter() - t0

    bad = sum(1 for x, y in zip(brute, rec) if x != y)
    print(f"{len(grid)} instances  brute {t_brute:.2f}s  recursion {t_rec:.2f}s  disagreements {bad}")


if __name__ == "__main__":
    main()
