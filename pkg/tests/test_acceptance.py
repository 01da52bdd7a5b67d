"""Acceptance criteria 1-8 at their published grid sizes, exact equality throughout.

Each test prints one PASS/FAIL line.  Run standalone with
``python tests/test_acceptance.py`` or through pytest.
"""

import sys

import pytest

from qdyson.acceptance import CRITERIA, AcceptanceConfig, default_jobs, run_criterion

CONFIG = AcceptanceConfig(jobs=default_jobs())


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    res = run_criterion(number, CONFIG)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.failures[:5]
    assert res.within_budget, f"{res.elapsed_s:.1f}s over {res.budget_s:.0f}s"


if __name__ == "__main__":
    ok = True
    for number in sorted(CRITERIA):
        res = run_criterion(number, CONFIG)
        print(res.line(), flush=True)
        ok = ok and res.passed and res.within_budget
    sys.exit(0 if ok else 1)
