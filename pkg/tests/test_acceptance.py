"""Acceptance criteria, each run once at the highest tier that exercises it.

Every criterion prints one PASS/FAIL line (collected again in the pytest
terminal summary). Run this file directly for the same lines without pytest.
"""

from __future__ import annotations

import subprocess
import sys
import time

import pytest

from pyradesign.acceptance import CRITERIA, run_acceptance_suite

RESULT_LINES: list[str] = []

# criteria 2 and 7 only reach their r=5 parts in tier r5; the rest peak at r4
TIER = {1: "r4", 2: "r5", 3: "r4", 4: "r5", 5: "r5", 6: "r4", 7: "r5", 8: "r4"}


@pytest.mark.parametrize("number", sorted(TIER))
def test_criterion(number):
    crit = CRITERIA[number - 1]
    res = crit(TIER[number])
    line = res.line()
    RESULT_LINES.append(line)
    print(line)
    for c in res.checks:
        print("   ", c.line())
    assert res.skipped is None, line
    assert res.passed, line


def test_tier_r3_under_five_seconds():
    t0 = time.perf_counter()
    rep = run_acceptance_suite("r3")
    elapsed = time.perf_counter() - t0
    line = f"{'PASS' if rep.ok and elapsed < 5 else 'FAIL'}  tier r3 complete [{elapsed:.2f}s < 5s]"
    RESULT_LINES.append(line)
    print(line)
    assert rep.ok, rep.to_text()
    assert elapsed < 5


def test_tier_r4_under_five_minutes():
    # fresh interpreter so nothing is cached from the tests above
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pyradesign", "accept", "r4"],
        capture_output=True,
        text=True,
        timeout=900,
    )
    elapsed = time.perf_counter() - t0
    ok = proc.returncode == 0 and elapsed < 300
    line = f"{'PASS' if ok else 'FAIL'}  tier r4 complete [{elapsed:.2f}s < 300s]"
    RESULT_LINES.append(line)
    print(line)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert elapsed < 300


def test_unknown_tier():
    with pytest.raises(ValueError):
        run_acceptance_suite("r9")


if __name__ == "__main__":
    failed = 0
    for n in sorted(TIER):
        r = CRITERIA[n - 1](TIER[n])
        print(r.line(), flush=True)
        failed += not r.passed
    sys.exit(1 if failed else 0)
