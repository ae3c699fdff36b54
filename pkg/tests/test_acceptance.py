"""Acceptance battery: every criterion at its stated scale, zero tolerated failures.

One line per criterion is printed (run pytest with -s to watch them live).
The same randomized battery is reachable as `forcelab suite --seed 0`.
"""

import json
import os
import shutil
import time

import pytest

from forcelab.documents import canonical_dumps, loads
from forcelab.suite import (
    criterion_amalgamation_soundness,
    criterion_density_end_to_end,
    criterion_oracle_agreement,
    criterion_projection_laws,
    criterion_search_soundness,
    criterion_strong_delta_realization,
)

from test_cli import FIXTURES, GOLDEN_RUNS, run_cli

SEED = 0


def _check(result, elapsed, limit_s=None):
    extra = f" elapsed={elapsed:.1f}s" + (f" (limit {limit_s}s)" if limit_s else "")
    tag = "PASS" if result.passed else "FAIL"
    print(f"[{tag}] {result.name}: "
          + " ".join(f"{k}={v}" for k, v in sorted(result.details.items()))
          + extra)
    assert result.passed, result.details
    if limit_s is not None:
        assert elapsed < limit_s, f"{result.name} took {elapsed:.1f}s"


def test_criterion_1_amalgamation_soundness():
    t0 = time.time()
    res = criterion_amalgamation_soundness(SEED, 10_000)
    elapsed = time.time() - t0
    assert res.details["instances"] >= 10_000
    assert res.details["failures"] == 0
    _check(res, elapsed, limit_s=120)


def test_criterion_2_oracle_agreement():
    t0 = time.time()
    res = criterion_oracle_agreement(SEED, 10_000, minimum=1_000)
    elapsed = time.time() - t0
    assert res.details["instances"] >= 1_000
    assert res.details["failures"] == 0
    _check(res, elapsed, limit_s=600)


def test_criterion_3_projection_laws():
    t0 = time.time()
    res = criterion_projection_laws(SEED, 10_000)
    elapsed = time.time() - t0
    assert res.details["failures"] == 0
    _check(res, elapsed)


def test_criterion_4_strong_delta_realization():
    t0 = time.time()
    res = criterion_strong_delta_realization(SEED, 1_000)
    elapsed = time.time() - t0
    assert res.details["instances"] >= 1_000
    assert res.details["failures"] == 0
    _check(res, elapsed, limit_s=120)


def test_criterion_5_density_end_to_end():
    t0 = time.time()
    res = criterion_density_end_to_end(SEED, 500)
    elapsed = time.time() - t0
    assert res.details["instances"] >= 500
    assert res.details["failures"] == 0
    _check(res, elapsed)


def test_criterion_6_search_soundness():
    t0 = time.time()
    res = criterion_search_soundness(SEED, 100)
    elapsed = time.time() - t0
    assert res.details["instances"] >= 100
    assert res.details["failures"] == 0
    assert res.details["compared"] > 0
    _check(res, elapsed, limit_s=300)


def test_criterion_7_worked_golden_fixtures(tmp_path):
    for name in os.listdir(FIXTURES):
        src = os.path.join(FIXTURES, name)
        if os.path.isfile(src):
            shutil.copy(src, tmp_path / name)
    (tmp_path / "golden").mkdir()
    mismatches = []
    for name, (expected_code, args) in sorted(GOLDEN_RUNS.items()):
        out = os.path.join("golden", name)
        proc = run_cli([*args, "--out", out], tmp_path)
        produced = (tmp_path / "golden" / name).read_bytes()
        with open(os.path.join(FIXTURES, "golden", name), "rb") as fh:
            frozen = fh.read()
        if proc.returncode != expected_code or produced != frozen:
            mismatches.append(name)
    tag = "FAIL" if mismatches else "PASS"
    print(f"[{tag}] worked-golden-fixtures: runs={len(GOLDEN_RUNS)} mismatches={len(mismatches)}")
    assert not mismatches, mismatches


def test_criterion_8_determinism_and_round_trip(tmp_path):
    # byte-identical suite reports for one seed
    args = ["suite", "--seed", "11", "--count", "25", "--out", "report.json"]
    digests = []
    for sub in ("a", "b"):
        d = tmp_path / sub
        d.mkdir()
        proc = run_cli(args, d)
        assert proc.returncode == 0, proc.stderr
        digests.append((d / "report.json").read_bytes())
    identical = digests[0] == digests[1]

    # parse-serialize identity over every committed document
    drift = []
    for base, sub in ((FIXTURES, ""), (os.path.join(FIXTURES, "golden"), "golden/")):
        for name in sorted(os.listdir(base)):
            path = os.path.join(base, name)
            if not os.path.isfile(path):
                continue
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
            if canonical_dumps(loads(text)) != text:
                drift.append(sub + name)
    tag = "PASS" if identical and not drift else "FAIL"
    print(f"[{tag}] determinism-and-round-trip: identical_reports={identical} drift={len(drift)}")
    assert identical and not drift, drift
