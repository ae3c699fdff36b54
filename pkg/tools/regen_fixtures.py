"""Regenerate the committed CLI fixtures and their golden reports.

Run from the repository root:

    python3 tools/regen_fixtures.py

Inputs land in tests/fixtures/, expected reports in tests/fixtures/golden/.
Golden reports are produced by the CLI itself with fixture-relative paths, so
the files stay byte-stable across machines.
"""

import os
import subprocess
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "src"))

from forcelab import Condition, PCondition, PairTable, RankedFamily  # noqa: E402
from forcelab.documents import (  # noqa: E402
    canonical_dumps,
    chain_doc,
    condition_doc,
    ensemble_doc,
    family_doc,
    p_chain_doc,
    p_condition_doc,
    pair_table_doc,
    sequence_doc,
)
from forcelab.spacelab import SeparatedSequence  # noqa: E402

FIXTURES = os.path.join(ROOT, "tests", "fixtures")
GOLDEN = os.path.join(FIXTURES, "golden")


def write(name, doc):
    path = os.path.join(FIXTURES, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_dumps(doc))


def fs(*xs):
    return frozenset(xs)


def main():
    os.makedirs(GOLDEN, exist_ok=True)

    # the worked lower/upper pair over a three-point universe
    p1 = Condition(3, fs(0, 1), {0: fs(0), 1: fs(0, 1)}, {})
    p2 = Condition(3, fs(0, 2), {0: fs(0), 2: fs(0, 2)}, {})
    q = Condition(3, fs(0, 1, 2), {0: fs(0), 1: fs(0, 1), 2: fs(0, 1, 2)}, {(1, 2): fs(0)})
    table = PairTable(3, {(1, 2): fs(0)})
    violator = Condition(3, fs(0, 1, 2), {0: fs(0), 1: fs(0, 1), 2: fs(0, 2)}, {})

    write("cond_p1.json", condition_doc(p1))
    write("cond_p2.json", condition_doc(p2))
    write("cond_q.json", condition_doc(q))
    write("cond_violator.json", condition_doc(violator))
    write("table_worked.json", pair_table_doc(table))
    write("table_empty3.json", pair_table_doc(PairTable(3, {})))
    write("chain_worked.json", chain_doc([p1, q]))
    write(
        "sequence_worked.json",
        sequence_doc(SeparatedSequence(((1,), (2,)), ((fs(),), (fs(),)))),
    )
    write("ensemble_worked.json", ensemble_doc([[fs(0, 1), fs(0, 2)]]))

    # side-condition fixtures: the one-ceiling pair and the mid-cut instance
    worked_family = RankedFamily(4, (fs(0, 1, 2, 3),), (0,))
    write("family_worked.json", family_doc(worked_family))
    write(
        "pcond_valid.json",
        p_condition_doc(
            PCondition(fs(1, 3), {(1, 3): fs(0)}, fs(fs(0, 1, 2, 3))), worked_family
        ),
    )
    write(
        "pcond_invalid.json",
        p_condition_doc(PCondition(fs(1, 3), {(1, 3): fs(2)}, fs(fs(0, 1, 2, 3))), worked_family),
    )

    midcut_family = RankedFamily(6, (fs(0, 1, 2, 3), fs(0, 1, 4, 5)), (1, 2))
    write("midcut_family.json", family_doc(midcut_family))
    midcut_q = PCondition(fs(1, 4), {(1, 4): fs(0)}, fs(fs(0, 1, 2, 3), fs(0, 1, 4, 5)))
    midcut_s = PCondition(fs(1, 2), {(1, 2): fs(0)}, fs())
    write("midcut_q.json", p_condition_doc(midcut_q, midcut_family))
    write("midcut_s.json", p_condition_doc(midcut_s, midcut_family))
    write("midcut_cut.json", {"x0": 0, "a": [2], "b": [4], "z": []})
    midcut_r = PCondition(
        fs(1, 2, 4),
        {(1, 2): fs(0), (1, 4): fs(0)},
        fs(fs(0, 1, 2, 3), fs(0, 1, 4, 5)),
    )
    write("pchain_midcut.json", p_chain_doc([midcut_s, midcut_r], midcut_family))

    # golden reports come from the CLI itself, run with fixture-relative paths
    runs = {
        "validate_ok.json": ["validate", "--in", "cond_p1.json", "--in", "table_worked.json"],
        "validate_violator.json": [
            "validate", "--in", "cond_violator.json", "--in", "table_empty3.json",
        ],
        "amalgamate_worked.json": [
            "amalgamate",
            "--in", "cond_p1.json", "--in", "cond_p2.json", "--in", "table_worked.json",
        ],
        "amalgamate_failure.json": [
            "amalgamate",
            "--in", "cond_p1.json", "--in", "cond_p2.json", "--in", "table_empty3.json",
        ],
        "oracle_worked.json": [
            "oracle-extend",
            "--in", "cond_p1.json", "--in", "cond_p2.json", "--in", "table_worked.json",
        ],
        "delta_check_worked.json": [
            "delta-check", "--in", "ensemble_worked.json", "--in", "table_worked.json",
        ],
        "delta_search_worked.json": [
            "delta-search", "--in", "ensemble_worked.json", "--universe", "3",
        ],
        "pforce_valid.json": [
            "pforce-validate", "--in", "family_worked.json", "--in", "pcond_valid.json",
        ],
        "pforce_invalid.json": [
            "pforce-validate", "--in", "family_worked.json", "--in", "pcond_invalid.json",
        ],
        "pforce_extract.json": [
            "pforce-extract", "--in", "midcut_family.json", "--in", "pchain_midcut.json",
        ],
        "midcut_amalgam.json": [
            "pforce-amalgamate", "--mode", "cut",
            "--in", "midcut_family.json", "--in", "midcut_q.json",
            "--in", "midcut_s.json", "--in", "midcut_cut.json",
        ],
        "chain_merge_worked.json": [
            "chain-merge", "--in", "chain_worked.json", "--in", "table_worked.json",
        ],
        "levels_worked.json": [
            "levels", "--in", "chain_worked.json", "--in", "table_worked.json",
        ],
        "left_sep_worked.json": [
            "left-sep",
            "--in", "chain_worked.json", "--in", "table_worked.json",
            "--in", "sequence_worked.json",
        ],
        "kill_worked.json": [
            "kill",
            "--in", "cond_p1.json", "--in", "cond_p2.json",
            "--in", "table_worked.json", "--in", "sequence_worked.json",
        ],
    }
    for name, argv in runs.items():
        out = os.path.join("golden", name)
        proc = subprocess.run(
            [sys.executable, "-m", "forcelab", *argv, "--out", out],
            cwd=FIXTURES,
            capture_output=True,
            text=True,
        )
        print(f"{name}: exit {proc.returncode}")
        if proc.returncode == 2:
            print(proc.stderr)
            raise SystemExit(f"fixture run {name} hit a contract violation")


if __name__ == "__main__":
    main()
