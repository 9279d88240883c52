#!/usr/bin/env python3
"""Completeness: find the recurrence diameter with loop-free encodings.

The loop-free mode drops the loop machinery and instead demands that all
k+1 state vectors differ pairwise.  UNSAT therefore means no loop-free path
of that length exists: the completeness bound is reached.  find_bound
iterates k = 1, 2, 3, ... until the first UNSAT.

Run from the repository root:  python demos/04_completeness_bound.py
"""

import tempfile
from pathlib import Path

from lassosat import RunConfig, find_bound, run

HERE = Path(__file__).resolve().parent
DATA = HERE.parent / "tests" / "data"


def main():
    workdir = tempfile.mkdtemp(prefix="bounds-")
    for name, blurb in (
        ("cycle3", "deterministic 3-state cycle"),
        ("stutter", "single stuttering state"),
        ("free1", "one unconstrained atom"),
    ):
        spec = DATA / f"{name}.zot"
        bound = find_bound(RunConfig(spec_path=str(spec), mode="find-bound",
                                     out_dir=workdir, max_bound=10))
        print(f"{blurb:32s} completeness bound = {bound}")

    # a single loop-free query, by hand: SAT at k=2 (three distinct states
    # exist), UNSAT at k=3
    for k in (2, 3):
        report = run(RunConfig(spec_path=str(DATA / "cycle3.zot"),
                               mode="loop-free", bound=k, out_dir=workdir))
        print(f"cycle3 loop-free at k={k}: {report.verdict} -> {report.message}")


if __name__ == "__main__":
    main()
