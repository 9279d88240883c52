#!/usr/bin/env python3
"""History checking and completion.

A partial history pins a few facts at a few instants; the checker either
completes it into a full trace that satisfies the specification or reports
UNSAT (the output history is then empty).  Facts are written in the same
format the tool prints, with a `!` prefix for negative facts; atoms that
are not mentioned stay unconstrained.

Run from the repository root:  python demos/03_history_completion.py
"""

import tempfile
from pathlib import Path

from lassosat import RunConfig, run

HERE = Path(__file__).resolve().parent
SPEC = HERE.parent / "tests" / "data" / "lamp.zot"

PARTIAL = """\
------ time 1 ------
  ON

------ time 4 ------
  OFF
  !ON
"""

CONTRADICTORY = """\
------ time 2 ------
  ON

------ time 3 ------
  !L
"""


def main():
    workdir = Path(tempfile.mkdtemp(prefix="hcc-"))

    partial = workdir / "partial.txt"
    partial.write_text(PARTIAL)
    report = run(RunConfig(spec_path=str(SPEC), mode="hcc",
                           history_path=str(partial), out_dir=str(workdir)))
    print(f"partial history: {report.verdict}")
    print("completed trace (light must burn at 2 because ON was pressed at 1):")
    print(report.history_text)

    # pressing ON at 2 forces the light at 3; pinning !L at 3 contradicts it
    bad = workdir / "contradictory.txt"
    bad.write_text(CONTRADICTORY)
    report = run(RunConfig(spec_path=str(SPEC), mode="hcc",
                           history_path=str(bad), out_dir=str(workdir)))
    print(f"contradictory history: {report.verdict} -> {report.message}")
    hist = (workdir / "output.hist.txt").read_text()
    print(f"output.hist.txt is empty: {hist == ''}")


if __name__ == "__main__":
    main()
