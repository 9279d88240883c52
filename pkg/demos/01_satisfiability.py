#!/usr/bin/env python3
"""Bounded satisfiability checking: the timed lamp.

A lamp with a 5-instant timeout: pressing `on` lights it from the next
instant; it stays lit for up to five instants unless `off` intervenes.
We ask for any ultimately periodic trace of length 10 that satisfies the
axiom on the bi-infinite time domain, then print the witness history.

Run from the repository root:  python demos/01_satisfiability.py
"""

import tempfile
from pathlib import Path

from lassosat import RunConfig, run

SPEC = """
(declare on off l)

(init (!! (|| (-P- on) (-P- off) (-P- l))))

(property
  (alw (&& (<-> (-P- l)
                (|| (yesterday (-P- on))
                    (-E- x (range 2 5)
                         (&& (past (-P- on) x)
                             (!! (withinp_ee (-P- off) x))))))
           (!! (&& (-P- on) (-P- off))))))

(bound 10)
(engine bi)
"""


def main():
    workdir = Path(tempfile.mkdtemp(prefix="lamp-"))
    spec_path = workdir / "lamp.zot"
    spec_path.write_text(SPEC)

    report = run(RunConfig(spec_path=str(spec_path), out_dir=str(workdir)))
    print(f"verdict: {report.verdict}  ({report.num_vars} variables, "
          f"{report.num_clauses} clauses)")
    print(f"artifacts: {workdir}/output.cnf.txt, output.sat.txt, output.hist.txt")
    print()
    print(report.history_text)

    # the decoded trace is an honest witness: the loop selector marks where
    # the periodic part begins, towards the future and towards the past
    trace = report.trace
    print(f"future loop starts at instant {trace.loop_start}, "
          f"past loop at instant {trace.pool_start}")


if __name__ == "__main__":
    main()
