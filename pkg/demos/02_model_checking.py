#!/usr/bin/env python3
"""Bounded model checking: three-process mutual exclusion.

The model is operational: an array `state` of three process states over
{N, T, C} plus a `turn` variable, constrained by or-case transitions that
must hold at every instant.  The property is a liveness condition (whoever
holds the turn eventually loses it).  BMC conjoins the initialization
through the yesterday idiom with the negated property, so UNSAT means the
property holds over every periodic behavior within the bound.

Run from the repository root:  python demos/02_model_checking.py
"""

import tempfile
from pathlib import Path

from lassosat import RunConfig, eval_lasso, run
from lassosat.desugar import desugar
from lassosat.specfile import load_spec

HERE = Path(__file__).resolve().parent
SPEC = HERE.parent / "tests" / "data" / "mutex3.zot"
BROKEN = HERE.parent / "tests" / "data" / "mutex3_broken.zot"


def main():
    workdir = tempfile.mkdtemp(prefix="mutex3-")
    report = run(RunConfig(spec_path=str(SPEC), mode="bmc", bound=30,
                           engine="mono", out_dir=workdir))
    print(f"mutex3, k=30: {report.verdict} -> {report.message}")

    # deleting the turn check from the T -> C transition breaks mutual
    # exclusion; BMC then produces a counterexample trace
    report = run(RunConfig(spec_path=str(BROKEN), mode="bmc", bound=30,
                           engine="mono", out_dir=workdir))
    print(f"broken variant:  {report.verdict} -> {report.message}")
    trace = report.trace

    doc = load_spec(BROKEN)
    prop = desugar(doc.property, doc.declarations)
    print(f"counterexample falsifies the property: "
          f"{not eval_lasso(trace, prop, 1)}")
    print()
    print("first instants of the counterexample:")
    for line in report.history_text.splitlines():
        print(line)
        if line.startswith("------ time 6"):
            print("  ...")
            break


if __name__ == "__main__":
    main()
