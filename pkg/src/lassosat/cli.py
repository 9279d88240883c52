"""Command line driver.

    lassosat check --bound K [--engine mono|bi] [--mode bsc|bmc|hcc]
                   [--solver embedded|minisat|picosat] [--loop-free]
                   [--history FILE] [--out DIR] spec.zot

    lassosat find-bound [--max-bound N] [--solver ...] [--out DIR] spec.zot

Exit status: 0 = SAT (or loop-free bound not reached, or a completeness
bound was found), 1 = UNSAT, 2 = error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import LassosatError
from .pipeline import RunConfig, run


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lassosat",
        description="Bounded satisfiability / model checking over lasso traces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run one verification job")
    check.add_argument("spec", help="spec file (.zot)")
    check.add_argument("--bound", "-k", type=int, default=None, metavar="K",
                       help="time bound (instants 0..K)")
    check.add_argument("--engine", choices=("mono", "bi"), default=None)
    check.add_argument("--mode", choices=("bsc", "bmc", "hcc"), default="bsc")
    check.add_argument("--solver", choices=("embedded", "minisat", "picosat"),
                       default=None)
    check.add_argument("--loop-free", action="store_true",
                       help="completeness check (replaces the loop machinery)")
    check.add_argument("--history", default=None, metavar="FILE",
                       help="partial history file (hcc mode)")
    check.add_argument("--out", default=".", metavar="DIR",
                       help="directory for output.cnf.txt/output.sat.txt/output.hist.txt")

    fb = sub.add_parser("find-bound", help="search the completeness bound")
    fb.add_argument("spec", help="spec file (.zot)")
    fb.add_argument("--max-bound", type=int, default=50, metavar="N")
    fb.add_argument("--solver", choices=("embedded", "minisat", "picosat"),
                    default=None)
    fb.add_argument("--out", default=".", metavar="DIR")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "check":
            mode = "loop-free" if args.loop_free else args.mode
            report = run(
                RunConfig(
                    spec_path=args.spec,
                    bound=args.bound,
                    engine=args.engine,
                    mode=mode,
                    solver=args.solver,
                    history_path=args.history,
                    out_dir=args.out,
                )
            )
            print(f"{report.verdict} (k={report.k}, engine={report.engine})")
            print(report.message)
            if report.history_text:
                print(report.history_text, end="")
            return report.exit_code
        report = run(
            RunConfig(
                spec_path=args.spec,
                mode="find-bound",
                solver=args.solver,
                out_dir=args.out,
                max_bound=args.max_bound,
            )
        )
        print(f"completeness bound: {report.bound}")
        return report.exit_code
    except LassosatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
