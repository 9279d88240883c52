"""End-to-end driver: spec file -> desugar -> encode -> CNF -> solve -> trace.

Modes:

  bsc         bounded satisfiability of init/property over lasso traces
  bmc         model checking: transitions + init against a negated property;
              UNSAT means the property holds over every periodic behavior
  hcc         history checking/completion: bsc plus the facts of a partial
              (or total) history; UNSAT leaves the history file empty
  loop-free   completeness check: UNSAT means the bound is reached
  find-bound  iterate loop-free k = 1, 2, ... until the first UNSAT

For the mono engine init is asserted through the yesterday idiom (the root
formula lives at instant 1, so init is pinned at instant 0); the bi engine
asserts the root at instant 0 directly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from .cnf import CnfInstance, emit_dimacs, to_cnf
from .declarations import domain_constraints
from .desugar import desugar
from .encoder import CheckProblem, encode
from .errors import BoundSearchError, SpecFormatError
from .formula import Atom, Not, Yesterday, conj
from .oracle import eval_lasso
from .sat_embedded import solve_embedded
from .sat_external import CNF_FILENAME, DEFAULT_SOLVERS, SAT_FILENAME, solve_external
from .specfile import SpecDocument, load_spec
from .trace import LassoTrace, PartialHistory, decode, load_history, render_history

HIST_FILENAME = "output.hist.txt"

MODES = ("bsc", "bmc", "hcc", "loop-free", "find-bound")


@dataclass
class RunConfig:
    spec_path: str
    bound: Optional[int] = None
    engine: Optional[str] = None  # mono | bi
    mode: str = "bsc"
    solver: Optional[str] = None  # embedded | minisat | picosat
    history_path: Optional[str] = None
    out_dir: str = "."
    max_bound: int = 50
    timeout_s: Optional[float] = None


@dataclass
class RunReport:
    mode: str
    verdict: str  # SAT | UNSAT
    exit_code: int
    k: int
    engine: str
    message: str = ""
    trace: Optional[LassoTrace] = None
    history_text: str = ""
    bound: Optional[int] = None
    num_vars: int = 0
    num_clauses: int = 0


def _effective(config: RunConfig, doc: SpecDocument):
    mode = config.mode
    if mode not in MODES:
        raise SpecFormatError(f"unknown mode {mode}")
    if mode == "bsc" and doc.loop_free:
        mode = "loop-free"
    engine = config.engine or doc.engine or "mono"
    solver = config.solver or doc.solver or "embedded"
    k = config.bound if config.bound is not None else doc.bound
    if k is None and mode != "find-bound":
        raise SpecFormatError("no bound given (use --bound or a (bound N) form)")
    return mode, engine, solver, k


def build_problem(
    doc: SpecDocument,
    k: int,
    engine: str,
    mode: str,
    facts: Optional[PartialHistory] = None,
) -> CheckProblem:
    """Desugar and lower a document into an encodable problem."""
    decls = doc.declarations
    ds = lambda f: desugar(f, decls)  # noqa: E731

    parts = []
    if doc.init is not None:
        init = ds(doc.init)
        parts.append(Yesterday(init) if engine == "mono" else init)
    if mode == "bmc":
        if doc.property is None:
            raise SpecFormatError("bmc mode needs a (property F) section")
        if not doc.transitions:
            raise SpecFormatError("bmc mode needs at least one (trans F) section")
        parts.append(Not(ds(doc.property)))
    elif doc.property is not None:
        parts.append(ds(doc.property))
    root = conj(parts) if parts else None
    if mode in ("bsc", "hcc") and root is None:
        raise SpecFormatError(f"{mode} mode needs an (init F) or (property F) section")

    registry_atoms: List[Atom] = [
        Atom(name) for name, arity in decls.atom_arity.items() if arity == 0
    ]
    registry_atoms.extend(decls.state_atoms())

    return CheckProblem(
        k=k,
        engine=engine,
        root=root,
        transitions=tuple(ds(tr) for tr in doc.transitions),
        global_constraints=tuple(domain_constraints(decls)),
        atoms=tuple(registry_atoms),
        facts=facts,
        loop_free=mode in ("loop-free", "find-bound"),
    )


def _gather_facts(config: RunConfig, doc: SpecDocument, mode: str):
    facts = None
    if mode == "hcc":
        if doc.history is not None:
            facts = doc.history
        if config.history_path:
            file_facts = load_history(config.history_path)
            facts = file_facts if facts is None else facts.merged_with(file_facts)
        if facts is None:
            raise SpecFormatError(
                "hcc mode needs a (history ...) section or --history FILE"
            )
    elif doc.history is not None or config.history_path:
        warnings.warn("history input is ignored outside hcc mode", stacklevel=2)
    return facts


def _dimacs_comments(vm) -> List[str]:
    out = []
    for atom in vm.atoms:
        for t in range(vm.k + 1):
            out.append(f"{atom.key} {vm.var(atom, t)} {t}")
    return out


def _solve(inst: CnfInstance, solver: str, out_dir: str, comments, timeout_s):
    outp = Path(out_dir)
    outp.mkdir(parents=True, exist_ok=True)
    if solver == "embedded":
        with open(outp / CNF_FILENAME, "w", encoding="utf-8") as fh:
            emit_dimacs(inst, fh, comments)
        result = solve_embedded(inst, timeout_s=timeout_s)
        with open(outp / SAT_FILENAME, "w", encoding="utf-8") as fh:
            if result.verdict == "SAT":
                lits = " ".join(
                    str(v if result.model[v] else -v) for v in range(1, inst.num_vars + 1)
                )
                fh.write(f"SAT\n{lits} 0\n")
            else:
                fh.write("UNSAT\n")
        return result
    cfg = DEFAULT_SOLVERS.get(solver)
    if cfg is None:
        raise SpecFormatError(f"unknown solver {solver!r}")
    return solve_external(inst, cfg, out_dir, comments)


def _render_finite(vm, model) -> str:
    """History blocks for a loop-free model (no loop markers)."""
    lines = []
    for t in range(vm.k + 1):
        lines.append(f"------ time {t} ------")
        for atom in vm.atoms:
            if model[vm.var(atom, t)]:
                lines.append(f"  {atom.display}")
        lines.append("")
    lines.append("------ end ------")
    return "\n".join(lines) + "\n"


def _run_problem(
    problem: CheckProblem, solver: str, out_dir: str, timeout_s
):
    encoded = encode(problem)
    inst = to_cnf(encoded)
    comments = _dimacs_comments(encoded.varmap)
    result = _solve(inst, solver, out_dir, comments, timeout_s)
    return encoded, inst, result


def run(config: RunConfig) -> RunReport:
    """Execute one verification job; always writes the three output files."""
    doc = load_spec(config.spec_path)
    mode, engine, solver, k = _effective(config, doc)
    if mode == "find-bound":
        return _run_find_bound(config, doc, engine, solver)
    facts = _gather_facts(config, doc, mode)
    problem = build_problem(doc, k, engine, mode, facts)
    encoded, inst, result = _run_problem(problem, solver, config.out_dir, config.timeout_s)

    hist_path = Path(config.out_dir) / HIST_FILENAME
    trace = None
    history_text = ""
    if result.verdict == "SAT":
        if problem.loop_free:
            history_text = _render_finite(encoded.varmap, result.model)
        else:
            trace = decode(result, encoded.varmap)
            history_text = render_history(trace)
    hist_path.write_text(history_text, encoding="utf-8")

    if mode == "bmc":
        message = (
            "property holds over every periodic behavior within the bound"
            if result.verdict == "UNSAT"
            else "property violated: counterexample trace written"
        )
    elif mode == "loop-free":
        message = (
            "completeness bound reached"
            if result.verdict == "UNSAT"
            else "bound not reached: a loop-free path of this length exists"
        )
    elif result.verdict == "UNSAT":
        message = "unsatisfiable: the empty history means no trace complies"
    else:
        message = "satisfiable: history written"

    return RunReport(
        mode=mode,
        verdict=result.verdict,
        exit_code=0 if result.verdict == "SAT" else 1,
        k=k,
        engine="mono" if problem.loop_free else engine,
        message=message,
        trace=trace,
        history_text=history_text,
        num_vars=inst.num_vars,
        num_clauses=len(inst.clauses),
    )


def find_bound(config: RunConfig, doc: Optional[SpecDocument] = None) -> int:
    """Smallest k whose loop-free encoding is UNSAT (completeness bound)."""
    if doc is None:
        doc = load_spec(config.spec_path)
    _, engine, solver, _ = _effective(config, doc)
    if engine != "mono":
        raise SpecFormatError("find-bound uses the loop-free mono encoding")
    for k in range(1, config.max_bound + 1):
        problem = build_problem(doc, k, "mono", "find-bound", None)
        _, _, result = _run_problem(problem, solver, config.out_dir, config.timeout_s)
        if result.verdict == "UNSAT":
            Path(config.out_dir, HIST_FILENAME).write_text("", encoding="utf-8")
            return k
    raise BoundSearchError(
        f"still satisfiable at the maximum bound {config.max_bound}"
    )


def _run_find_bound(config, doc, engine, solver) -> RunReport:
    bound = find_bound(config, doc)
    return RunReport(
        mode="find-bound",
        verdict="UNSAT",
        exit_code=0,
        k=bound,
        engine="mono",
        message=f"completeness bound found: {bound}",
        bound=bound,
    )


def check_trace_against_root(problem: CheckProblem, trace: LassoTrace) -> bool:
    """Oracle check: the decoded trace satisfies the asserted root formula."""
    if problem.root is None:
        return True
    pos = 1 if problem.engine == "mono" else 0
    return eval_lasso(trace, problem.root, pos)
