"""Embedded CDCL SAT solver.

A complete decision procedure: two-watched-literal propagation, first-UIP
conflict learning, VSIDS-style activities with decay, phase saving and Luby
restarts.  Completeness, not speed, is the contract; every SAT model is
checked against the full clause set before it is returned.
"""

from __future__ import annotations

import time
from heapq import heappop, heappush
from typing import List, Optional

from .cnf import CnfInstance, SatResult, check_model
from .errors import LassosatError, SolverTimeout

_LUBY_BASE = 128
_VAR_DECAY = 0.95


def _luby(i: int) -> int:
    # sequence 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
    k = 1
    while (1 << (k + 1)) <= i + 1:
        k += 1
    while (1 << k) - 1 != i + 1:
        i = i - (1 << k) + 1
        k = 1
        while (1 << (k + 1)) <= i + 1:
            k += 1
    return 1 << (k - 1)


def solve_embedded(
    inst: CnfInstance, timeout_s: Optional[float] = None, verify: bool = True
) -> SatResult:
    """Decide the instance; raises SolverTimeout when a limit is given and hit."""
    n = inst.num_vars
    clauses: List[List[int]] = []
    units: List[int] = []
    for clause in inst.clauses:
        if not clause:
            return SatResult("UNSAT")
        if len(clause) == 1:
            units.append(clause[0])
        else:
            clauses.append(list(clause))

    assign = [0] * (n + 1)  # 0 unknown, 1 true, -1 false
    level = [0] * (n + 1)
    reason = [-1] * (n + 1)
    saved = [False] * (n + 1)
    activity = [0.0] * (n + 1)
    trail: List[int] = []
    trail_lim: List[int] = []
    qhead = 0
    var_inc = 1.0
    heap: List[tuple] = [(0.0, v) for v in range(1, n + 1)]

    watches: List[List[int]] = [[] for _ in range(2 * n + 1)]

    def wix(lit: int) -> int:
        return lit + n

    for ci, cl in enumerate(clauses):
        watches[wix(cl[0])].append(ci)
        watches[wix(cl[1])].append(ci)

    def val(lit: int) -> int:
        return assign[lit] if lit > 0 else -assign[-lit]

    def enqueue(lit: int, cref: int) -> bool:
        v = val(lit)
        if v == 1:
            return True
        if v == -1:
            return False
        var = abs(lit)
        assign[var] = 1 if lit > 0 else -1
        level[var] = len(trail_lim)
        reason[var] = cref
        saved[var] = lit > 0
        trail.append(lit)
        return True

    def propagate() -> int:
        nonlocal qhead
        while qhead < len(trail):
            lit = trail[qhead]
            qhead += 1
            neg = -lit
            ws = watches[wix(neg)]
            i = 0
            j = 0
            size = len(ws)
            while i < size:
                ci = ws[i]
                i += 1
                cl = clauses[ci]
                if cl[0] == neg:
                    cl[0], cl[1] = cl[1], cl[0]
                first = cl[0]
                if val(first) == 1:
                    ws[j] = ci
                    j += 1
                    continue
                moved = False
                for idx in range(2, len(cl)):
                    if val(cl[idx]) != -1:
                        cl[1], cl[idx] = cl[idx], cl[1]
                        watches[wix(cl[1])].append(ci)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = ci
                j += 1
                if val(first) == -1:
                    while i < size:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    return ci
                enqueue(first, ci)
            del ws[j:]
        return -1

    def bump(var: int):
        nonlocal var_inc
        activity[var] += var_inc
        if activity[var] > 1e100:
            for v in range(1, n + 1):
                activity[v] *= 1e-100
            var_inc *= 1e-100
        heappush(heap, (-activity[var], var))

    def analyze(confl: int):
        learnt = [0]  # placeholder for the asserting literal
        seen = [False] * (n + 1)
        counter = 0
        p = 0
        idx = len(trail) - 1
        cur_level = len(trail_lim)
        cl = clauses[confl]
        while True:
            start = 1 if p else 0
            for q in cl[start:]:
                v = abs(q)
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    bump(v)
                    if level[v] == cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(trail[idx])]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = abs(p)
            seen[v] = False
            counter -= 1
            if counter == 0:
                break
            cl = clauses[reason[v]]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        # watch a literal from the backtrack level at position 1
        max_i = 1
        for i in range(2, len(learnt)):
            if level[abs(learnt[i])] > level[abs(learnt[max_i])]:
                max_i = i
        learnt[1], learnt[max_i] = learnt[max_i], learnt[1]
        return learnt, level[abs(learnt[1])]

    def backtrack(blevel: int):
        nonlocal qhead
        if len(trail_lim) <= blevel:
            return
        limit = trail_lim[blevel]
        for lit in reversed(trail[limit:]):
            var = abs(lit)
            assign[var] = 0
            heappush(heap, (-activity[var], var))
        del trail[limit:]
        del trail_lim[blevel:]
        qhead = len(trail)

    def pick_var() -> int:
        while heap:
            act, var = heappop(heap)
            if assign[var] == 0 and -act == activity[var]:
                return var
        for var in range(1, n + 1):  # heap entries can go stale; rebuild path
            if assign[var] == 0:
                return var
        return 0

    for u in units:
        if not enqueue(u, -1):
            return SatResult("UNSAT")
    if propagate() >= 0:
        return SatResult("UNSAT")

    conflicts = 0
    restart_round = 0
    restart_budget = _LUBY_BASE * _luby(0)
    started = time.monotonic()

    while True:
        confl = propagate()
        if confl >= 0:
            conflicts += 1
            if not trail_lim:
                return SatResult("UNSAT")
            learnt, blevel = analyze(confl)
            backtrack(blevel)
            if len(learnt) == 1:
                if not enqueue(learnt[0], -1):
                    return SatResult("UNSAT")
            else:
                clauses.append(learnt)
                ci = len(clauses) - 1
                watches[wix(learnt[0])].append(ci)
                watches[wix(learnt[1])].append(ci)
                enqueue(learnt[0], ci)
            var_inc /= _VAR_DECAY
            if conflicts % 256 == 0 and timeout_s is not None:
                if time.monotonic() - started > timeout_s:
                    raise SolverTimeout(
                        f"embedded solver exceeded {timeout_s} s "
                        f"after {conflicts} conflicts"
                    )
            if conflicts >= restart_budget:
                restart_round += 1
                restart_budget = conflicts + _LUBY_BASE * _luby(restart_round)
                backtrack(0)
        else:
            if len(trail) == n:
                model = [False] * (n + 1)
                for var in range(1, n + 1):
                    model[var] = assign[var] == 1
                if verify and not check_model(inst, model):
                    raise LassosatError("internal error: model fails clause check")
                return SatResult("SAT", model)
            var = pick_var()
            trail_lim.append(len(trail))
            enqueue(var if saved[var] else -var, -1)
