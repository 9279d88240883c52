"""Lasso traces, history files, and the SAT-model decoder.

History file format (one block per instant, two-space indent):

    ------ time 0 ------

    ------ time 1 ------
      **LOOP**
      ON

    ------ end ------

Marker lines name the loop selector positions (**LOOP** towards the future,
**POOL** towards the past).  Atom lines are the upper-cased atom names;
items render as NAME = VALUE, array cells as NAME[IDX] = VALUE, predicate
instances as NAME(ARG,...).  When a history is used as an input constraint,
a `!` prefix asserts the atom false at that instant; atoms that are not
listed are unconstrained, never false.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import EncodingError, HistoryError
from .formula import Atom

_HEADER_RE = re.compile(r"^-+\s+time\s+(\d+)\s+-+$", re.IGNORECASE)
_END_RE = re.compile(r"^-+\s+end\s+-+$", re.IGNORECASE)
_ARRAY_RE = re.compile(r"^([^\s()\[\]=]+)\[([^\[\]\s]+)\]\s*=\s*(\S+)$")
_ITEM_RE = re.compile(r"^([^\s()\[\]=]+)\s*=\s*(\S+)$")
_PRED_RE = re.compile(r"^([^\s()\[\]=]+)\((.*)\)$")
_PLAIN_RE = re.compile(r"^([^\s()\[\]=]+)$")


@dataclass(frozen=True)
class PartialHistory:
    """Facts (instant, atom, polarity) plus optional loop/pool pins."""

    facts: Tuple[Tuple[int, Atom, bool], ...] = ()
    loop_at: Optional[int] = None
    pool_at: Optional[int] = None

    def __post_init__(self):
        seen: Dict[Tuple[int, Atom], bool] = {}
        for instant, atom, polarity in self.facts:
            key = (instant, atom)
            if seen.get(key, polarity) != polarity:
                raise HistoryError(
                    f"contradictory facts for {atom.display} at time {instant}"
                )
            seen[key] = polarity

    def merged_with(self, other: "PartialHistory") -> "PartialHistory":
        return PartialHistory(
            self.facts + other.facts,
            other.loop_at if other.loop_at is not None else self.loop_at,
            other.pool_at if other.pool_at is not None else self.pool_at,
        )


@dataclass
class LassoTrace:
    """An ultimately periodic trace over instants 0..k."""

    k: int
    engine: str  # "mono" or "bi"
    atoms: Tuple[Atom, ...]
    valuations: Dict[Atom, Tuple[bool, ...]]
    loop_start: int
    pool_start: Optional[int] = None

    def __post_init__(self):
        if not (1 <= self.loop_start <= self.k):
            raise EncodingError(f"loop start {self.loop_start} outside 1..{self.k}")
        if self.engine == "bi" and self.pool_start is None:
            raise EncodingError("bi-infinite trace needs a past loop start")

    def holds(self, atom: Atom, t: int) -> bool:
        row = self.valuations.get(atom)
        return bool(row[t]) if row is not None else False

    def true_atoms(self, t: int) -> List[Atom]:
        return [a for a in self.atoms if self.valuations[a][t]]

    @property
    def period(self) -> int:
        return self.k - self.loop_start + 1


def decode(result, vm) -> LassoTrace:
    """Read a LassoTrace off a SAT model via the variable map."""
    if result.verdict != "SAT" or result.model is None:
        raise EncodingError("decode needs a SAT result with a model")
    model = result.model
    valuations = {
        atom: tuple(bool(model[vm.var(atom, t)]) for t in range(vm.k + 1))
        for atom in vm.atoms
    }
    loop = [i for i, v in vm.loop_selectors.items() if model[v]]
    if len(loop) != 1:
        raise EncodingError(
            f"model selects {len(loop)} future loop positions; encoder invariant broken"
        )
    pool_start = None
    if vm.engine == "bi":
        pool = [p for p, v in vm.pool_selectors.items() if model[v]]
        if len(pool) != 1:
            raise EncodingError(
                f"model selects {len(pool)} past loop positions; encoder invariant broken"
            )
        pool_start = pool[0]
    return LassoTrace(
        k=vm.k,
        engine=vm.engine,
        atoms=tuple(vm.atoms),
        valuations=valuations,
        loop_start=loop[0],
        pool_start=pool_start,
    )


def render_history(trace: LassoTrace, sink=None) -> str:
    """Render the section format; also writes to `sink` when given."""
    lines: List[str] = []
    for t in range(trace.k + 1):
        lines.append(f"------ time {t} ------")
        if t == trace.loop_start:
            lines.append("  **LOOP**")
        if trace.pool_start is not None and t == trace.pool_start:
            lines.append("  **POOL**")
        for atom in trace.true_atoms(t):
            lines.append(f"  {atom.display}")
        lines.append("")
    lines.append("------ end ------")
    text = "\n".join(lines) + "\n"
    if sink is not None:
        sink.write(text)
    return text


def _parse_atom_line(body: str, lineno: int) -> Atom:
    m = _ARRAY_RE.match(body)
    if m:
        return Atom(m.group(1).upper(), (_value(m.group(2)), _value(m.group(3))), "array")
    m = _ITEM_RE.match(body)
    if m:
        return Atom(m.group(1).upper(), (_value(m.group(2)),), "item")
    m = _PRED_RE.match(body)
    if m:
        args = tuple(_value(a.strip()) for a in m.group(2).split(",") if a.strip())
        return Atom(m.group(1).upper(), args)
    m = _PLAIN_RE.match(body)
    if m:
        return Atom(m.group(1).upper())
    raise HistoryError(f"line {lineno}: cannot parse atom line {body!r}")


def _value(text: str):
    body = text[1:] if text[:1] in "+-" else text
    if body.isdigit():
        return int(text)
    return text.upper()


def parse_history(text: str) -> PartialHistory:
    """Parse the render format (possibly partial) into constraint facts."""
    facts: List[Tuple[int, Atom, bool]] = []
    loop_at = None
    pool_at = None
    current: Optional[int] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        m = _HEADER_RE.match(line)
        if m:
            current = int(m.group(1))
            continue
        if _END_RE.match(line):
            current = None
            continue
        if current is None:
            raise HistoryError(f"line {lineno}: fact outside any time block")
        if line == "**LOOP**":
            loop_at = current
            continue
        if line == "**POOL**":
            pool_at = current
            continue
        polarity = True
        if line.startswith("!"):
            polarity = False
            line = line[1:].strip()
        facts.append((current, _parse_atom_line(line, lineno), polarity))
    return PartialHistory(tuple(facts), loop_at=loop_at, pool_at=pool_at)


def load_history(path) -> PartialHistory:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_history(fh.read())
