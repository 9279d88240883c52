"""Bijection between (subformula, instant) pairs and solver variables.

Variables are allocated in closure order, atoms first, one contiguous block
of k+1 instants per subformula, so decoding a model and inverting an id are
both O(1).  After the primary blocks come the encoder-internal traversal
copies (higher loop passes of past-dependent subformulas, and for the bi
engine backward passes of future-dependent ones), then the loop selector
variables: L1..Lk for the future loop and, for the bi-infinite engine,
P1..Pk for the past loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import EncodingError
from .formula import Atom, Formula, classify, closure


@dataclass
class VarMap:
    k: int
    engine: str  # "mono" or "bi"
    closure: Tuple[Formula, ...]
    atoms: Tuple[Atom, ...]
    base: Dict[Formula, int]
    copy_base: Dict[tuple, int]  # (formula, family "r"/"l", copy >= 1) -> id
    loop_selectors: Dict[int, int]  # loop position i -> variable id
    pool_selectors: Dict[int, int]
    partitions: Dict[str, Tuple[Formula, ...]]
    num_atoms: int
    max_var: int
    root_var: Optional[int] = None
    assertion_instant: int = 0

    def var(self, f: Formula, t: int) -> int:
        """The solver variable of subformula f at instant t (spec: call)."""
        if not 0 <= t <= self.k:
            raise EncodingError(f"instant {t} outside 0..{self.k}")
        b = self.base.get(f)
        if b is None:
            raise EncodingError("formula is not in the closure")
        return b + t

    # spec names this operation `call`
    call = var

    def var_copy(self, f: Formula, family: str, d: int, t: int) -> int:
        """Traversal-copy variable; copy 0 is the primary block."""
        if d == 0:
            return self.var(f, t)
        b = self.copy_base.get((f, family, d))
        if b is None:
            raise EncodingError(f"no {family}-copy {d} allocated for this formula")
        if not 0 <= t <= self.k:
            raise EncodingError(f"instant {t} outside 0..{self.k}")
        return b + t

    def back_call(self, x: int) -> Tuple[Formula, int]:
        """Invert var(): which (subformula, instant) produced variable x."""
        if not 1 <= x <= len(self.closure) * (self.k + 1):
            raise EncodingError(f"variable {x} was not produced by call")
        idx, t = divmod(x - 1, self.k + 1)
        return self.closure[idx], t

    def back_call_time(self, x: int) -> int:
        return self.back_call(x)[1]


def build_varmap(
    formulas,
    k: int,
    engine: str,
    extra_atoms=(),
    with_selectors: bool = True,
    copies: Optional[Dict[Formula, Tuple[int, int]]] = None,
) -> VarMap:
    """Allocate variables for the closure of `formulas` plus `extra_atoms`.

    `copies` maps a closure member to its (right, left) traversal copy
    counts; copy variables are allocated after every primary block.
    """
    if k < 1:
        raise EncodingError(f"bound k={k} must be >= 1")
    clo = closure(formulas)
    atoms: List[Atom] = []
    seen = set()
    for a in extra_atoms:
        if a not in seen:
            seen.add(a)
            atoms.append(a)
    rest: List[Formula] = []
    for f in clo:
        if isinstance(f, Atom):
            if f not in seen:
                seen.add(f)
                atoms.append(f)
        else:
            rest.append(f)

    bools = tuple(f for f in rest if classify(f) == "bool")
    futures = tuple(f for f in rest if classify(f) == "future")
    pasts = tuple(f for f in rest if classify(f) == "past")
    ordered: Tuple[Formula, ...] = tuple(atoms) + bools + futures + pasts

    base: Dict[Formula, int] = {}
    nxt = 1
    for f in ordered:
        base[f] = nxt
        nxt += k + 1

    copy_base: Dict[tuple, int] = {}
    if copies:
        for f in ordered:
            nr, nl = copies.get(f, (0, 0))
            for d in range(1, nr + 1):
                copy_base[(f, "r", d)] = nxt
                nxt += k + 1
            for e in range(1, nl + 1):
                copy_base[(f, "l", e)] = nxt
                nxt += k + 1

    loop_selectors: Dict[int, int] = {}
    pool_selectors: Dict[int, int] = {}
    if with_selectors:
        for i in range(1, k + 1):
            loop_selectors[i] = nxt
            nxt += 1
        if engine == "bi":
            for p in range(1, k + 1):
                pool_selectors[p] = nxt
                nxt += 1

    return VarMap(
        k=k,
        engine=engine,
        closure=ordered,
        atoms=tuple(atoms),
        base=base,
        copy_base=copy_base,
        loop_selectors=loop_selectors,
        pool_selectors=pool_selectors,
        partitions={
            "prop": tuple(atoms),
            "bool": bools,
            "future": futures,
            "past": pasts,
        },
        num_atoms=len(atoms),
        max_var=nxt - 1,
    )
