"""Formula AST: the core PLTL fragment plus the metric / quantifier / case sugar.

Core nodes survive desugaring and are what the encoder accepts:

    Atom  TrueF  FalseF  Not  And  Or  Implies  Iff
    Next  Yesterday  Zeta  Until  Since  Release  Trigger

Everything else (metric families with endpoint variants, existential and
universal finite quantification, and-case/or-case, finite-domain variable
references) is sugar removed by lassosat.desugar.

All nodes are frozen dataclasses, so formulas are immutable, hashable values
and can be shared freely; identical subtrees compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

Term = Union[int, str]  # atom arguments, domain elements, offsets (str = symbol or bound var)


class Formula:
    """Marker base class; all nodes derive from this."""

    __slots__ = ()


# ---------------------------------------------------------------------------
# core fragment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom(Formula):
    """Propositional letter, predicate instance, or lowered item/array cell.

    kind is "prop" for (-P- ...) atoms, "item" for NAME=VALUE cells (args =
    (value,)), "array" for NAME[IDX]=VALUE cells (args = (index, value)).
    """

    name: str
    args: Tuple[Term, ...] = ()
    kind: str = "prop"

    @property
    def key(self) -> str:
        """Compact, space-free identity used in DIMACS comments."""
        if self.kind == "item":
            return f"{self.name}={self.args[0]}"
        if self.kind == "array":
            return f"{self.name}[{self.args[0]}]={self.args[1]}"
        if self.args:
            return f"{self.name}({','.join(str(a) for a in self.args)})"
        return self.name

    @property
    def display(self) -> str:
        """History-file rendering (items and arrays get spaced '=' forms)."""
        if self.kind == "item":
            return f"{self.name} = {self.args[0]}"
        if self.kind == "array":
            return f"{self.name}[{self.args[0]}] = {self.args[1]}"
        return self.key


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    items: Tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    items: Tuple[Formula, ...]


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    sub: Formula


@dataclass(frozen=True)
class Yesterday(Formula):
    sub: Formula


@dataclass(frozen=True)
class Zeta(Formula):
    """Weak yesterday: true at the origin of mono-infinite time."""

    sub: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Since(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Trigger(Formula):
    left: Formula
    right: Formula


# ---------------------------------------------------------------------------
# sugar: the metric operator layer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Dist(Formula):
    """Signed distance: positive offsets look forward, negative backward."""

    sub: Formula
    offset: Term


@dataclass(frozen=True)
class Futr(Formula):
    sub: Formula
    offset: Term


@dataclass(frozen=True)
class Past(Formula):
    sub: Formula
    offset: Term


@dataclass(frozen=True)
class Lasts(Formula):
    sub: Formula
    offset: Term
    variant: str = "ee"  # ee / ei / ie / ii


@dataclass(frozen=True)
class Lasted(Formula):
    sub: Formula
    offset: Term
    variant: str = "ee"


@dataclass(frozen=True)
class WithinF(Formula):
    sub: Formula
    offset: Term
    variant: str = "ee"


@dataclass(frozen=True)
class WithinP(Formula):
    sub: Formula
    offset: Term
    variant: str = "ee"


@dataclass(frozen=True)
class NextTime(Formula):
    sub: Formula
    offset: Term
    variant: str = "ee"


@dataclass(frozen=True)
class LastTime(Formula):
    sub: Formula
    offset: Term
    variant: str = "ee"


@dataclass(frozen=True)
class Somf(Formula):
    sub: Formula
    variant: str = "e"  # e = strict, i = includes now


@dataclass(frozen=True)
class Somp(Formula):
    sub: Formula
    variant: str = "e"


@dataclass(frozen=True)
class Alwf(Formula):
    sub: Formula
    variant: str = "e"


@dataclass(frozen=True)
class Alwp(Formula):
    sub: Formula
    variant: str = "e"


@dataclass(frozen=True)
class Som(Formula):
    """Somewhere in time: past, present or future."""

    sub: Formula


@dataclass(frozen=True)
class Alw(Formula):
    """Always: every instant of the whole time domain."""

    sub: Formula


@dataclass(frozen=True)
class UntilVar(Formula):
    left: Formula
    right: Formula
    variant: str = "ie"  # plain until == until_ie


@dataclass(frozen=True)
class SinceVar(Formula):
    left: Formula
    right: Formula
    variant: str = "ie"


@dataclass(frozen=True)
class BoundedUntil(Formula):
    """until_xy_<=_<= (hi set) or until_xy_>= (hi None)."""

    left: Formula
    right: Formula
    lo: Term
    hi: Optional[Term]
    variant: str = "ie"


@dataclass(frozen=True)
class BoundedSince(Formula):
    left: Formula
    right: Formula
    lo: Term
    hi: Optional[Term]
    variant: str = "ie"


# ---------------------------------------------------------------------------
# sugar: quantifiers, cases, conditions, finite-domain references
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    domain: Tuple[Term, ...]
    body: Formula
    cond: Optional["Cond"] = None


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    domain: Tuple[Term, ...]
    body: Formula
    cond: Optional["Cond"] = None


@dataclass(frozen=True)
class Cond(Formula):
    """Expansion-time condition over bound variables and literals.

    op in {EQL, EQUAL, <, <=, NOT, AND, OR}; args are terms for the
    comparisons and nested Cond nodes for NOT/AND/OR.
    """

    op: str
    args: tuple


@dataclass(frozen=True)
class AndCase(Formula):
    bindings: Tuple[Tuple[str, Tuple[Term, ...]], ...]
    branches: Tuple[Tuple[Formula, Formula], ...]  # (guard, body) pairs
    else_body: Optional[Formula] = None


@dataclass(frozen=True)
class OrCase(Formula):
    bindings: Tuple[Tuple[str, Tuple[Term, ...]], ...]
    branches: Tuple[Tuple[Formula, Formula], ...]
    else_body: Optional[Formula] = None


@dataclass(frozen=True)
class ItemRef(Formula):
    """(name= value) before lowering to a one-hot Atom."""

    name: str
    value: Term


@dataclass(frozen=True)
class ArrayRef(Formula):
    """(name= index value) before lowering."""

    name: str
    index: Term
    value: Term


# ---------------------------------------------------------------------------
# structure helpers
# ---------------------------------------------------------------------------

TRUE = TrueF()
FALSE = FalseF()

_CORE_LEAF = (Atom, TrueF, FalseF)
_CORE_UNARY = (Not, Next, Yesterday, Zeta)
_CORE_BINARY = (Implies, Iff, Until, Since, Release, Trigger)

FUTURE_OPS = (Next, Until, Release)
PAST_OPS = (Yesterday, Zeta, Since, Trigger)


def children(f: Formula) -> Tuple[Formula, ...]:
    """Immediate subformulas of a core node (sugar nodes are not supported)."""
    if isinstance(f, _CORE_LEAF):
        return ()
    if isinstance(f, _CORE_UNARY):
        return (f.sub,)
    if isinstance(f, _CORE_BINARY):
        return (f.left, f.right)
    if isinstance(f, (And, Or)):
        return f.items
    raise TypeError(f"not a core formula node: {type(f).__name__}")


def is_core(f: Formula) -> bool:
    if isinstance(f, _CORE_LEAF):
        return True
    if isinstance(f, (_CORE_UNARY, _CORE_BINARY, And, Or)):
        return all(is_core(c) for c in children(f))
    return False


def subformulas(f: Formula):
    """Postorder iteration over distinct subformulas of a core formula."""
    seen = set()

    def walk(g):
        if g in seen:
            return
        for c in children(g):
            yield from walk(c)
        seen.add(g)
        yield g

    yield from walk(f)


def closure(formulas) -> list:
    """Ordered, de-duplicated list of all subformulas, children first."""
    out: list = []
    seen: set = set()
    for f in formulas:
        for g in subformulas(f):
            if g not in seen:
                seen.add(g)
                out.append(g)
    return out


def classify(f: Formula) -> str:
    """Partition tag for the encoder: atom / bool / future / past."""
    if isinstance(f, Atom):
        return "atom"
    if isinstance(f, FUTURE_OPS):
        return "future"
    if isinstance(f, PAST_OPS):
        return "past"
    if isinstance(f, (TrueF, FalseF, Not, And, Or, Implies, Iff)):
        return "bool"
    raise TypeError(f"not a core formula node: {type(f).__name__}")


def temporal_depth(f: Formula) -> Tuple[int, int]:
    """(future nesting, past nesting) of a core formula."""
    if isinstance(f, _CORE_LEAF):
        return (0, 0)
    futs, pasts = zip(*(temporal_depth(c) for c in children(f)))
    fut, past = max(futs), max(pasts)
    if isinstance(f, FUTURE_OPS):
        fut += 1
    elif isinstance(f, PAST_OPS):
        past += 1
    return (fut, past)


def conj(items) -> Formula:
    """n-ary conjunction; empty -> true, singleton -> the formula itself."""
    items = tuple(items)
    if not items:
        return TRUE
    if len(items) == 1:
        return items[0]
    return And(items)


def disj(items) -> Formula:
    items = tuple(items)
    if not items:
        return FALSE
    if len(items) == 1:
        return items[0]
    return Or(items)


def next_chain(f: Formula, n: int) -> Formula:
    for _ in range(n):
        f = Next(f)
    return f


def yesterday_chain(f: Formula, n: int) -> Formula:
    for _ in range(n):
        f = Yesterday(f)
    return f


def zeta_chain(f: Formula, n: int) -> Formula:
    for _ in range(n):
        f = Zeta(f)
    return f
