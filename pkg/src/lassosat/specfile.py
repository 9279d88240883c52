"""Spec file parser: s-expression forms -> validated SpecDocument.

Top-level sections:

    (define-item NAME DOMAIN)
    (define-array NAME INDEX-DOMAIN VALUE-DOMAIN)
    (declare ENTRY ...)          ; optional usage/arity declarations
    (init FORMULA)               ; at most once, holds at instant 0
    (trans FORMULA ...)          ; repeatable, each holds at every instant
    (property FORMULA)           ; at most once
    (history (at N FACT ...) ... (loop N) (pool N))
    (bound N) (engine mono|bi) (loop-free) (solver NAME)

A DOMAIN is a literal list of symbols/integers or (range LO HI), which
expands to the ascending integer list LO..HI.  Formulas use the operator
spellings listed in lassosat.specfile.OPERATORS; (name= v) references a
declared item and (name= i v) a declared array.  Conditions (eql/equal/</<=/
not/and/or) may appear wherever a formula is expected and are evaluated when
quantifiers expand; symbols not bound by an enclosing quantifier are treated
as constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .declarations import ArrayDecl, Declarations, ItemDecl
from .errors import SpecFormatError
from .formula import (
    Alw,
    Alwf,
    Alwp,
    And,
    AndCase,
    ArrayRef,
    Atom,
    BoundedSince,
    BoundedUntil,
    Cond,
    Dist,
    Exists,
    FALSE,
    Forall,
    Formula,
    Futr,
    Iff,
    Implies,
    ItemRef,
    Lasted,
    Lasts,
    LastTime,
    Next,
    NextTime,
    Not,
    Or,
    OrCase,
    Past,
    Release,
    Since,
    SinceVar,
    Som,
    Somf,
    Somp,
    Trigger,
    TRUE,
    Until,
    UntilVar,
    WithinF,
    WithinP,
    Yesterday,
    Zeta,
)
from .sexpr import SAtom, SExpr, SList, read_sexprs, to_text
from .trace import PartialHistory

_VARIANTS4 = ("ee", "ie", "ei", "ii")
_COND_OPS = {"EQL", "EQUAL", "<", "<=", "NOT", "AND", "OR"}

# operator name -> (kind, payload); kinds drive the dispatch in _formula
OPERATORS = {
    "&&": ("nary", And),
    "||": ("nary", Or),
    "!!": ("not", None),
    "->": ("binary", Implies),
    "<->": ("binary", Iff),
    "NEXT": ("unary", Next),
    "YESTERDAY": ("unary", Yesterday),
    "ZETA": ("unary", Zeta),
    "UNTIL": ("binary", Until),
    "SINCE": ("binary", Since),
    "RELEASE": ("binary", Release),
    "TRIGGER": ("binary", Trigger),
    "FUTR": ("offset", Futr),
    "PAST": ("offset", Past),
    "DIST": ("offset", Dist),
    "SOM": ("som", Som),
    "ALW": ("som", Alw),
    "-P-": ("atom", None),
    "-A-": ("quant", Forall),
    "-E-": ("quant", Exists),
    "AND-CASE": ("case", AndCase),
    "OR-CASE": ("case", OrCase),
    "TRUE": ("const", TRUE),
    "FALSE": ("const", FALSE),
}

for _fam, _cls in (("LASTS", Lasts), ("LASTED", Lasted), ("WITHINF", WithinF),
                   ("WITHINP", WithinP), ("NEXTTIME", NextTime), ("LASTTIME", LastTime)):
    OPERATORS[_fam] = ("metric", (_cls, "ee"))
    for _v in _VARIANTS4:
        OPERATORS[f"{_fam}_{_v.upper()}"] = ("metric", (_cls, _v))

for _fam, _cls in (("SOMF", Somf), ("SOMP", Somp), ("ALWF", Alwf), ("ALWP", Alwp)):
    OPERATORS[_fam] = ("somvar", (_cls, "e"))
    OPERATORS[f"{_fam}_E"] = ("somvar", (_cls, "e"))
    OPERATORS[f"{_fam}_I"] = ("somvar", (_cls, "i"))

for _fam, _cls, _bcls in (("UNTIL", UntilVar, BoundedUntil), ("SINCE", SinceVar, BoundedSince)):
    for _v in _VARIANTS4:
        OPERATORS[f"{_fam}_{_v.upper()}"] = ("uvariant", (_cls, _v))
        OPERATORS[f"{_fam}_{_v.upper()}_<=_<="] = ("bounded2", (_bcls, _v))
        OPERATORS[f"{_fam}_{_v.upper()}_>="] = ("bounded1", (_bcls, _v))


@dataclass
class SpecDocument:
    """A parsed, validated spec file."""

    declarations: Declarations = field(default_factory=Declarations)
    init: Optional[Formula] = None
    transitions: List[Formula] = field(default_factory=list)
    property: Optional[Formula] = None
    history: Optional[PartialHistory] = None
    bound: Optional[int] = None
    engine: Optional[str] = None
    loop_free: bool = False
    solver: Optional[str] = None


def _err(msg: str, node: SExpr) -> SpecFormatError:
    return SpecFormatError(msg, node.line, node.col)


def _symbol(node: SExpr, what: str) -> str:
    if not (isinstance(node, SAtom) and node.is_symbol):
        raise _err(f"expected a symbol for {what}, got {to_text(node)}", node)
    return node.value


def _term(node: SExpr):
    if isinstance(node, SAtom):
        return node.value
    raise _err(f"expected a constant or variable, got {to_text(node)}", node)


def _int(node: SExpr, what: str) -> int:
    if isinstance(node, SAtom) and node.is_int:
        return node.value
    raise _err(f"expected an integer for {what}, got {to_text(node)}", node)


def _domain(node: SExpr):
    """Literal domain list, with (range lo hi) expanded in place."""
    if not isinstance(node, SList):
        raise _err(f"expected a domain list, got {to_text(node)}", node)
    if (len(node) == 3 and isinstance(node[0], SAtom) and node[0].value == "RANGE"):
        lo, hi = _int(node[1], "range"), _int(node[2], "range")
        return tuple(range(lo, hi + 1))
    return tuple(_term(item) for item in node.items)


class _FormulaParser:
    """Recursive-descent formula parser with inline declaration checks."""

    def __init__(self, decls: Declarations):
        self.decls = decls

    def parse(self, node: SExpr, scope=frozenset()) -> Formula:
        if isinstance(node, SAtom):
            if node.value == "TRUE":
                return TRUE
            if node.value == "FALSE":
                return FALSE
            raise _err(
                f"bare symbol {node.value} is not a formula; write (-P- {node.value})",
                node,
            )
        if len(node) == 0:
            raise _err("empty list is not a formula", node)
        head = node[0]
        if not (isinstance(head, SAtom) and head.is_symbol):
            raise _err(f"formula must start with an operator, got {to_text(head)}", head)
        name = head.value

        entry = OPERATORS.get(name)
        if entry is not None:
            return self._dispatch(name, entry, node, scope)
        if name in _COND_OPS:
            return self._cond(node, scope)
        if name.endswith("=") and len(name) > 1:
            return self._reference(name[:-1], node, scope)
        raise _err(f"unknown operator {name}", head)

    def _args(self, node: SList, n: int, name: str):
        if len(node) != n + 1:
            raise _err(f"{name} expects {n} argument(s), got {len(node) - 1}", node)
        return node.items[1:]

    def _dispatch(self, name, entry, node, scope) -> Formula:
        kind, payload = entry
        if kind == "const":
            self._args(node, 0, name)
            return payload
        if kind == "nary":
            return payload(tuple(self.parse(x, scope) for x in node.items[1:]))
        if kind == "not":
            (sub,) = self._args(node, 1, name)
            return Not(self.parse(sub, scope))
        if kind == "unary":
            (sub,) = self._args(node, 1, name)
            return payload(self.parse(sub, scope))
        if kind == "som":
            (sub,) = self._args(node, 1, name)
            return payload(self.parse(sub, scope))
        if kind == "binary":
            a, b = self._args(node, 2, name)
            return payload(self.parse(a, scope), self.parse(b, scope))
        if kind == "offset":
            sub, off = self._args(node, 2, name)
            return payload(self.parse(sub, scope), _term(off))
        if kind == "metric":
            cls, variant = payload
            sub, off = self._args(node, 2, name)
            return cls(self.parse(sub, scope), _term(off), variant)
        if kind == "somvar":
            cls, variant = payload
            (sub,) = self._args(node, 1, name)
            return cls(self.parse(sub, scope), variant)
        if kind == "uvariant":
            cls, variant = payload
            a, b = self._args(node, 2, name)
            return cls(self.parse(a, scope), self.parse(b, scope), variant)
        if kind == "bounded2":
            cls, variant = payload
            lo, hi, a, b = self._args(node, 4, name)
            return cls(self.parse(a, scope), self.parse(b, scope),
                       _term(lo), _term(hi), variant)
        if kind == "bounded1":
            cls, variant = payload
            lo, a, b = self._args(node, 3, name)
            return cls(self.parse(a, scope), self.parse(b, scope),
                       _term(lo), None, variant)
        if kind == "atom":
            if len(node) < 2:
                raise _err("(-P- ...) needs a proposition name", node)
            pname = _symbol(node[1], "proposition name")
            args = tuple(_term(x) for x in node.items[2:])
            self.decls.register_atom(pname, len(args))
            return Atom(pname, args)
        if kind == "quant":
            return self._quant(payload, node, scope)
        if kind == "case":
            return self._case(payload, node, scope)
        raise _err(f"unknown operator kind for {name}", node)

    def _quant(self, cls, node, scope) -> Formula:
        if len(node) not in (4, 5):
            raise _err("quantifier expects (var domain [condition] body)", node)
        var = _symbol(node[1], "quantifier variable")
        domain = _domain(node[2])
        if not domain:
            raise _err("quantifier domain is empty", node[2])
        inner = scope | {var}
        if len(node) == 5:
            cond = self._cond(node[3], inner)
            if not isinstance(cond, Cond):
                raise _err("expected a condition before the quantifier body", node[3])
            return cls(var, domain, self.parse(node[4], inner), cond)
        return cls(var, domain, self.parse(node[3], inner), None)

    def _cond(self, node: SExpr, scope) -> Formula:
        if not isinstance(node, SList) or len(node) == 0:
            raise _err(f"expected a condition, got {to_text(node)}", node)
        op = _symbol(node[0], "condition operator")
        if op not in _COND_OPS:
            raise _err(f"unknown condition operator {op}", node[0])
        if op in ("EQL", "EQUAL", "<", "<="):
            if len(node) != 3:
                raise _err(f"({op} ...) expects 2 terms", node)
            return Cond(op, (_term(node[1]), _term(node[2])))
        if op == "NOT":
            if len(node) != 2:
                raise _err("(not ...) expects 1 condition", node)
            return Cond(op, (self._cond(node[1], scope),))
        return Cond(op, tuple(self._cond(x, scope) for x in node.items[1:]))

    def _reference(self, name, node, scope) -> Formula:
        if name in self.decls.items:
            if len(node) != 2:
                raise _err(f"({name.lower()}= ...) expects one value", node)
            return ItemRef(name, _term(node[1]))
        if name in self.decls.arrays:
            if len(node) != 3:
                raise _err(f"({name.lower()}= ...) expects index and value", node)
            return ArrayRef(name, _term(node[1]), _term(node[2]))
        raise _err(f"reference to undeclared item/array {name}", node)

    def _case(self, cls, node, scope) -> Formula:
        if len(node) < 2 or not isinstance(node[1], SList):
            raise _err("case construct expects a bindings list first", node)
        raw = node[1].items
        if len(raw) % 2 != 0:
            raise _err("case bindings must alternate variable and domain", node[1])
        bindings = []
        inner = set(scope)
        for i in range(0, len(raw), 2):
            var = _symbol(raw[i], "case variable")
            dom = _domain(raw[i + 1])
            if not dom:
                raise _err("case binding domain is empty", raw[i + 1])
            bindings.append((var, dom))
            inner.add(var)
        inner = frozenset(inner)
        branches = []
        else_body = None
        for br in node.items[2:]:
            if not isinstance(br, SList) or len(br) != 2:
                raise _err("case branch must be (guard body) or (else body)", br)
            if isinstance(br[0], SAtom) and br[0].value == "ELSE":
                if else_body is not None:
                    raise _err("multiple else branches", br)
                else_body = self.parse(br[1], inner)
            else:
                if else_body is not None:
                    raise _err("else branch must come last", br)
                branches.append((self.parse(br[0], inner), self.parse(br[1], inner)))
        return cls(tuple(bindings), tuple(branches), else_body)


def parse_formula(node: SExpr, decls: Optional[Declarations] = None) -> Formula:
    """Parse one formula form (standalone use and tests)."""
    return _FormulaParser(decls if decls is not None else Declarations()).parse(node)


def _parse_history_section(node: SList, parser: _FormulaParser) -> PartialHistory:
    facts = []
    loop_at = None
    pool_at = None
    for entry in node.items[1:]:
        if not isinstance(entry, SList) or len(entry) < 2:
            raise _err("history entry must be (at N fact...), (loop N) or (pool N)", entry)
        head = _symbol(entry[0], "history entry")
        if head == "LOOP":
            loop_at = _int(entry[1], "loop instant")
        elif head == "POOL":
            pool_at = _int(entry[1], "pool instant")
        elif head == "AT":
            instant = _int(entry[1], "history instant")
            if instant < 0:
                raise _err("history instant must be >= 0", entry[1])
            for form in entry.items[2:]:
                positive = True
                if (isinstance(form, SList) and len(form) == 2
                        and isinstance(form[0], SAtom) and form[0].value == "!!"):
                    positive = False
                    form = form[1]
                atom = _history_atom(form, parser)
                facts.append((instant, atom, positive))
        else:
            raise _err(f"unknown history entry {head}", entry)
    return PartialHistory(tuple(facts), loop_at=loop_at, pool_at=pool_at)


def _history_atom(form: SExpr, parser: _FormulaParser) -> Atom:
    if isinstance(form, SAtom) and form.is_symbol:
        parser.decls.register_atom(form.value, 0)
        return Atom(form.value)
    parsed = parser.parse(form)
    if isinstance(parsed, Atom):
        return parsed
    if isinstance(parsed, ItemRef):
        return parser.decls.lower_item(parsed.name, parsed.value)
    if isinstance(parsed, ArrayRef):
        return parser.decls.lower_array(parsed.name, parsed.index, parsed.value)
    raise _err("history facts must be atoms or item/array references", form)


def parse_spec(forms) -> SpecDocument:
    """Assemble and validate a SpecDocument from top-level forms."""
    doc = SpecDocument()
    parser = _FormulaParser(doc.declarations)
    for form in forms:
        if not isinstance(form, SList) or len(form) == 0:
            raise _err(f"top-level form expected, got {to_text(form)}", form)
        head = _symbol(form[0], "section keyword")
        if head == "DEFINE-ITEM":
            if len(form) != 3:
                raise _err("(define-item NAME DOMAIN)", form)
            doc.declarations.add_item(
                ItemDecl(_symbol(form[1], "item name"), _domain(form[2]))
            )
        elif head == "DEFINE-ARRAY":
            if len(form) != 4:
                raise _err("(define-array NAME INDEX-DOMAIN VALUE-DOMAIN)", form)
            doc.declarations.add_array(
                ArrayDecl(
                    _symbol(form[1], "array name"), _domain(form[2]), _domain(form[3])
                )
            )
        elif head == "DECLARE":
            for entry in form.items[1:]:
                _declare_entry(entry, parser)
        elif head == "INIT":
            if doc.init is not None:
                raise _err("duplicate init section", form)
            if len(form) != 2:
                raise _err("(init FORMULA)", form)
            doc.init = parser.parse(form[1])
        elif head == "TRANS":
            if len(form) < 2:
                raise _err("(trans FORMULA ...)", form)
            doc.transitions.extend(parser.parse(x) for x in form.items[1:])
        elif head == "PROPERTY":
            if doc.property is not None:
                raise _err("duplicate property section", form)
            if len(form) != 2:
                raise _err("(property FORMULA)", form)
            doc.property = parser.parse(form[1])
        elif head == "HISTORY":
            if doc.history is not None:
                raise _err("duplicate history section", form)
            doc.history = _parse_history_section(form, parser)
        elif head == "BOUND":
            if len(form) != 2:
                raise _err("(bound N)", form)
            doc.bound = _int(form[1], "bound")
            if doc.bound < 1:
                raise _err("bound must be >= 1", form[1])
        elif head == "ENGINE":
            if len(form) != 2:
                raise _err("(engine mono|bi)", form)
            engine = _symbol(form[1], "engine").lower()
            if engine not in ("mono", "bi"):
                raise _err(f"unknown engine {engine}", form[1])
            doc.engine = engine
        elif head == "LOOP-FREE":
            doc.loop_free = True
        elif head == "SOLVER":
            if len(form) != 2:
                raise _err("(solver NAME)", form)
            doc.solver = _symbol(form[1], "solver").lower()
        else:
            raise _err(f"unknown section keyword {head}", form[0])
    return doc


def _declare_entry(entry: SExpr, parser: _FormulaParser):
    if isinstance(entry, SAtom) and entry.is_symbol:
        parser.decls.register_atom(entry.value, 0)
        return
    parsed = parser.parse(entry)
    if isinstance(parsed, Atom):
        return
    if isinstance(parsed, ItemRef):
        parser.decls.lower_item(parsed.name, parsed.value)
        return
    if isinstance(parsed, ArrayRef):
        parser.decls.lower_array(parsed.name, parsed.index, parsed.value)
        return
    raise _err("declare entries must be atoms or item/array references", entry)


def parse_spec_text(text: str) -> SpecDocument:
    return parse_spec(read_sexprs(text))


def load_spec(path) -> SpecDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_spec_text(fh.read())
