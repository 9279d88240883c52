"""End-to-end randomized checks through the textual frontend.

Random spec files (items, arrays, quantified formulas with conditions, case
constructs, metric operators) are printed as text, parsed back, encoded and
solved; every SAT verdict must decode to a trace the oracle accepts, with
exactly one value per item and per array cell at every instant.
"""

import random

from gen import random_sugared
from lassosat.formula import (
    And,
    ArrayRef,
    Atom,
    Cond,
    Exists,
    Forall,
    Implies,
    ItemRef,
    Next,
    Not,
    Or,
    OrCase,
)
from lassosat.oracle import eval_lasso
from lassosat.pipeline import build_problem
from lassosat.pretty import formula_text
from lassosat.cnf import to_cnf
from lassosat.encoder import encode
from lassosat.sat_embedded import solve_embedded
from lassosat.specfile import parse_spec_text
from lassosat.trace import decode

ITEM_DOMAIN = (0, 1, 2)
ARR_VALUES = ("ON", "OFF")


def _leaf(rng):
    r = rng.random()
    if r < 0.4:
        return Atom(rng.choice("AB"))
    if r < 0.7:
        return ItemRef("ST", rng.choice(ITEM_DOMAIN))
    return ArrayRef("ARR", rng.choice((1, 2)), rng.choice(ARR_VALUES))


def _state_formula(rng, depth):
    if depth <= 0 or rng.random() < 0.35:
        return _leaf(rng)
    pick = rng.randrange(5)
    if pick == 0:
        return Not(_state_formula(rng, depth - 1))
    if pick == 1:
        return And(tuple(_state_formula(rng, depth - 1) for _ in range(2)))
    if pick == 2:
        return Or(tuple(_state_formula(rng, depth - 1) for _ in range(2)))
    if pick == 3:
        # quantified over the shared domain, optionally conditioned
        var = rng.choice(("X", "Y"))
        cond = Cond("<", (var, rng.choice((1, 2)))) if rng.random() < 0.5 else None
        body = Implies(ItemRef("ST", var), _state_formula(rng, depth - 1))
        cls = Forall if rng.random() < 0.5 else Exists
        return cls(var, ITEM_DOMAIN, body, cond)
    return Next(_state_formula(rng, depth - 1))


def _random_transition(rng):
    if rng.random() < 0.5:
        branches = tuple(
            (ItemRef("ST", v), Next(_state_formula(rng, 1))) for v in ITEM_DOMAIN[:2]
        )
        return OrCase((("X", ITEM_DOMAIN),), branches,
                      Next(ItemRef("ST", "X")))
    return Implies(_state_formula(rng, 1), Next(_state_formula(rng, 1)))


def _spec_text(rng):
    sections = [
        "(define-item st (0 1 2))",
        "(define-array arr (1 2) (on off))",
        "(declare a b)",
        f"(init {formula_text(_state_formula(rng, 2))})",
    ]
    for _ in range(rng.randint(1, 2)):
        sections.append(f"(trans {formula_text(_random_transition(rng))})")
    prop = random_sugared(rng, 2, ("A", "B"), max_offset=2)
    sections.append(f"(property {formula_text(prop)})")
    return "\n".join(sections)


def test_random_specs_end_to_end():
    rng = random.Random(2026)
    checked = 0
    sat_seen = 0
    while checked < 40:
        text = _spec_text(rng)
        doc = parse_spec_text(text)
        engine = rng.choice(["mono", "bi"])
        mode = rng.choice(["bsc", "bmc"])
        k = rng.randint(2, 4)
        problem = build_problem(doc, k, engine, mode)
        encoded = encode(problem)
        result = solve_embedded(to_cnf(encoded))
        checked += 1
        if result.verdict != "SAT":
            continue
        sat_seen += 1
        trace = decode(result, encoded.varmap)
        pos = 1 if engine == "mono" else 0
        assert eval_lasso(trace, problem.root, pos), text
        for tr_formula in problem.transitions:
            for t in range(k + 1):
                assert eval_lasso(trace, tr_formula, t), (text, t)
        for t in range(k + 1):
            st = [v for v in ITEM_DOMAIN
                  if trace.holds(Atom("ST", (v,), "item"), t)]
            assert len(st) == 1
            for idx in (1, 2):
                cell = [v for v in ARR_VALUES
                        if trace.holds(Atom("ARR", (idx, v), "array"), t)]
                assert len(cell) == 1
    assert sat_seen >= 10  # the generator must not be degenerate
