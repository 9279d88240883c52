import pytest

from lassosat.errors import EncodingError
from lassosat.formula import Atom, Next, Not, Since, Until, Yesterday
from lassosat.varmap import build_varmap

P, Q = Atom("P"), Atom("Q")
ROOT = Until(Not(P), Next(Yesterday(Q)))


def test_call_is_deterministic_and_injective():
    vm = build_varmap([ROOT], 3, "mono")
    seen = {}
    for f in vm.closure:
        for t in range(4):
            v = vm.var(f, t)
            assert v == vm.call(f, t)
            assert v not in seen
            seen[v] = (f, t)
    assert len(seen) == len(vm.closure) * 4


def test_back_call_inverts_call():
    vm = build_varmap([ROOT], 3, "mono")
    for f in (P, ROOT, Next(Yesterday(Q))):
        for t in (0, 2, 3):
            assert vm.back_call(vm.var(f, t)) == (f, t)
            assert vm.back_call_time(vm.var(f, t)) == t


def test_instant_out_of_range():
    vm = build_varmap([ROOT], 3, "mono")
    with pytest.raises(EncodingError, match="outside"):
        vm.var(P, 4)
    with pytest.raises(EncodingError, match="outside"):
        vm.var(P, -1)


def test_unknown_formula_and_unknown_id():
    vm = build_varmap([ROOT], 3, "mono")
    with pytest.raises(EncodingError, match="not in the closure"):
        vm.var(Atom("ZZZ"), 0)
    with pytest.raises(EncodingError, match="not produced"):
        vm.back_call(vm.max_var + 1)


def test_partitions_disjoint_and_cover():
    vm = build_varmap([ROOT, Since(P, Q)], 4, "mono")
    parts = vm.partitions
    union = set(parts["prop"]) | set(parts["bool"]) | set(parts["future"]) | set(parts["past"])
    assert union == set(vm.closure)
    total = sum(len(p) for p in parts.values())
    assert total == len(vm.closure)
    assert set(parts["prop"]) == {P, Q}
    assert Until(Not(P), Next(Yesterday(Q))) in parts["future"]
    assert Yesterday(Q) in parts["past"]
    assert Not(P) in parts["bool"]


def test_selectors_allocated_after_blocks():
    vm = build_varmap([ROOT], 3, "bi")
    assert sorted(vm.loop_selectors) == [1, 2, 3]
    assert sorted(vm.pool_selectors) == [1, 2, 3]
    assert min(vm.loop_selectors.values()) > len(vm.closure) * 4
    assert vm.max_var == max(vm.pool_selectors.values())


def test_extra_atoms_lead_ordering():
    vm = build_varmap([ROOT], 2, "mono", extra_atoms=(Atom("Z"), P))
    assert vm.atoms[0] == Atom("Z")
    assert vm.atoms[1] == P
    assert vm.num_atoms == 3  # Z, P, Q


def test_copy_blocks():
    caps = {Yesterday(Q): (2, 0)}
    vm = build_varmap([Yesterday(Q)], 3, "mono", copies=caps)
    base = vm.var(Yesterday(Q), 0)
    c1 = vm.var_copy(Yesterday(Q), "r", 1, 0)
    c2 = vm.var_copy(Yesterday(Q), "r", 2, 0)
    assert len({base, c1, c2}) == 3
    assert vm.var_copy(Yesterday(Q), "r", 0, 2) == base + 2
    with pytest.raises(EncodingError, match="no r-copy"):
        vm.var_copy(Yesterday(Q), "r", 3, 0)
