import itertools
import random

import pytest
from generators import any_racks, machines, random_machine, random_sum
from hypothesis import given, settings
from hypothesis import strategies as st

from tanglemachines import colouring, racks
from tanglemachines.machine import (
    InconsistentColouring, Machine, OverlappingDomains, SkeletonMismatch, build, cancel_factor, components,
    connect_sum, validate,
)


def _satisfies(rack, colours, constraints):
    for v, w, a, s in constraints:
        want = colours[v] if a is None else rack.apply(colours[v], colours[a], s)
        if colours[w] != want:
            return False
    return True


def _brute(rack, regs, cons):
    for vals in itertools.product(range(rack.size), repeat=len(regs)):
        col = dict(zip(regs, vals))
        if _satisfies(rack, col, cons):
            yield col


@settings(max_examples=60, deadline=None)
@given(machines(any_racks, max_procs=2, max_len=3))
def test_solutions_match_brute_force(m):
    regs, cons = m.registers, m.constraints()
    expected = sorted(tuple(c[r] for r in regs) for c in _brute(m.rack, regs, cons))
    got = sorted(tuple(c[r] for r in regs) for c in colouring.solutions(m.rack, regs, cons))
    assert got == expected
    assert colouring.count(m.rack, regs, cons) == len(expected)


@settings(max_examples=40, deadline=None)
@given(machines(any_racks, max_procs=2, max_len=3), st.sampled_from([racks.dihedral(3), racks.alexander(5, 2),
                                                                   racks.constant_action([1, 2, 0])]))
def test_count_other_targets(m, target):
    regs, cons = m.registers, m.constraints()
    assert colouring.count(target, regs, cons) == sum(1 for _ in _brute(target, regs, cons))


@settings(max_examples=40, deadline=None)
@given(machines(max_procs=2, max_len=4), st.integers(0, 2**16))
def test_closest_is_optimal(m, seed):
    rng = random.Random(seed)
    target = {r: rng.randrange(m.rack.size) for r in m.registers}
    cons = m.constraints()
    best = colouring.closest(m.rack, m.registers, cons, target)
    assert best is not None and _satisfies(m.rack, best, cons)
    dist = sum(best[r] != target[r] for r in m.registers)
    assert dist == min(sum(c[r] != target[r] for r in m.registers)
                       for c in colouring.solutions(m.rack, m.registers, cons))


# machines -------------------------------------------------------------------------

def simple():
    return build(racks.dihedral(3), [("P", "open", ["a", "b", "c"]), ("Q", "open", ["x", "y"])],
                 [("x", [("a", 1)])], {"a": 0, "b": 2, "c": 2, "x": 1, "y": 1})


def test_validate_reports_violations():
    m = simple()
    assert validate(m).ok
    bad = m.replace(colours={**m.colours, "b": 1})
    rep = validate(bad)
    assert not rep.ok and rep.violations


def test_machine_rejects_bad_structure():
    with pytest.raises(ValueError):
        build(racks.dihedral(3), [("P", "open", ["a", "b"]), ("Q", "open", ["a", "c"])])
    with pytest.raises(ValueError):
        build(racks.dihedral(3), [("P", "open", ["a", "b"])], [("a", [("b", 1)])])  # b has no out-edge
    with pytest.raises(ValueError):
        build(racks.dihedral(3), [("P", "open", ["a", "b", "c"])], [("a", [("a", 1)]), ("c", [("a", 1)])])


def test_equality_ignores_interaction_order():
    m = build(racks.dihedral(3), [("P", "open", ["a", "b", "c"]), ("Q", "open", ["x", "y"])],
              [("x", [("a", 1)]), ("y", [("b", -1)])])
    n = build(racks.dihedral(3), [("P", "open", ["a", "b", "c"]), ("Q", "open", ["x", "y"])],
              [("y", [("b", -1)]), ("x", [("a", 1)])])
    assert m == n and hash(m) == hash(n)


def test_components():
    m = simple()
    assert components(m) == [[0, 1]]
    lone = m.replace(interactions=())
    assert components(lone) == [[0], [1]]


def test_connect_sum_errors():
    m = simple()
    with pytest.raises(OverlappingDomains):
        connect_sum(m, m)
    other = build(racks.dihedral(3), [("P", "open", ["a", "b"])], [], {"a": 0, "b": 0})
    with pytest.raises(SkeletonMismatch):
        connect_sum(m, other)
    # a register touched by both summands with different colours
    base = [("P", "open", ["a", "b", "c"]), ("Q", "open", ["x", "y"])]
    m1 = build(racks.dihedral(3), base, [("x", [("a", 1)])], {"a": 0, "b": 2, "c": 2, "x": 1, "y": 1})
    m2 = build(racks.dihedral(3), base, [("x", [("b", 1)])], {"a": 0, "b": 0, "c": 2, "x": 1, "y": 1})
    with pytest.raises(InconsistentColouring):
        connect_sum(m1, m2)


def test_cancel_everything_gives_plain_colouring():
    m = simple()
    plain = cancel_factor(m, [0])
    assert plain.interactions == ()
    assert validate(plain).ok
    # recolouring a alone is cheaper than making b and c follow it
    assert {r for r in m.registers if plain.colours[r] != m.colours[r]} == {"a"}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([racks.dihedral(3), racks.alexander(7, 3),
                                                   racks.conjugation(racks.symmetric_group_table(3))]))
def test_sum_cancel_round_trip(seed, rack):
    s = random_sum(random.Random(seed), rack)
    if s is None:
        return
    m1, m2, m = s
    assert validate(m).ok
    ks1 = [k for k, it in enumerate(m.interactions) if it in m1.interactions]
    ks2 = [k for k in range(len(m.interactions)) if k not in ks1]
    f1, f2 = cancel_factor(m, ks2), cancel_factor(m, ks1)
    assert validate(f1).ok and validate(f2).ok
    assert connect_sum(f1, f2) == m


@settings(max_examples=30, deadline=None)
@given(machines())
def test_cancel_nothing_is_identity(m):
    assert cancel_factor(m, []) == m
    assert isinstance(m, Machine)


def test_random_machines_validate():
    rng = random.Random(3)
    for _ in range(50):
        m = random_machine(rng, racks.dihedral(5))
        assert m is None or validate(m).ok
