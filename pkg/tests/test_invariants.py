import itertools
import random

import pytest
from generators import FIXTURES, any_racks, machines, r3_machine, random_sum
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tanglemachines import dsl, racks
from tanglemachines import invariants as inv
from tanglemachines.machine import build
from tanglemachines.rewrite import ALL_KINDS, EQUIVALENCE_KINDS, Move, apply, enumerate_sites, random_walk


def load(name):
    return dsl.load(FIXTURES / f"{name}.tmd")


def test_linking_example_values():
    m = load("linking_example")
    assert inv.linking(m).vector("x11") == (-1, 1)
    assert inv.linking_matrix(m, framed=True) == [[3, 1], [0, 3]]
    assert inv.linking_matrix(m, framed=False) == [[0, 1], [0, 0]]
    # unframed vectors drop the agent's own process
    assert inv.linking(m, framed=False).vector("x11") == (0, 1)


def test_linking_numbers_and_colour_linking():
    a, b = load("linking_number"), load("linking_number_flipped")
    assert inv.total_linking_number(a, "r") == 10
    assert inv.total_linking_number(b, "r") == 8
    assert inv.colour_linking(a)["r"] == (2,)
    assert inv.colour_linking(b)["r"] == (2,)
    assert inv.distinguish(a, b).distinguished


@settings(max_examples=200, deadline=None)
@given(machines(any_racks), st.data())
def test_single_moves_keep_fingerprint(m, data):
    kinds = [k for k in EQUIVALENCE_KINDS if m.rack.is_quandle or not k.startswith("R1")]
    kind = data.draw(st.sampled_from(kinds))
    moves = enumerate_sites(m, kind)
    assume(moves)
    mv = data.draw(st.sampled_from(moves))
    assert inv.fingerprint(apply(m, mv)) == inv.fingerprint(m)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([racks.dihedral(3), racks.dihedral(5), racks.alexander(7, 3),
                                                   racks.constant_action([1, 2, 0])]))
def test_r3_keeps_fingerprint(seed, rack):
    m = r3_machine(random.Random(seed), rack)
    assume(m is not None)
    fp = inv.fingerprint(m)
    for mv in enumerate_sites(m, "R3Forward"):
        assert inv.fingerprint(apply(m, mv)) == fp


@settings(max_examples=40, deadline=None)
@given(machines(any_racks), st.integers(0, 10**6))
def test_walks_keep_fingerprint(m, seed):
    fp = inv.fingerprint(m)
    out = random_walk(m, 150, seed=seed).machine
    assert inv.fingerprint(out) == fp


def test_r1_changes_framed_diagonal_only():
    m = build(racks.dihedral(3), [("P", "open", ["a", "b"])], [], {"a": 1, "b": 1})
    out = apply(m, Move("R1Insert", ("a",), ("source", 1)))
    assert inv.linking_matrix(out, framed=True) == [[1]]
    assert inv.linking_matrix(out, framed=False) == [[0]]
    assert inv.fingerprint(out) == inv.fingerprint(m)  # quandle: unframed by default


def test_false_moves_can_change_invariants():
    left, right = load("div_left"), load("div_right")
    assert inv.distinguish(left, right, framed=True).distinguished
    changed = 0
    for m in (left, right, load("linking_number")):
        for kind in ("FalseJoin", "FalseResolve"):
            for mv in enumerate_sites(m, kind):
                if inv.fingerprint(apply(m, mv), framed=True) != inv.fingerprint(m, framed=True):
                    changed += 1
    assert changed > 0


def test_false_kinds_are_not_equivalences():
    assert set(ALL_KINDS) - set(EQUIVALENCE_KINDS) == {"FalseJoin", "FalseResolve"}


def test_boundary_colours_up_to_automorphism():
    m = build(racks.dihedral(3), [("P", "open", ["a", "b"]), ("Q", "open", ["x", "y"])], [],
              {"a": 2, "b": 2, "x": 1, "y": 1})
    assert inv.boundary_colours(m) == [(2, 2), (1, 1)]
    assert inv.canonical_boundary(m.rack, [(2, 2), (1, 1)]) == ((0, 0), (1, 1))
    shifted = apply(m, Move("RackAutomorphism", ("global",), (0, 1)))
    assert inv.fingerprint(shifted) == inv.fingerprint(m)


def test_uncoloured_machine_is_rejected():
    m = build(racks.dihedral(3), [("P", "open", ["a", "b"])])
    with pytest.raises(inv.UncolouredRegister):
        inv.boundary_colours(m)


@settings(max_examples=60, deadline=None)
@given(machines(any_racks, max_procs=2, max_len=3),
       st.sampled_from([racks.dihedral(3), racks.alexander(5, 3), racks.constant_action([1, 2, 0])]))
def test_colouring_count_brute_force(m, target):
    regs = m.registers
    brute = 0
    for vals in itertools.product(range(target.size), repeat=len(regs)):
        c = dict(zip(regs, vals))
        if all(c[w] == (c[v] if a is None else target.apply(c[v], c[a], s)) for v, w, a, s in m.constraints()):
            brute += 1
    assert inv.colouring_count(m, target) == brute


def test_rack_presentation():
    m = load("r3_display")
    gens, rels = inv.rack_presentation(m)
    assert gens == m.registers
    assert len(rels) == len(m.edges())
    assert "x12 = x11 |> y1" in rels


def test_unit_interactions():
    m = load("unit_twist")
    assert inv.syntactic_nonunit(m) == 0
    assert all(inv.is_unit_interaction(m, k) for k in range(len(m.interactions)))
    assert inv.syntactic_nonunit(load("square2")) == 6


@settings(max_examples=40, deadline=None)
@given(machines())
def test_nonunit_count_bounds(m):
    syn, best = inv.nonunit_count(m, 1)
    assert syn == inv.syntactic_nonunit(m)
    assert 0 <= best <= syn


def test_reachable_records_traces():
    m = load("r3_display")
    seen = inv.reachable(m, 1)
    assert list(seen[m]) == []
    for x, trace in seen.items():
        assert len(trace) <= 1
        y = m
        for mv in trace:
            y = apply(y, mv)
        assert y == x


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([racks.dihedral(3), racks.alexander(7, 3),
                                                   racks.constant_action([1, 2, 0])]))
def test_linking_and_nonunit_are_additive(seed, rack):
    s = random_sum(random.Random(seed), rack)
    assume(s is not None)
    m1, m2, m = s
    l1, l2, l = inv.linking(m1), inv.linking(m2), inv.linking(m)
    for r in m.registers:
        assert l.vector(r) == tuple(a + b for a, b in zip(l1.vector(r), l2.vector(r)))
    assert inv.syntactic_nonunit(m) == inv.syntactic_nonunit(m1) + inv.syntactic_nonunit(m2)


def test_distinguish_walked_machine_is_not_distinguished():
    m = load("linking_example")
    out = random_walk(m, 300, seed=2).machine
    v = inv.distinguish(m, out)
    assert not v.distinguished
    assert str(v) == "indistinguishable by this suite"


def test_distinguish_up_to_process_order():
    m = load("linking_example")
    swapped = m.replace(processes=tuple(reversed(m.processes)))
    assert not inv.distinguish(m, swapped).distinguished


def test_report_to_dict():
    d = inv.fingerprint(load("trefoil"), kmax=2).to_dict()
    assert d["capacity"]["cap"] == [1, 1]
    assert "linking_matrix" in d and "colouring_counts" in d
