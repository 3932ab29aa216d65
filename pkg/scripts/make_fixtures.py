"""Regenerate the canonical ``.tmd`` fixtures in ``fixtures/``.

Colourings that are not written out explicitly are completed with the
colouring solver, so every fixture validates by construction.
"""
from __future__ import annotations

import argparse
import pathlib

from tanglemachines import colouring, dsl
from tanglemachines.machine import build, validate
from tanglemachines.racks import dihedral

ROOT = pathlib.Path(__file__).resolve().parents[1]


def complete(m, fixed):
    """First valid colouring extending ``fixed``, preferring nonconstant ones."""
    sols = colouring.solutions(m.rack, m.registers, m.constraints(), fixed)
    first = None
    for s in sols:
        first = first or s
        if len(set(s.values())) > 1:
            return m.replace(colours=s)
    if first is None:
        raise ValueError("no colouring extends the given colours")
    return m.replace(colours=first)



def linking_example():
    d3 = dihedral(3)
    p1 = ["x11", "x12", "x13", "x14", "x15"]
    p2 = ["x21", "x24", "x23", "x22"]
    inters = [
        ("x15", [("x11", -1)]), ("x24", [("x12", 1)]), ("x11", [("x13", -1)]), ("x24", [("x14", -1)]),
        ("x13", [("x15", -1)]), ("x22", [("x21", 1)]), ("x11", [("x24", 1)]), ("x21", [("x23", 1)]),
        ("x24", [("x22", 1)]),
    ]
    m = build(d3, [("P1", "closed", p1), ("P2", "closed", p2)], inters)
    return complete(m, {})


def linking_number(flip: bool):
    d3 = dihedral(3)
    procs = [("R", "open", ["r"])]
    pats = []
    colours = {"r": 1}
    for i in range(1, 11):
        procs.append((f"E{i}", "open", [f"v{i}", f"w{i}"]))
        pats.append((f"v{i}", -1 if flip and i == 10 else 1))
        colours[f"v{i}"] = 0
    m = build(d3, procs, [("r", pats)])
    return complete(m, colours)


def trefoil():
    m = build(dihedral(3), [("K", "closed", ["x", "y", "z"])],
              [("z", [("x", 1)]), ("x", [("y", 1)]), ("y", [("z", 1)])])
    return complete(m, {"x": 0, "y": 1})


def square1():
    regs = ["A", "B", "C", "D", "E", "F"]
    col = dict(zip(regs, [0, 1, 0, 2, 1, 2]))
    m = build(dihedral(3), [("P", "closed", regs)], [
        ("F", [("A", -1)]), ("D", [("B", 1)]), ("B", [("C", 1)]), ("B", [("F", -1)]), ("C", [("D", 1)]), ("A", [("E", -1)]),
    ], col)
    return m


def square2():
    regs = ["A", "B", "B2", "C", "D", "E", "F"]
    col = dict(zip(regs, [0, 1, 1, 0, 2, 1, 2]))
    m = build(dihedral(3), [("P", "closed", regs)], [
        ("F", [("A", -1)]), ("D", [("B2", 1)]), ("B2", [("C", 1)]), ("C", [("D", 1)]), ("A", [("E", -1)]),
        ("B", [("F", -1)]),
    ], col)
    return m


def _ring(colours, labels):
    regs = [f"R{i}" for i in range(1, len(colours) + 1)]
    inters = [(a, [(s, 1)]) for s, a in labels]
    return build(dihedral(3), [("P", "closed", regs)], inters, dict(zip(regs, colours)))


def connect_sum_fixtures():
    m = _ring([2, 1, 1, 2, 0, 1, 1, 0],
              [("R1", "R8"), ("R3", "R5"), ("R4", "R3"), ("R5", "R4"), ("R7", "R1"), ("R8", "R2")])
    m1 = _ring([2, 1, 1, 1, 1, 1, 1, 0], [("R1", "R8"), ("R7", "R1"), ("R8", "R2")])
    m2 = _ring([1, 1, 1, 2, 0, 1, 1, 1], [("R3", "R5"), ("R4", "R3"), ("R5", "R4")])
    return m, m1, m2


def div_pair():
    left = _ring([2, 1, 2, 0, 1, 0],
                 [("R1", "R6"), ("R2", "R4"), ("R3", "R2"), ("R4", "R3"), ("R5", "R1"), ("R6", "R2")])
    right = _ring([2, 1, 1, 2, 0, 1, 0],
                  [("R1", "R7"), ("R3", "R5"), ("R4", "R2"), ("R5", "R4"), ("R6", "R1"), ("R7", "R3")])
    return left, right


def r2_display():
    m = build(dihedral(3), [("P", "open", ["a", "b", "c"]), ("Y", "open", ["y"])],
              [("y", [("a", 1), ("b", -1)])])
    return complete(m, {"a": 0, "y": 1})


def r3_display():
    procs = [("X1", "open", ["x10", "x11", "x12"]), ("X2", "open", ["x20", "x21", "x22"]),
             ("Y", "open", ["y0", "y1"]), ("Z", "open", ["z"])]
    m = build(dihedral(5), procs, [("z", [("x10", 1), ("x20", 1), ("y0", 1)]), ("y1", [("x11", 1), ("x21", 1)])])
    return complete(m, {"x10": 0, "x20": 1, "y0": 2, "z": 4})


def unit_twist():
    return build(dihedral(3), [("U", "closed", ["a", "b"])], [("b", [("a", 1)]), ("a", [("b", -1)])],
                 {"a": 0, "b": 0})


def two_factorizations():
    """Two distinct prime factorizations; found by seeded random search over dihedral(3) machines."""
    procs = [("P0", "closed", ["r0", "r1", "r2", "r3", "r4", "r5"]), ("P1", "open", ["r6", "r7", "r8", "r9"])]
    inters = [("r6", [("r1", 1)]), ("r7", [("r3", 1)]), ("r8", [("r4", -1), ("r8", -1)]), ("r9", [("r5", -1)])]
    colours = dict(zip([r for _, _, regs in procs for r in regs], [0, 0, 1, 1, 0, 1, 2, 2, 2, 2]))
    return build(dihedral(3), procs, inters, colours)


def minimal():
    return build(dihedral(3), [("P", "open", ["a", "b"])], [], {"a": 0, "b": 0})


def all_fixtures() -> dict:
    cs, cs1, cs2 = connect_sum_fixtures()
    left, right = div_pair()
    out = {
        "minimal": minimal(),
        "linking_example": linking_example(),
        "linking_number": linking_number(False),
        "linking_number_flipped": linking_number(True),
        "trefoil": trefoil(),
        "square1": square1(),
        "square2": square2(),
        "connect_sum": cs,
        "connect_sum_m1": cs1,
        "connect_sum_m2": cs2,
        "div_left": left,
        "div_right": right,
        "r2_display": r2_display(),
        "r3_display": r3_display(),
        "unit_twist": unit_twist(),
        "two_factorizations": two_factorizations(),
    }
    for name, m in out.items():
        report = validate(m)
        if not report.ok:
            raise ValueError(f"{name}: {report.violations}")
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(ROOT / "fixtures"))
    args = ap.parse_args(argv)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, m in all_fixtures().items():
        (out / f"{name}.tmd").write_text(dsl.serialize(m), encoding="utf-8")
        print(f"wrote {name}.tmd")


if __name__ == "__main__":
    main()
