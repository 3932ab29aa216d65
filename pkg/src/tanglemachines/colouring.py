"""Backtracking solver for the colouring law on a fixed skeleton.

A constraint ``(v, w, agent, sign)`` says ``colour(w) = colour(v) |>^sign colour(agent)``;
``agent is None`` is a plain edge.  Known agent + either endpoint determines
the other endpoint, which is what drives propagation.
"""
from __future__ import annotations

import math
from collections import Counter
from typing import Iterator, Mapping, Sequence

from .racks import RackTable

Constraint = tuple[str, str, "str | None", int]


class _Problem:
    def __init__(self, rack: RackTable, registers: Sequence[str], constraints: Sequence[Constraint]):
        self.rack = rack
        self.registers = list(registers)
        self.constraints = list(constraints)
        self.touching: dict[str, list[int]] = {r: [] for r in self.registers}
        for i, (v, w, a, _) in enumerate(self.constraints):
            for r in {v, w, a} - {None}:
                self.touching[r].append(i)

    def propagate(self, colours: dict[str, int], start: Sequence[str]) -> bool:
        op, inv = self.rack.op, self.rack.inv_op
        queue = list(start)
        while queue:
            r = queue.pop()
            for i in self.touching[r]:
                v, w, a, s = self.constraints[i]
                cv, cw = colours.get(v), colours.get(w)
                if a is None:
                    ca = None
                else:
                    ca = colours.get(a)
                    if ca is None:
                        continue
                if cv is not None:
                    want = cv if a is None else (op if s > 0 else inv)[cv][ca]
                    if cw is None:
                        colours[w] = want
                        queue.append(w)
                    elif cw != want:
                        return False
                elif cw is not None:
                    colours[v] = cw if a is None else (inv if s > 0 else op)[cw][ca]
                    queue.append(v)
        return True


def solutions(
    rack: RackTable,
    registers: Sequence[str],
    constraints: Sequence[Constraint],
    fixed: Mapping[str, int] | None = None,
) -> Iterator[dict[str, int]]:
    """Every colouring satisfying ``constraints`` and extending ``fixed``."""
    prob = _Problem(rack, registers, constraints)
    start = dict(fixed or {})
    if not prob.propagate(start, list(start)):
        return

    def search(colours):
        free = next((r for r in prob.registers if r not in colours), None)
        if free is None:
            yield colours
            return
        for c in range(rack.size):
            nxt = dict(colours)
            nxt[free] = c
            if prob.propagate(nxt, [free]):
                yield from search(nxt)

    yield from search(start)


def affine_parameters(rack: RackTable) -> tuple[int, int] | None:
    """``(n, t)`` when ``x |> y = (1-t)x + ty (mod n)``, else None."""
    if rack.kind == "alexander":
        return rack.params
    if rack.kind == "dihedral":
        return rack.params[0], 2
    if rack.kind == "trivial":
        return rack.params[0], 0
    return None


def count(rack: RackTable, registers: Sequence[str], constraints: Sequence[Constraint]) -> int:
    """Number of colourings satisfying ``constraints``.

    Affine racks count solutions of a linear system mod n through the Smith
    form; other racks are counted per connected piece by search.
    """
    affine = affine_parameters(rack)
    if affine is not None:
        return _count_linear(*affine, registers, constraints)
    total = 1
    for regs, cons in _pieces(registers, constraints):
        total *= _count_search(rack, regs, cons)
        if total == 0:
            break
    return total


def _count_linear(n: int, t: int, registers, constraints) -> int:
    from .groups import smith_normal_form
    idx = {r: i for i, r in enumerate(registers)}
    rows = []
    for v, w, a, s in constraints:
        row = [0] * len(registers)
        if a is None:
            row[idx[w]] += 1
            row[idx[v]] -= 1
        elif s > 0:  # w = (1-t) v + t a
            row[idx[w]] += 1
            row[idx[v]] -= 1 - t
            row[idx[a]] -= t
        else:  # v = (1-t) w + t a
            row[idx[v]] += 1
            row[idx[w]] -= 1 - t
            row[idx[a]] -= t
        rows.append(row)
    diag, _ = smith_normal_form(rows, len(registers)) if rows else ([], None)
    diag = list(diag) + [0] * (len(registers) - len(diag))
    out = 1
    for d in diag:
        out *= math.gcd(d, n)
    return out


def _pieces(registers, constraints):
    """Split into independent subproblems joined by shared registers."""
    parent = {r: r for r in registers}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v, w, a, _ in constraints:
        for r in (w, a):
            if r is not None:
                parent[find(r)] = find(v)
    groups: dict[str, tuple[list, list]] = {}
    for r in registers:
        groups.setdefault(find(r), ([], []))[0].append(r)
    for c in constraints:
        groups[find(c[0])][1].append(c)
    return list(groups.values())


def _count_search(rack: RackTable, registers, constraints) -> int:
    prob = _Problem(rack, _agents_first(registers, constraints), constraints)

    def search(colours) -> int:
        free = next((r for r in prob.registers if r not in colours), None)
        if free is None:
            return 1
        total = 0
        for c in range(rack.size):
            nxt = dict(colours)
            nxt[free] = c
            if prob.propagate(nxt, [free]):
                total += search(nxt)
        return total

    return search({})


def _agents_first(registers, constraints) -> list[str]:
    """Branch on frequent agents first so that propagation fires early."""
    freq = Counter(a for _, _, a, _ in constraints if a is not None)
    pos = {r: i for i, r in enumerate(registers)}
    return sorted(registers, key=lambda r: (-freq[r], pos[r]))


def closest(
    rack: RackTable,
    registers: Sequence[str],
    constraints: Sequence[Constraint],
    target: Mapping[str, int],
    weights: Mapping[str, int] | None = None,
) -> dict[str, int] | None:
    """A valid colouring of least total weight of registers disagreeing with ``target``.

    Every register weighs 1 unless ``weights`` says otherwise.  Branch and
    bound; values are tried target-first then ascending, and the first optimum
    in that order is returned, so the result is deterministic.
    """
    prob = _Problem(rack, registers, constraints)
    weights = weights or {}
    best: list = [None, float("inf")]

    def cost(colours):
        return sum(weights.get(r, 1) for r, c in colours.items() if target.get(r, c) != c)

    def search(colours):
        d = cost(colours)
        if d >= best[1]:
            return
        free = next((r for r in prob.registers if r not in colours), None)
        if free is None:
            best[0], best[1] = colours, d
            return
        first = target.get(free)
        order = ([first] if first is not None else []) + [c for c in range(rack.size) if c != first]
        for c in order:
            nxt = dict(colours)
            nxt[free] = c
            if prob.propagate(nxt, [free]):
                search(nxt)
            if best[1] == 0:
                return

    search({})
    return best[0]
