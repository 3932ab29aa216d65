"""Finite racks and quandles stored as operation tables.

Elements are the dense indices ``0..n-1``.  ``op[x][y]`` is ``x |> y`` and
``inv_op[x][y]`` is ``x <| y``, the inverse of right translation by ``y``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence


class RackError(ValueError):
    pass


class AxiomViolation(RackError):
    def __init__(self, message: str, witness: tuple[int, ...]):
        super().__init__(f"{message}: witness {witness}")
        self.witness = witness


class BadParameter(RackError):
    pass


class IndexOutOfRange(RackError, IndexError):
    pass


Table = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RackTable:
    size: int
    op: Table
    kind: str = "explicit"
    params: tuple = ()
    inv_op: Table = field(init=False, repr=False, compare=False)
    is_quandle: bool = field(init=False, compare=False)

    def __post_init__(self):
        n = self.size
        if n < 1:
            raise BadParameter("rack size must be positive")
        if len(self.op) != n or any(len(row) != n for row in self.op):
            raise AxiomViolation("table is not n x n", (n,))
        for row in self.op:
            for v in row:
                if not (0 <= v < n):
                    raise AxiomViolation("table entry out of range", (v,))
        inv = [[-1] * n for _ in range(n)]
        for y in range(n):
            seen = {}
            for x in range(n):
                z = self.op[x][y]
                if z in seen:
                    raise AxiomViolation("right translation is not a bijection", (seen[z], x, y))
                seen[z] = x
                inv[z][y] = x
        _check_self_distributive(self.op)
        object.__setattr__(self, "inv_op", tuple(tuple(r) for r in inv))
        object.__setattr__(self, "is_quandle", all(self.op[x][x] == x for x in range(n)))

    def apply(self, x: int, y: int, sign: int = 1) -> int:
        return rack_apply(self, x, y, sign)

    def right_translation(self, y: int, sign: int = 1) -> tuple[int, ...]:
        """The permutation ``x -> x |> y`` (or ``x <| y`` for sign -1)."""
        table = self.op if sign > 0 else self.inv_op
        return tuple(table[x][y] for x in range(self.size))

    def describe(self) -> str:
        if self.kind == "explicit":
            return "explicit " + " | ".join(" ".join(map(str, row)) for row in self.op)
        if self.kind == "conjugation" and len(self.params) != 1:
            k = int(round(len(self.params) ** 0.5))
            rows = [self.params[i * k:(i + 1) * k] for i in range(k)]
            return "conjugation table " + " | ".join(" ".join(map(str, row)) for row in rows)
        return " ".join([self.kind, *map(str, self.params)])


def _check_self_distributive(op: Table) -> None:
    n = len(op)
    for a in range(n):
        row_a = op[a]
        for b in range(n):
            row_ab = op[row_a[b]]
            row_b = op[b]
            for c in range(n):
                if row_ab[c] != op[row_a[c]][row_b[c]]:
                    raise AxiomViolation("self-distributivity fails", (a, b, c))


def rack_apply(r: RackTable, x: int, y: int, sign: int = 1) -> int:
    if not (0 <= x < r.size and 0 <= y < r.size):
        raise IndexOutOfRange(f"element out of range for rack of size {r.size}: {(x, y)}")
    return r.op[x][y] if sign > 0 else r.inv_op[x][y]


# builders ----------------------------------------------------------------

def alexander(n: int, t: int) -> RackTable:
    """Affine quandle ``x |> y = (1-t)x + ty  (mod n)``.

    Right translation by ``y`` is ``x -> (1-t)x + ty``, bijective exactly when
    ``1-t`` is a unit mod ``n``.
    """
    if n < 1:
        raise BadParameter("n must be positive")
    if math.gcd((1 - t) % n, n) != 1 and n > 1:
        raise BadParameter(f"1 - t = {1 - t} is not a unit mod {n}")
    op = tuple(tuple(((1 - t) * x + t * y) % n for y in range(n)) for x in range(n))
    return RackTable(n, op, "alexander", (n, t))


def dihedral(n: int) -> RackTable:
    """Dihedral quandle ``x |> y = 2y - x (mod n)``."""
    if n < 1:
        raise BadParameter("n must be positive")
    op = tuple(tuple((2 * y - x) % n for y in range(n)) for x in range(n))
    return RackTable(n, op, "dihedral", (n,))


def trivial(n: int) -> RackTable:
    if n < 1:
        raise BadParameter("n must be positive")
    op = tuple(tuple(x for _ in range(n)) for x in range(n))
    return RackTable(n, op, "trivial", (n,))


def constant_action(perm: Sequence[int]) -> RackTable:
    """Permutation rack ``x |> y = perm[x]``; a quandle only for the identity."""
    perm = tuple(perm)
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise BadParameter(f"not a permutation: {perm}")
    op = tuple(tuple(perm[x] for _ in range(n)) for x in range(n))
    return RackTable(n, op, "constant", perm)


def conjugation(group_table: Sequence[Sequence[int]], label: str | None = None) -> RackTable:
    """Conjugation quandle of a finite group: ``g |> h = h^-1 g h``.

    ``group_table[a][b]`` is the product ``ab``.
    """
    mul = tuple(tuple(row) for row in group_table)
    n = len(mul)
    if n < 1 or any(len(row) != n for row in mul):
        raise BadParameter("group table must be square and nonempty")
    identity = next((e for e in range(n) if all(mul[e][a] == a and mul[a][e] == a for a in range(n))), None)
    if identity is None:
        raise BadParameter("group table has no identity")
    for a, b, c in itertools.product(range(n), repeat=3):
        if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
            raise BadParameter(f"group table is not associative at {(a, b, c)}")
    inverse = []
    for a in range(n):
        inv = [b for b in range(n) if mul[a][b] == identity]
        if len(inv) != 1:
            raise BadParameter(f"element {a} has no unique inverse")
        inverse.append(inv[0])
    op = tuple(tuple(mul[mul[inverse[h]][g]][h] for h in range(n)) for g in range(n))
    params = (label,) if label else tuple(x for row in mul for x in row)
    return RackTable(n, op, "conjugation", params)


def explicit(table: Sequence[Sequence[int]]) -> RackTable:
    op = tuple(tuple(int(v) for v in row) for row in table)
    return RackTable(len(op), op, "explicit", ())


def symmetric_group_table(k: int) -> list[list[int]]:
    """Multiplication table of S_k, elements in lexicographic order of permutations.

    The product is composition, ``(ab)(i) = a(b(i))``.
    """
    perms = list(itertools.permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    return [[index[tuple(a[b[i]] for i in range(k))] for b in perms] for a in perms]


def cyclic_group_table(k: int) -> list[list[int]]:
    return [[(a + b) % k for b in range(k)] for a in range(k)]


def build_rack(kind: str, *params) -> RackTable:
    """Dispatch on a rack kind name, as used by the text format."""
    if kind == "dihedral":
        return dihedral(int(params[0]))
    if kind == "alexander":
        return alexander(int(params[0]), int(params[1]))
    if kind == "trivial":
        return trivial(int(params[0]))
    if kind == "constant":
        return constant_action([int(p) for p in params])
    if kind == "conjugation":
        if len(params) == 1 and isinstance(params[0], str) and params[0][:1] in "SC":
            name = params[0]
            k = int(name[1:])
            table = symmetric_group_table(k) if name[0] == "S" else cyclic_group_table(k)
            return conjugation(table, label=name)
        return conjugation(params[-1])
    if kind == "explicit":
        return explicit(params[0])
    raise BadParameter(f"unknown rack kind {kind!r}")


# structure ----------------------------------------------------------------

def generated_subrack(r: RackTable, elements) -> frozenset[int]:
    """Closure of ``elements`` under both rack operations."""
    found = set(elements)
    frontier = list(found)
    while frontier:
        new = []
        for a in frontier:
            for b in list(found):
                for c in (r.op[a][b], r.op[b][a], r.inv_op[a][b], r.inv_op[b][a]):
                    if c not in found:
                        found.add(c)
                        new.append(c)
        frontier = new
    return frozenset(found)


def generating_set(r: RackTable) -> list[int]:
    gens: list[int] = []
    covered: frozenset[int] = frozenset()
    for x in range(r.size):
        if x not in covered:
            gens.append(x)
            covered = generated_subrack(r, gens)
    return gens


def automorphisms(r: RackTable) -> list[tuple[int, ...]]:
    """All rack automorphisms, by depth-first assignment of generator images."""
    n = r.size
    result = []

    def search(phi: dict[int, int]):
        if len(phi) == n:
            result.append(tuple(phi[x] for x in range(n)))
            return
        g = min(x for x in range(n) if x not in phi)
        used = set(phi.values())
        for c in range(n):
            if c in used:
                continue
            ext = _extend(r, phi, g, c)
            if ext is not None:
                search(ext)

    search({})
    return sorted(result)


def _extend(r: RackTable, phi: dict[int, int], g: int, c: int) -> dict[int, int] | None:
    """Close ``phi + {g: c}`` under the homomorphism rule; None on conflict."""
    phi = dict(phi)
    phi[g] = c
    images = set(phi.values())
    if len(images) != len(phi):
        return None
    frontier = [g]
    while frontier:
        new = []
        for a in frontier:
            for b in list(phi):
                for table in (r.op, r.inv_op):
                    for x, y in ((a, b), (b, a)):
                        z = table[x][y]
                        img = table[phi[x]][phi[y]]
                        if z in phi:
                            if phi[z] != img:
                                return None
                        else:
                            if img in images:
                                return None
                            phi[z] = img
                            images.add(img)
                            new.append(z)
        frontier = new
    return phi
