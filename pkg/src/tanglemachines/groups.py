"""Inner automorphism groups of finite racks and their abelianizations.

Groups are enumerated explicitly (desk-scale racks only), so every routine here
is a breadth-first closure capped by an element budget.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .config import default_budget
from .racks import RackTable

Perm = tuple[int, ...]


class GroupTooLarge(RuntimeError):
    pass


def compose(p: Perm, q: Perm) -> Perm:
    """``p o q``: apply ``q`` first."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def identity(n: int) -> Perm:
    return tuple(range(n))


def commutator(g: Perm, h: Perm) -> Perm:
    return compose(compose(g, h), compose(inverse(g), inverse(h)))


def closure(generators: Iterable[Perm], degree: int, budget: int | None = None) -> frozenset[Perm]:
    budget = default_budget().group_elements if budget is None else budget
    gens = list(dict.fromkeys(generators))
    e = identity(degree)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(g, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > budget:
                    raise GroupTooLarge(f"closure exceeds {budget} elements")
                queue.append(y)
    return frozenset(seen)


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Perm, ...]
    labels: tuple[str, ...]
    elements: frozenset[Perm] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_abelian(self) -> bool:
        return all(compose(a, b) == compose(b, a) for a in self.generators for b in self.generators)


def inner_group(r: RackTable, budget: int | None = None) -> PermGroup:
    """Inn(Q), generated by the right translations ``x -> x |> y``."""
    gens = tuple(r.right_translation(y) for y in range(r.size))
    labels = tuple(f"|>{y}" for y in range(r.size))
    return PermGroup(r.size, gens, labels, closure(gens, r.size, budget))


def derived_subgroup(group: PermGroup, budget: int | None = None) -> frozenset[Perm]:
    """Normal closure of the commutators of the generators."""
    gens = group.generators
    sub_gens = list(dict.fromkeys(commutator(a, b) for a in gens for b in gens))
    sub = closure(sub_gens, group.degree, budget)
    changed = True
    while changed:
        changed = False
        for s in list(sub_gens):
            for g in gens:
                c = compose(compose(g, s), inverse(g))
                if c not in sub:
                    sub_gens.append(c)
                    sub = closure(sub_gens, group.degree, budget)
                    changed = True
    return sub


# integer Smith normal form -------------------------------------------------

def smith_normal_form(rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[int], list[list[int]]]:
    """Diagonal of the Smith form of ``rows`` and the column transform ``V``.

    Row vectors ``x`` in generator coordinates map to quotient coordinates via
    ``x @ V``; the relation lattice maps onto the diagonal lattice.
    """
    a = [list(r) for r in rows]
    m = len(a)
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_col(src, dst, k):  # col[dst] += k * col[src]
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    diag = []
    t = 0
    while t < min(m, ncols):
        pivot = None
        for i in range(t, m):
            for j in range(t, ncols):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        swap_cols(t, j)
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, ncols):
                q = a[t][j] // p
                if q:
                    add_col(t, j, -q)
                if a[t][j]:
                    done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, ncols) if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            best = None
            for i in range(t, m):
                if a[i][t] and (best is None or abs(a[i][t]) < abs(a[best][t])):
                    best = i
            a[t], a[best] = a[best], a[t]
            bestc = None
            for j in range(t, ncols):
                if a[t][j] and (bestc is None or abs(a[t][j]) < abs(a[t][bestc])):
                    bestc = j
            swap_cols(t, bestc)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
        diag.append(a[t][t])
        t += 1
    diag += [0] * (ncols - len(diag))
    return diag, v


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def elementary_from_invariant(factors: Iterable[int]) -> list[int]:
    out = []
    for d in factors:
        out += [p**e for p, e in _prime_factors(d).items()]
    return sorted(out)


@dataclass(frozen=True)
class AbelianQuotient:
    """Ab(Inn(Q)) as ``Z/d_1 x ... x Z/d_k`` with a projection from Inn(Q)."""
    invariant_factors: tuple[int, ...]
    coset_of: dict = field(repr=False, compare=False)
    coset_coords: dict = field(repr=False, compare=False)
    generator_coords: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @property
    def elementary_divisors(self) -> list[int]:
        return elementary_from_invariant(self.invariant_factors)

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def project(self, g: Perm) -> tuple[int, ...]:
        return self.coset_coords[self.coset_of[g]]

    def add(self, a, b, k: int = 1):
        return tuple((x + k * y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def zero(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.invariant_factors)

    def element_order(self, a) -> int:
        from math import gcd
        out = 1
        for x, d in zip(a, self.invariant_factors):
            k = d // gcd(x, d)
            out = out * k // gcd(out, k)
        return out


def abelianize(group: PermGroup, budget: int | None = None) -> AbelianQuotient:
    derived = derived_subgroup(group, budget)
    coset_of: dict[Perm, int] = {}
    reps: list[Perm] = []
    for x in sorted(group.elements):
        if x in coset_of:
            continue
        label = len(reps)
        reps.append(x)
        for nrm in derived:
            coset_of[compose(x, nrm)] = label
    k = len(group.generators)
    gen_cosets = [coset_of[g] for g in group.generators]

    # Cayley graph of the quotient: tree words give coordinates, back edges relations
    e = coset_of[identity(group.degree)]
    word = {e: [0] * k}
    rel_rows = []
    queue = deque([e])
    mult = {}
    while queue:
        c = queue.popleft()
        rep = reps[c]
        for j, g in enumerate(group.generators):
            d = coset_of[compose(g, rep)]
            mult[c, j] = d
            step = list(word[c])
            step[j] += 1
            if d not in word:
                word[d] = step
                queue.append(d)
            else:
                rel = [s - t for s, t in zip(step, word[d])]
                if any(rel):
                    rel_rows.append(rel)
    diag, v = smith_normal_form(rel_rows, k)
    keep = [i for i, d in enumerate(diag) if d != 1]
    factors = tuple(diag[i] for i in keep)
    if any(d == 0 for d in factors):
        raise ArithmeticError("quotient of a finite group came out infinite")

    def coords(vec):
        full = [sum(vec[r] * v[r][c] for r in range(k)) for c in range(k)]
        return tuple(full[i] % diag[i] for i in keep)

    coset_coords = {c: coords(w) for c, w in word.items()}
    gen_coords = tuple(coset_coords[c] for c in gen_cosets)
    return AbelianQuotient(factors, coset_of, coset_coords, gen_coords)


def abelianized_inner(r: RackTable, budget: int | None = None) -> AbelianQuotient:
    return abelianize(inner_group(r, budget), budget)


def subgroup_elements(ab: AbelianQuotient, generators: Iterable[tuple[int, ...]]) -> frozenset:
    gens = [g for g in dict.fromkeys(generators) if any(g)]
    zero = ab.zero()
    seen = {zero}
    queue = deque([zero])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = ab.add(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def abelian_structure(ab: AbelianQuotient, elements: frozenset) -> list[int]:
    """Elementary divisors of a finite subgroup given by its element set."""
    order = len(elements)
    out = []
    for p, e in _prime_factors(order).items():
        ranks = [0]
        j = 1
        while ranks[-1] < e:  # stop once the p-part is exhausted
            count = sum(1 for h in elements if all((p**j * x) % d == 0 for x, d in zip(h, ab.invariant_factors)))
            ranks.append(_prime_factors(count).get(p, 0))
            j += 1
        # number of cyclic factors of order >= p^j is ranks[j] - ranks[j-1]
        at_least = [ranks[i] - ranks[i - 1] for i in range(1, len(ranks))] + [0]
        for i in range(len(at_least) - 1):
            out += [p ** (i + 1)] * (at_least[i] - at_least[i + 1])
    return sorted(out)
