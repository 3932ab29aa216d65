"""Connect-sum splits, bounded prime factorization and complexity bounds.

A split of a presentation is a bipartition ``(A1, A2)`` of its interactions
such that cancelling either side leaves a valid factor, the factors keep the
machine's colours where their own interactions act, and their connect sum
gives the machine back.  Search is exhaustive at a fixed presentation and
bounded in depth across presentations, so primality here always means "no
split found at this depth".
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

from .config import default_budget
from .invariants import MINIMIZE_KINDS, is_unit_interaction, nonunit_count, reachable, syntactic_nonunit
from .machine import (
    InconsistentColouring, InconsistentRecolouring, Machine, MachineError, cancel_factor, connect_sum, touched,
    validate,
)
from .rewrite import Move, StaleSite, apply


@dataclass(frozen=True)
class Factorization:
    machine: Machine
    blocks: tuple[tuple[int, ...], ...]
    factors: tuple[Machine, ...]
    units: tuple[bool, ...]
    trace: tuple[Move, ...] = ()
    heuristic: bool = False

    @property
    def nonunit_blocks(self) -> int:
        return sum(1 for u in self.units if not u)

    def reconstruct(self) -> Machine:
        return reduce(connect_sum, self.factors)

    def to_dict(self) -> dict:
        its = self.machine.interactions
        return {
            "blocks": [
                {"interactions": [_describe(self.machine, k) for k in b], "unit": u}
                for b, u in zip(self.blocks, self.units)
            ],
            "nonunit_blocks": self.nonunit_blocks,
            "certificate": [mv.to_dict() for mv in self.trace],
            "heuristic": self.heuristic,
            "interaction_count": len(its),
        }


def _describe(m: Machine, k: int) -> str:
    it = m.interactions[k]
    pats = ", ".join(f"{p.source}->{m.succ[p.source]}{'+' if p.sign > 0 else '-'}" for p in it.patients)
    return f"{it.agent}: {pats}"


def is_unit(m: Machine) -> bool:
    return syntactic_nonunit(m) == 0


def _factor(m: Machine, block, cache: dict):
    """Factor carrying ``block``, or None when it cannot keep its colours."""
    block = tuple(sorted(block))
    if block in cache:
        return cache[block]
    rest = [k for k in range(len(m.interactions)) if k not in set(block)]
    try:
        f = cancel_factor(m, rest)
    except InconsistentRecolouring:
        f = None
    if f is not None:
        if not validate(f).ok or any(f.colours[r] != m.colours[r] for r in touched(m, block)):
            f = None
    cache[block] = f
    return f


def _agent_groups(m: Machine) -> list[tuple[int, ...]]:
    groups: dict[str, list[int]] = {}
    for k, it in enumerate(m.interactions):
        groups.setdefault(it.agent, []).append(k)
    return [tuple(v) for v in groups.values()]


def _valid_partition(m: Machine, blocks, cache: dict):
    factors = []
    for b in blocks:
        f = _factor(m, b, cache)
        if f is None:
            return None
        factors.append(f)
    try:
        if reduce(connect_sum, factors) != m:
            return None
    except (InconsistentColouring, MachineError):
        return None
    return factors


def _canonical(blocks) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def _make(m: Machine, blocks, factors, trace=(), heuristic=False) -> Factorization:
    order = sorted(range(len(blocks)), key=lambda i: sorted(blocks[i]))
    blocks = tuple(tuple(sorted(blocks[i])) for i in order)
    factors = tuple(factors[i] for i in order)
    units = tuple(all(is_unit_interaction(m, k) for k in b) for b in blocks)
    return Factorization(m, blocks, factors, units, tuple(trace), heuristic)


def _bipartitions(m: Machine, ks: Sequence[int], limit: int):
    """Two-block splits of the interaction set ``ks``; interactions of one agent stay together."""
    groups = [g for g in _agent_groups(m) if set(g) <= set(ks)]
    heuristic = len(groups) > limit
    if heuristic:
        groups = groups[:limit - 1] + [tuple(k for g in groups[limit - 1:] for k in g)]
    out = []
    rest = groups[1:]
    for mask in range(2 ** len(rest) - 1):
        a1 = list(groups[0]) + [k for i, g in enumerate(rest) if mask >> i & 1 for k in g]
        a2 = [k for k in ks if k not in set(a1)]
        out.append((tuple(sorted(a1)), tuple(sorted(a2))))
    return out, heuristic


def detect_splits(m: Machine, limit: int | None = None) -> list[Factorization]:
    """Every two-block split of this presentation, in canonical order."""
    limit = default_budget().split_interactions if limit is None else limit
    if len(m.interactions) < 2:
        return []
    cache: dict = {}
    pairs, heuristic = _bipartitions(m, range(len(m.interactions)), limit)
    out = []
    for a1, a2 in pairs:
        factors = _valid_partition(m, (a1, a2), cache)
        if factors is not None:
            out.append(_make(m, (a1, a2), factors, heuristic=heuristic))
    out.sort(key=lambda f: f.blocks)
    return out


def maximal_partitions(m: Machine, limit: int | None = None) -> list[tuple[tuple[int, ...], ...]]:
    """All valid partitions reached by splitting blocks until none splits further."""
    limit = default_budget().split_interactions if limit is None else limit
    n = len(m.interactions)
    if n == 0:
        return [()]
    cache: dict = {}
    start = (tuple(range(n)),)
    seen = {start}
    stack = [start]
    maximal = []
    while stack:
        part = stack.pop()
        refined = False
        for i, b in enumerate(part):
            if len(b) < 2:
                continue
            for b1, b2 in _bipartitions(m, b, limit)[0]:
                new = _canonical(part[:i] + part[i + 1:] + (b1, b2))
                if new in seen:
                    refined = True
                    continue
                if _valid_partition(m, new, cache) is not None:
                    refined = True
                    seen.add(new)
                    stack.append(new)
        if not refined:
            maximal.append(part)
    return sorted(set(maximal))


def prime_factorizations(m: Machine, depth: int = 0) -> list[Factorization]:
    """Maximal refinements found at each presentation within ``depth`` moves."""
    out = []
    for x, trace in reachable(m, depth).items():
        for part in maximal_partitions(x):
            factors = _valid_partition(x, part, {}) if part else [x]
            if factors is None:
                continue
            out.append(_make(x, part or ((),), factors, trace))
    return out


def prime_factorization(m: Machine, depth: int = 0) -> Factorization:
    """The refinement with the most non-unit blocks; ties go to the least partition.

    Only presentations where that count is largest compete, and the input
    presentation wins ties so the certificate is as short as possible.
    """
    cands = prime_factorizations(m, depth)
    best = max(f.nonunit_blocks for f in cands)
    pool = [f for f in cands if f.nonunit_blocks == best]
    pool.sort(key=lambda f: (len(f.trace), f.blocks))
    return pool[0]


def common_refinement(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Meet of two partitions of the same interaction set."""
    out = []
    for x in a:
        for y in b:
            z = set(x) & set(y)
            if z:
                out.append(tuple(sorted(z)))
    return _canonical(out)


def split_count(m: Machine) -> int:
    """Largest number of non-unit blocks over the maximal partitions of ``m``."""
    best = 0
    for part in maximal_partitions(m):
        k = sum(1 for b in part if not all(is_unit_interaction(m, i) for i in b))
        best = max(best, k)
    return best


def complexity_bounds(m: Machine, depth: int = 0) -> tuple[int, int]:
    """(lower, upper) bounds on the number of prime factors."""
    _, upper = nonunit_count(m, depth)
    lower = max(split_count(x) for x in reachable(m, depth))
    return lower, upper


@dataclass
class FalseStabEffect:
    before: tuple[int, int]
    after: tuple[int, int]
    machine: Machine = field(repr=False)


def false_stab_effect(m: Machine, move: Move, depth: int = 0) -> FalseStabEffect:
    if move.kind not in ("FalseJoin", "FalseResolve"):
        raise StaleSite(f"{move.kind} is not a false stabilization")
    after = apply(m, move)
    return FalseStabEffect(complexity_bounds(m, depth), complexity_bounds(after, depth), after)
