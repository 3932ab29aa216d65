"""Invariants of coloured machines and a fingerprint bundling them.

Linking vectors are indexed by process declaration order.  Fields that depend
on that order are compared under process permutations by ``distinguish``.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import colouring
from .capacity import CapacityResult, capacity
from .config import Budget, default_budget
from .groups import abelianized_inner, abelian_structure, subgroup_elements
from .machine import Machine, colour_suppress
from .racks import RackTable, automorphisms, dihedral

__all__ = [
    "UncolouredRegister", "reduced_graph", "process_lengths", "boundary_colours", "canonical_boundary",
    "is_unit_interaction", "syntactic_nonunit", "nonunit_count", "LinkingGraph", "linking",
    "linking_matrix", "total_linking_number", "colour_linking", "colouring_count",
    "rack_presentation", "capacity", "CapacityResult", "InvariantReport", "fingerprint",
    "Verdict", "distinguish", "DEFAULT_TARGETS", "MINIMIZE_KINDS",
]


class UncolouredRegister(ValueError):
    pass


def _require_coloured(m: Machine):
    missing = [r for r, c in m.colours.items() if c is None]
    if missing:
        raise UncolouredRegister(f"uncoloured registers: {missing}")


# graph shape ---------------------------------------------------------------

def reduced_graph(m: Machine) -> tuple[int, int]:
    """(open, closed) process counts; 2-valent vertices contract away."""
    n_open = sum(1 for p in m.processes if p.kind == "open")
    return n_open, len(m.processes) - n_open


def process_lengths(m: Machine) -> tuple:
    return tuple(sorted((p.kind, len(p.registers)) for p in m.processes))


# boundary colours --------------------------------------------------------------

def boundary_colours(m: Machine) -> list[tuple[int, int]]:
    """(initial, terminal) colour per open process, in process order."""
    out = []
    for p in m.processes:
        if p.kind == "open":
            a, b = m.colours[p.registers[0]], m.colours[p.registers[-1]]
            if a is None or b is None:
                raise UncolouredRegister(f"endpoint of process {p.name} is uncoloured")
            out.append((a, b))
    return out


@lru_cache(maxsize=64)
def _automorphisms(rack: RackTable):
    return automorphisms(rack)


def canonical_boundary(rack: RackTable, pairs: Sequence[tuple[int, int]]) -> tuple:
    """Least image of the pair list under a simultaneous rack automorphism."""
    pairs = tuple(tuple(p) for p in pairs)
    if not pairs:
        return ()
    return min(tuple((phi[a], phi[b]) for a, b in pairs) for phi in _automorphisms(rack))


# unit interactions -------------------------------------------------------------

def is_unit_interaction(m: Machine, k: int) -> bool:
    it = m.interactions[k]
    c = m.colours[it.agent]
    if c is None:
        raise UncolouredRegister(f"agent {it.agent} is uncoloured")
    for p in it.patients:
        cin, cout = m.colours[p.source], m.colours[m.succ[p.source]]
        if cin is None or cout is None:
            raise UncolouredRegister(f"edge from {p.source} is uncoloured")
        if cin != c or cout != c:
            return False
    return True


def syntactic_nonunit(m: Machine) -> int:
    return sum(1 for k in range(len(m.interactions)) if not is_unit_interaction(m, k))


# Moves used by bounded searches.  None of them can add interactions, which
# keeps the reachable set small; insertions only matter in longer sequences.
MINIMIZE_KINDS = ("R2Remove", "R3Forward", "R3Backward", "R1Remove", "Destabilize")


def reachable(m: Machine, depth: int, kinds: Sequence[str] = MINIMIZE_KINDS, limit: int = 20000):
    """Machines reachable within ``depth`` moves, breadth first, with the move trace."""
    from . import rewrite

    kinds = [k for k in kinds if m.rack.is_quandle or k not in rewrite.R1_KINDS]
    seen = {m: []}
    queue = deque([(m, 0)])
    while queue:
        cur, d = queue.popleft()
        if d == depth:
            continue
        for kind in kinds:
            for move in rewrite.enumerate_sites(cur, kind):
                nxt = rewrite.apply(cur, move)
                if nxt not in seen:
                    seen[nxt] = seen[cur] + [move]
                    if len(seen) >= limit:
                        return seen
                    queue.append((nxt, d + 1))
    return seen


def nonunit_count(m: Machine, search_depth: int = 0) -> tuple[int, int]:
    """(syntactic, minimized over machines within ``search_depth`` moves)."""
    _require_coloured(m)
    syn = syntactic_nonunit(m)
    if search_depth <= 0:
        return syn, syn
    return syn, min(syntactic_nonunit(x) for x in reachable(m, search_depth))


# linking -----------------------------------------------------------------------

@dataclass(frozen=True)
class LinkingGraph:
    vectors: dict  # register -> tuple over processes
    framed: bool
    processes: tuple  # (kind, registers) per process

    def vector(self, r: str) -> tuple[int, ...]:
        return self.vectors[r]

    def reduced(self) -> tuple:
        """Per process: its nonzero vectors in order; closed ones up to rotation."""
        return _reduce_sequences([[self.vectors[r] for r in regs] for _, regs in self.processes],
                                 [k for k, _ in self.processes])


def _canonical_cycle(seq: tuple) -> tuple:
    if not seq:
        return seq
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


def _reduce_sequences(seqs, kinds, empty=None) -> tuple:
    out = []
    for seq, kind in zip(seqs, kinds):
        keep = tuple(x for x in seq if (any(x) if empty is None else x != empty))
        out.append(_canonical_cycle(keep) if kind == "closed" else keep)
    return tuple(out)


def linking(m: Machine, framed: bool = True) -> LinkingGraph:
    nu = len(m.processes)
    vec = {r: [0] * nu for r in m.registers}
    for it in m.interactions:
        for p in it.patients:
            vec[it.agent][m.process_of[p.source]] += p.sign
    if not framed:
        for r in m.registers:
            vec[r][m.process_of[r]] = 0
    procs = tuple((p.kind, p.registers) for p in m.processes)
    return LinkingGraph({r: tuple(v) for r, v in vec.items()}, framed, procs)


def linking_matrix(m: Machine, framed: bool = True) -> list[list[int]]:
    lg = linking(m, framed)
    return [[sum(abs(lg.vectors[r][j]) for r in p.registers) for j in range(len(m.processes))]
            for p in m.processes]


def total_linking_number(m: Machine, r: str, framed: bool = True) -> int:
    return sum(linking(m, framed).vectors[r])


# colour linking ----------------------------------------------------------------

def _edge_classes(m: Machine, framed: bool, budget: int | None):
    """Per register, per process: signed sum of edge classes in Ab(Inn(Q))."""
    _require_coloured(m)
    ab = abelianized_inner(m.rack, budget)
    nu = len(m.processes)
    sums = {r: [ab.zero()] * nu for r in m.registers}
    for it in m.interactions:
        for p in it.patients:
            k = m.process_of[p.source]
            if not framed and k == m.process_of[it.agent]:
                continue
            if p.sign > 0:
                cls = ab.generator_coords[m.colours[p.source]]
            else:
                cls = ab.generator_coords[m.colours[m.succ[p.source]]]
            sums[it.agent][k] = ab.add(sums[it.agent][k], cls, p.sign)
    return ab, sums


def colour_linking(m: Machine, framed: bool = True, budget: int | None = None) -> dict[str, tuple[int, ...]]:
    """Elementary divisors of the subgroup each register's edge classes generate.

    Classes of edges in one process are summed first, so a cancelling pair
    of opposite edges contributes nothing.  ``()`` is the trivial subgroup.
    """
    ab, sums = _edge_classes(m, framed, budget)
    out = {}
    for r in m.registers:
        elems = subgroup_elements(ab, sums[r])
        out[r] = tuple(abelian_structure(ab, elems)) if len(elems) > 1 else ()
    return out


# colourings --------------------------------------------------------------------

DEFAULT_TARGETS = (("dihedral 3", dihedral(3)), ("dihedral 5", dihedral(5)))


def colouring_count(m: Machine, target: RackTable) -> int:
    """Colourings of the skeleton of ``m`` by ``target``; existing colours are ignored."""
    return colouring.count(target, m.registers, m.constraints())


def rack_presentation(m: Machine) -> tuple[list[str], list[str]]:
    """Generators (registers) and relations of the machine's fundamental rack."""
    gens = list(m.registers)
    rels = []
    for v, w, a, s in m.constraints():
        rels.append(f"{w} = {v}" if a is None else f"{w} = {v} {'|>' if s > 0 else '<|'} {a}")
    return gens, rels


# fingerprint -------------------------------------------------------------------

@dataclass
class InvariantReport:
    reduced_graph: tuple
    boundary_colours: tuple
    linking_reduced: tuple
    linking_matrix: tuple
    colour_linking_reduced: tuple
    colouring_counts: tuple
    framed: bool
    # presentation-level data, reported but not compared
    process_lengths: tuple = ()
    nonunit_syntactic: int = 0
    linking_matrix_framed: tuple = ()
    linking_matrix_unframed: tuple = ()
    capacity: CapacityResult | None = None
    extras: dict = field(default_factory=dict)

    FIELDS = ("reduced_graph", "boundary_colours", "linking_reduced", "linking_matrix",
              "colour_linking_reduced", "colouring_counts")

    def key(self) -> tuple:
        return tuple(getattr(self, f) for f in self.FIELDS)

    def __eq__(self, other):
        return isinstance(other, InvariantReport) and self.key() == other.key()

    def to_dict(self) -> dict:
        def plain(x):
            if isinstance(x, (tuple, list)):
                return [plain(y) for y in x]
            return x
        d = {f: plain(getattr(self, f)) for f in self.FIELDS}
        d["linking_variant"] = "framed" if self.framed else "unframed"
        d["process_lengths"] = plain(self.process_lengths)
        d["nonunit_syntactic"] = self.nonunit_syntactic
        d["linking_matrix_framed"] = plain(self.linking_matrix_framed)
        d["linking_matrix_unframed"] = plain(self.linking_matrix_unframed)
        if self.capacity is not None:
            d["capacity"] = self.capacity.to_dict()
        d.update(self.extras)
        return d


def fingerprint(
    m: Machine,
    targets: Sequence[tuple[str, RackTable]] = DEFAULT_TARGETS,
    kmax: int = 0,
    budget: Budget | None = None,
    framed: bool | None = None,
) -> InvariantReport:
    """Invariant bundle.

    Linking data are framed for racks and unframed for quandles unless
    ``framed`` is given; framed data on a quandle machine are invariant only
    for moves without R1.
    """
    budget = budget or default_budget()
    framed = (not m.rack.is_quandle) if framed is None else framed
    lg = linking(m, framed)
    cl = colour_linking(m, framed, budget.group_elements)
    kinds = [p.kind for p in m.processes]
    cl_reduced = _reduce_sequences([[cl[r] for r in p.registers] for p in m.processes], kinds, empty=())
    suppressed = colour_suppress(m)
    counts = tuple((name, colouring_count(suppressed, t)) for name, t in targets)
    cap = capacity(m, kmax, budget.capacity_vertices) if kmax > 0 else None
    return InvariantReport(
        reduced_graph=reduced_graph(m),
        boundary_colours=canonical_boundary(m.rack, boundary_colours(m)),
        linking_reduced=lg.reduced(),
        linking_matrix=_tuplify(linking_matrix(m, framed)),
        colour_linking_reduced=cl_reduced,
        colouring_counts=counts,
        framed=framed,
        process_lengths=process_lengths(m),
        nonunit_syntactic=syntactic_nonunit(m),
        linking_matrix_framed=_tuplify(linking_matrix(m, True)),
        linking_matrix_unframed=_tuplify(linking_matrix(m, False)),
        capacity=cap,
    )


def _tuplify(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


# distinguishing ----------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    distinguished: bool
    invariant: str | None = None
    detail: str = ""

    def __str__(self):
        if self.distinguished:
            return f"distinguished by {self.invariant}" + (f" ({self.detail})" if self.detail else "")
        return "indistinguishable by this suite"


def _permuted_fields(m: Machine, fp: InvariantReport, sigma: Sequence[int], lg: LinkingGraph, cl: dict):
    """Process-indexed fields of ``m`` after reordering processes by ``sigma``.

    ``sigma[i]`` is the old index of the process placed at position ``i``.
    """
    procs = [m.processes[i] for i in sigma]
    kinds = [p.kind for p in procs]
    pairs = [(m.colours[p.registers[0]], m.colours[p.registers[-1]]) for p in procs if p.kind == "open"]
    vec_seqs = [[tuple(lg.vectors[r][j] for j in sigma) for r in p.registers] for p in procs]
    mat = tuple(tuple(fp.linking_matrix[i][j] for j in sigma) for i in sigma)
    cl_seqs = [[cl[r] for r in p.registers] for p in procs]
    return {
        "boundary_colours": canonical_boundary(m.rack, pairs),
        "linking_reduced": _reduce_sequences(vec_seqs, kinds),
        "linking_matrix": mat,
        "colour_linking_reduced": _reduce_sequences(cl_seqs, kinds, empty=()),
    }


def distinguish(
    m1: Machine,
    m2: Machine,
    depth: int | None = None,
    targets: Sequence[tuple[str, RackTable]] = DEFAULT_TARGETS,
    max_permute: int = 8,
    framed: bool | None = None,
) -> Verdict:
    """Compare invariant suites; only ever reports a difference or its absence."""
    if m1.rack.op != m2.rack.op:
        return Verdict(True, "rack", "machines are coloured by different racks")
    f1, f2 = fingerprint(m1, targets, framed=framed), fingerprint(m2, targets, framed=framed)
    if f1.reduced_graph != f2.reduced_graph:
        return Verdict(True, "reduced_graph", f"{f1.reduced_graph} vs {f2.reduced_graph}")
    if f1.colouring_counts != f2.colouring_counts:
        return Verdict(True, "colouring_counts", f"{f1.colouring_counts} vs {f2.colouring_counts}")
    order = ("boundary_colours", "linking_reduced", "linking_matrix", "colour_linking_reduced")
    nu = len(m2.processes)
    kinds1 = [p.kind for p in m1.processes]
    if nu <= max_permute:
        perms = [s for s in itertools.permutations(range(nu)) if [m2.processes[i].kind for i in s] == kinds1]
    else:
        perms = [tuple(range(nu))]
    framed = f2.framed
    lg2 = linking(m2, framed)
    cl2 = colour_linking(m2, framed)
    target = {f: getattr(f1, f) for f in order}
    best = -1
    for sigma in perms:
        got = _permuted_fields(m2, f2, sigma, lg2, cl2)
        agree = 0
        for f in order:
            if got[f] != target[f]:
                break
            agree += 1
        if agree == len(order):
            best = len(order)
            break
        best = max(best, agree)
    if best < len(order):
        what = order[best]
        return Verdict(True, what, "no process relabelling matches")
    if depth is not None:
        from .factorization import complexity_bounds
        lo1, hi1 = complexity_bounds(m1, depth)
        lo2, hi2 = complexity_bounds(m2, depth)
        if lo1 > hi2 or lo2 > hi1:
            return Verdict(True, "complexity_bounds", f"[{lo1},{hi1}] vs [{lo2},{hi2}]")
    return Verdict(False)
