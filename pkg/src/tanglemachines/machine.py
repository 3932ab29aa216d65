"""Tangle machines: processes of registers, interactions, and a rack colouring.

Every register has at most one outgoing edge (to the next register of its
process), so an edge is identified by its source register.  An interaction is
an agent register acting on a block of patient edges, each with a sign.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import colouring
from .racks import RackTable, rack_apply

UNCOLOURED = None


class MachineError(ValueError):
    pass


class SkeletonMismatch(MachineError):
    pass


class OverlappingDomains(MachineError):
    pass


class InconsistentColouring(MachineError):
    pass


class InconsistentRecolouring(MachineError):
    pass


@dataclass(frozen=True)
class Process:
    name: str
    kind: str  # "open" | "closed"
    registers: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in ("open", "closed"):
            raise MachineError(f"process kind must be open or closed, got {self.kind!r}")
        if not self.registers:
            raise MachineError(f"process {self.name} has no registers")

    def edges(self) -> list[tuple[str, str]]:
        regs = self.registers
        out = list(zip(regs, regs[1:]))
        if self.kind == "closed":
            out.append((regs[-1], regs[0]))
        return out


@dataclass(frozen=True)
class Patient:
    source: str
    sign: int = 1


@dataclass(frozen=True)
class Interaction:
    agent: str
    patients: tuple[Patient, ...]


@dataclass(frozen=True, eq=False)
class Machine:
    rack: RackTable
    processes: tuple[Process, ...]
    interactions: tuple[Interaction, ...]
    colours: Mapping[str, int | None]
    provenance: tuple[str, ...] = ()
    # derived indexes
    position: dict = field(init=False, repr=False)
    succ: dict = field(init=False, repr=False)
    pred: dict = field(init=False, repr=False)
    process_of: dict = field(init=False, repr=False)
    edge_owner: dict = field(init=False, repr=False)

    def __post_init__(self):
        position, succ, pred, process_of = {}, {}, {}, {}
        for pi, proc in enumerate(self.processes):
            for ri, r in enumerate(proc.registers):
                if r in position:
                    raise MachineError(f"register {r} appears twice")
                position[r] = (pi, ri)
                process_of[r] = pi
            for v, w in proc.edges():
                succ[v] = w
                pred[w] = v
        colours = {r: self.colours.get(r) for r in position}
        extra = set(self.colours) - set(position)
        if extra:
            raise MachineError(f"colours given for unknown registers {sorted(extra)}")
        for r, c in colours.items():
            if c is not None and not (0 <= c < self.rack.size):
                raise MachineError(f"colour {c} of {r} outside rack of size {self.rack.size}")
        inters = []
        for it in self.interactions:
            if it.agent not in position:
                raise MachineError(f"unknown agent {it.agent}")
            if not it.patients:
                raise MachineError(f"interaction of {it.agent} has no patients")
            pats = []
            for p in it.patients:
                if p.source not in succ:
                    raise MachineError(f"{p.source} has no outgoing edge")
                if p.sign not in (1, -1):
                    raise MachineError(f"bad sign {p.sign}")
                pats.append(p)
            pats.sort(key=lambda p: position[p.source])
            inters.append(Interaction(it.agent, tuple(pats)))
        inters.sort(key=lambda it: (position[it.agent], position[it.patients[0].source]))
        edge_owner = {}
        for k, it in enumerate(inters):
            for p in it.patients:
                if p.source in edge_owner:
                    raise MachineError(f"edge from {p.source} carries two interaction labels")
                edge_owner[p.source] = k
        set_ = object.__setattr__
        set_(self, "interactions", tuple(inters))
        set_(self, "colours", colours)
        set_(self, "position", position)
        set_(self, "succ", succ)
        set_(self, "pred", pred)
        set_(self, "process_of", process_of)
        set_(self, "edge_owner", edge_owner)

    # identity --------------------------------------------------------------
    def key(self):
        return (
            self.rack.kind, self.rack.params, self.rack.op,
            self.processes, self.interactions,
            tuple(self.colours[r] for r in self.registers),
            self.provenance,
        )

    def __eq__(self, other):
        return isinstance(other, Machine) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    # views -------------------------------------------------------------------
    @property
    def registers(self) -> list[str]:
        return [r for p in self.processes for r in p.registers]

    def colour(self, r: str) -> int | None:
        return self.colours[r]

    def is_coloured(self) -> bool:
        return all(c is not None for c in self.colours.values())

    def label(self, source: str) -> tuple[str, int] | None:
        """``(agent, sign)`` of the edge leaving ``source``, or None if plain."""
        k = self.edge_owner.get(source)
        if k is None:
            return None
        it = self.interactions[k]
        for p in it.patients:
            if p.source == source:
                return it.agent, p.sign
        raise AssertionError

    def agents(self) -> set[str]:
        return {it.agent for it in self.interactions}

    def interactions_of(self, agent: str) -> list[int]:
        return [k for k, it in enumerate(self.interactions) if it.agent == agent]

    def edges(self) -> list[tuple[str, str]]:
        return [e for p in self.processes for e in p.edges()]

    def constraints(self, keep: Iterable[int] | None = None) -> list[colouring.Constraint]:
        keep = set(range(len(self.interactions))) if keep is None else set(keep)
        out = []
        for v, w in self.edges():
            k = self.edge_owner.get(v)
            if k is not None and k in keep:
                agent, sign = self.label(v)
                out.append((v, w, agent, sign))
            else:
                out.append((v, w, None, 1))
        return out

    def replace(self, **changes) -> Machine:
        fields = dict(
            rack=self.rack, processes=self.processes, interactions=self.interactions,
            colours=self.colours, provenance=self.provenance,
        )
        fields.update(changes)
        return Machine(**fields)

    def skeleton(self):
        return (self.rack.op, self.processes)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(m: Machine) -> ValidationReport:
    report = ValidationReport()
    for r, c in m.colours.items():
        if c is None:
            report.warnings.append(f"register {r} is uncoloured")
    for v, w in m.edges():
        cv, cw = m.colours[v], m.colours[w]
        lab = m.label(v)
        if lab is None:
            if cv is not None and cw is not None and cv != cw:
                report.violations.append(f"plain edge {v} -> {w}: colours {cv} != {cw}")
            continue
        agent, sign = lab
        ca = m.colours[agent]
        if None in (cv, cw, ca):
            continue
        want = rack_apply(m.rack, cv, ca, sign)
        if want != cw:
            op = "|>" if sign > 0 else "<|"
            report.violations.append(
                f"edge {v} -> {w} (agent {agent}, sign {'+' if sign > 0 else '-'}): "
                f"{cv} {op} {ca} = {want} but colour({w}) = {cw}"
            )
    return report


def colour_suppress(m: Machine) -> Machine:
    if all(c is None for c in m.colours.values()):
        return m
    return m.replace(colours={r: None for r in m.colours})


def connect_sum(m1: Machine, m2: Machine) -> Machine:
    """Union of the interactions of two machines sharing one skeleton.

    A register touched by the interactions of one summand (as agent or patient
    endpoint) keeps that summand's colour; one touched by both needs the two
    colours to agree.  Untouched registers take either summand's colour,
    preferring ``m1``, subject to the colouring law.
    """
    if m1.skeleton() != m2.skeleton():
        raise SkeletonMismatch("summands do not share processes and rack")
    overlap = set(m1.edge_owner) & set(m2.edge_owner)
    if overlap:
        raise OverlappingDomains(f"edges labelled in both summands: {sorted(overlap)}")
    if not m1.interactions:
        return m2
    if not m2.interactions:
        return m1
    merged = m1.replace(interactions=m1.interactions + m2.interactions, colours={r: None for r in m1.colours})
    t1, t2 = touched(m1), touched(m2)
    prefs = {}
    for r in m1.registers:
        c1, c2 = m1.colours[r], m2.colours[r]
        if r in t1 and r in t2 and c1 != c2:
            raise InconsistentColouring(f"register {r} is coloured {c1} and {c2} by the two summands")
        if r in t1:
            options = [c1]
        elif r in t2:
            options = [c2]
        else:
            options = [c1, c2]
        prefs[r] = [c for c in dict.fromkeys(options) if c is not None]
    colours = _choose(merged, prefs)
    if colours is None:
        raise InconsistentColouring("no merged colouring satisfies the colouring law")
    return merged.replace(colours=colours, provenance=tuple(dict.fromkeys(m1.provenance + m2.provenance)))


def touched(m: Machine, ks: Iterable[int] | None = None) -> set[str]:
    """Agents and patient endpoints of the given interactions (default: all)."""
    ks = range(len(m.interactions)) if ks is None else ks
    out = set()
    for k in ks:
        it = m.interactions[k]
        out.add(it.agent)
        for p in it.patients:
            out.update((p.source, m.succ[p.source]))
    return out


def _choose(m: Machine, prefs: Mapping[str, list[int]]) -> dict | None:
    """Pick one candidate colour per register so that every edge validates."""
    regs = [r for r in m.registers if prefs[r]]
    cons = [c for c in m.constraints() if all(x is None or prefs[x] for x in (c[0], c[1], c[2]))]
    by_reg: dict[str, list] = {r: [] for r in regs}
    for c in cons:
        for x in {c[0], c[1], c[2]} - {None}:
            by_reg[x].append(c)
    op, inv = m.rack.op, m.rack.inv_op

    def ok(colours, r):
        for v, w, a, s in by_reg[r]:
            if v in colours and w in colours and (a is None or a in colours):
                want = colours[v] if a is None else (op if s > 0 else inv)[colours[v]][colours[a]]
                if want != colours[w]:
                    return False
        return True

    def search(i, colours):
        if i == len(regs):
            return dict(colours)
        r = regs[i]
        for c in prefs[r]:
            colours[r] = c
            if ok(colours, r):
                found = search(i + 1, colours)
                if found is not None:
                    return found
            del colours[r]
        return None

    found = search(0, {})
    if found is None:
        return None
    return {r: found.get(r) for r in m.registers}


def cancel_factor(m: Machine, interactions: Iterable[int]) -> Machine:
    """Delete the given interactions (indices into ``m.interactions``) and recolour.

    The new colouring satisfies the colouring law for the remaining
    interactions.  It first keeps the original colour on as many registers
    touched by the remaining interactions as possible, then on as many
    registers overall; ties go to the first optimum in register order.
    """
    drop = set(interactions)
    if not drop:
        return m
    keep = [k for k in range(len(m.interactions)) if k not in drop]
    remaining = tuple(m.interactions[k] for k in keep)
    if not m.is_coloured():
        return m.replace(interactions=remaining)
    target = dict(m.colours)
    heavy = len(m.registers) + 1
    weights = {r: heavy for r in touched(m, keep)}
    new = colouring.closest(m.rack, m.registers, m.constraints(keep), target, weights)
    if new is None:
        raise InconsistentRecolouring("no colouring satisfies the remaining interactions")
    return m.replace(interactions=remaining, colours=new)


def components(m: Machine) -> list[list[int]]:
    """Connected components as lists of process indices."""
    parent = list(range(len(m.processes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for it in m.interactions:
        a = find(m.process_of[it.agent])
        for p in it.patients:
            b = find(m.process_of[p.source])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(len(m.processes)):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def build(
    rack: RackTable,
    processes: Sequence[tuple[str, str, Sequence[str]]],
    interactions: Sequence[tuple[str, Sequence[tuple[str, int]]]] = (),
    colours: Mapping[str, int | None] | None = None,
) -> Machine:
    """Programmatic constructor from plain tuples."""
    procs = tuple(Process(name, kind, tuple(regs)) for name, kind, regs in processes)
    inters = tuple(Interaction(a, tuple(Patient(s, sg) for s, sg in pats)) for a, pats in interactions)
    return Machine(rack, procs, inters, dict(colours or {}))
