"""Local moves on machines: site enumeration, application and seeded walks.

A move is addressed by a *site* (registers it touches, as names) and
*parameters* (choices such as an agent and a sign).  Sites are positional:
any rewrite may invalidate them, and ``apply`` re-checks the pattern.

Colour rules, writing ``a^s`` for ``|>a`` (s=+1) or ``<|a`` (s=-1):

* R2Insert at a middle register ``m`` of two plain edges ``u -> m -> w``:
  the edges get labels ``(a, s)`` and ``(a, -s)``, ``m`` becomes ``u a^s``.
* R3Forward at the agent ``y'`` of an interaction ``J`` whose patients
  ``x' -> x''`` sit right after edges ``x -> x'`` labelled ``(z, s)`` in the
  same interaction that labels ``y -> y'``: ``J`` moves to agent ``y`` and
  patients ``x -> x'``; the ``z`` labels move to ``x' -> x''``; each ``x'``
  becomes ``x y^t``.  Self-distributivity makes ``x''`` unchanged.
* Stabilize inserts an inert register; Destabilize removes one that is not
  an agent.  FalseJoin/FalseResolve do the same with agents and are tagged
  as non-equivalences in the machine's provenance.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .machine import Interaction, Machine, Patient, Process, components, validate

EQUIVALENCE_KINDS = (
    "R1Insert", "R1Remove", "R2Insert", "R2Remove", "R3Forward", "R3Backward",
    "Stabilize", "Destabilize", "RackAutomorphism",
)
NON_EQUIVALENCE_KINDS = ("FalseJoin", "FalseResolve")
ALL_KINDS = EQUIVALENCE_KINDS + NON_EQUIVALENCE_KINDS
R1_KINDS = ("R1Insert", "R1Remove")


class RewriteError(ValueError):
    pass


class StaleSite(RewriteError):
    pass


class QuandleRequired(RewriteError):
    pass


class NoApplicableMove(RewriteError):
    pass


@dataclass(frozen=True)
class Move:
    kind: str
    site: tuple
    params: tuple = ()

    @property
    def is_equivalence(self) -> bool:
        return self.kind in EQUIVALENCE_KINDS

    def to_dict(self) -> dict:
        return {"kind": self.kind, "site": list(self.site), "params": list(self.params)}

    @classmethod
    def from_dict(cls, d) -> Move:
        return cls(d["kind"], tuple(d["site"]), tuple(d.get("params", ())))

    def __str__(self):
        site = ",".join(map(str, self.site))
        return f"{self.kind}@{site}" + (":" + ",".join(map(str, self.params)) if self.params else "")


def parse_move(kind: str, site: str, params: str = "") -> Move:
    """Build a move from CLI strings; numeric fields become ints."""
    def conv(x):
        x = x.strip()
        try:
            return int(x)
        except ValueError:
            return x
    sp = tuple(conv(x) for x in site.split(",") if x.strip())
    pp = tuple(conv(x) for x in params.split(",") if x.strip())
    return Move(kind, sp, pp)


# editing -----------------------------------------------------------------

def _act(m: Machine, c, a, sign):
    if c is None or a is None:
        return None
    return m.rack.op[c][a] if sign > 0 else m.rack.inv_op[c][a]


class _Edit:
    """Mutable copy of a machine; interactions kept as ``[agent, {source: sign}]``."""

    def __init__(self, m: Machine):
        self.m = m
        self.procs = [[p.name, p.kind, list(p.registers)] for p in m.processes]
        self.groups = [[it.agent, {p.source: p.sign for p in it.patients}] for it in m.interactions]
        self.colours = dict(m.colours)
        self.provenance = list(m.provenance)

    def group_of(self, source):
        for g in self.groups:
            if source in g[1]:
                return g
        return None

    def rekey(self, old, new):
        g = self.group_of(old)
        if g is not None:
            g[1][new] = g[1].pop(old)

    def insert_after(self, r, new):
        for p in self.procs:
            if r in p[2]:
                p[2].insert(p[2].index(r) + 1, new)
                return
        raise KeyError(r)

    def remove_register(self, r):
        for p in self.procs:
            if r in p[2]:
                p[2].remove(r)
        del self.colours[r]

    def build(self) -> Machine:
        inters = tuple(
            Interaction(a, tuple(Patient(s, sg) for s, sg in pats.items()))
            for a, pats in self.groups if pats
        )
        procs = tuple(Process(n, k, tuple(regs)) for n, k, regs in self.procs)
        return Machine(self.m.rack, procs, inters, self.colours, tuple(dict.fromkeys(self.provenance)))


def fresh_name(m: Machine, used: Iterable[str] = ()) -> str:
    taken = set(m.position) | set(used)
    k = 0
    while f"s{k}" in taken:
        k += 1
    return f"s{k}"


# site patterns ---------------------------------------------------------------
# Each returns the base sites of a kind; parameters are listed separately.

def _interior(m: Machine, r):
    """``(pred, succ)`` of ``r`` when it sits between two distinct edges."""
    u, w = m.pred.get(r), m.succ.get(r)
    if u is None or w is None or (u == r and w == r):
        return None
    return u, w


def _sites_R2Insert(m: Machine):
    agents = m.agents()
    out = []
    for r in m.registers:
        if r in agents or _interior(m, r) is None:
            continue
        u = m.pred[r]
        if m.label(u) is None and m.label(r) is None:
            out.append((r,))
    return out


def _params_R2Insert(m: Machine, site):
    return [(a, s) for a in m.registers if a != site[0] for s in (1, -1)]


def _sites_R2Remove(m: Machine):
    agents = m.agents()
    out = []
    for r in m.registers:
        if r in agents or _interior(m, r) is None:
            continue
        l1, l2 = m.label(m.pred[r]), m.label(r)
        if l1 and l2 and l1[0] == l2[0] and l1[1] == -l2[1]:
            out.append((r,))
    return out


def _sites_R1Insert(m: Machine):
    return [(v,) for v, w in m.edges() if m.label(v) is None]


def _params_R1Insert(m: Machine, site):
    return [(end, s) for end in ("source", "target") for s in (1, -1)]


def _sites_R1Remove(m: Machine):
    out = []
    for v, w in m.edges():
        lab = m.label(v)
        if lab and lab[0] in (v, w):
            out.append((v,))
    return out


def _sites_Stabilize(m: Machine):
    return [(r,) for r in m.registers]


def _plain_pairs(m: Machine):
    for v, w in m.edges():
        if v != w and m.label(v) is None:
            yield v, w


def _sites_Destabilize(m: Machine):
    agents = m.agents()
    out = []
    for v, w in _plain_pairs(m):
        if w not in agents:
            out.append((v, "target"))
        if v not in agents:
            out.append((v, "source"))
    return out


def _sites_FalseJoin(m: Machine):
    agents = m.agents()
    return [(v,) for v, w in _plain_pairs(m) if v in agents and w in agents]


def _sites_FalseResolve(m: Machine):
    return [(r,) for r in m.registers if len(m.interactions_of(r)) >= 2]


def _params_FalseResolve(m: Machine, site):
    ks = m.interactions_of(site[0])
    firsts = [m.interactions[k].patients[0].source for k in ks]
    out = []
    for mask in range(1, 2 ** len(ks) - 1):
        out.append(tuple(f for i, f in enumerate(firsts) if mask >> i & 1))
    return out


def _sites_RackAutomorphism(m: Machine, scope: str = "global"):
    if scope == "global":
        return [("global",)]
    return [("component", m.processes[c[0]].registers[0]) for c in components(m)]


def _params_RackAutomorphism(m: Machine, site):
    return [(q, s) for q in range(m.rack.size) for s in (1, -1)]


def _r3_forward_match(m: Machine, y2):
    """Data for R3Forward at agent ``y2`` or None."""
    ks = m.interactions_of(y2)
    if len(ks) != 1:
        return None
    y = m.pred.get(y2)
    if y is None or y == y2:
        return None
    agents = m.agents()
    if y in agents:
        return None
    zk = m.edge_owner.get(y)
    if zk is None:
        return None
    z, s = m.label(y)
    J = m.interactions[ks[0]]
    strands = []
    for p in J.patients:
        x2 = p.source
        x = m.pred.get(x2)
        if x2 in agents or x is None or m.edge_owner.get(x) != zk or m.label(x)[1] != s:
            return None
        strands.append((x, x2, p.sign))
    return y, z, s, zk, ks[0], strands


def _r3_backward_match(m: Machine, y):
    ks = m.interactions_of(y)
    if len(ks) != 1:
        return None
    y2 = m.succ.get(y)
    if y2 is None or y2 == y:
        return None
    agents = m.agents()
    if y2 in agents:
        return None
    zk = m.edge_owner.get(y)
    if zk is None:
        return None
    z, s = m.label(y)
    J = m.interactions[ks[0]]
    strands = []
    for p in J.patients:
        x = p.source
        x2 = m.succ[x]
        if x2 in agents or m.edge_owner.get(x2) != zk or m.label(x2)[1] != s:
            return None
        strands.append((x, x2, p.sign))
    return y2, z, s, zk, ks[0], strands


def _sites_R3Forward(m: Machine):
    return [(r,) for r in sorted(m.agents(), key=m.position.get) if _r3_forward_match(m, r)]


def _sites_R3Backward(m: Machine):
    return [(r,) for r in sorted(m.agents(), key=m.position.get) if _r3_backward_match(m, r)]


_SITES = {
    "R1Insert": _sites_R1Insert, "R1Remove": _sites_R1Remove,
    "R2Insert": _sites_R2Insert, "R2Remove": _sites_R2Remove,
    "R3Forward": _sites_R3Forward, "R3Backward": _sites_R3Backward,
    "Stabilize": _sites_Stabilize, "Destabilize": _sites_Destabilize,
    "FalseJoin": _sites_FalseJoin, "FalseResolve": _sites_FalseResolve,
}
_PARAMS = {
    "R1Insert": _params_R1Insert, "R2Insert": _params_R2Insert,
    "FalseResolve": _params_FalseResolve, "RackAutomorphism": _params_RackAutomorphism,
}


def _check_kind(m: Machine, kind: str):
    if kind not in ALL_KINDS:
        raise RewriteError(f"unknown move kind {kind!r}")
    if kind in R1_KINDS and not m.rack.is_quandle:
        raise QuandleRequired(f"{kind} needs a quandle colouring")


def base_sites(m: Machine, kind: str, scope: str = "global") -> list[tuple]:
    _check_kind(m, kind)
    if kind == "RackAutomorphism":
        return _sites_RackAutomorphism(m, scope)
    return _SITES[kind](m)


def site_params(m: Machine, kind: str, site: tuple) -> list[tuple]:
    f = _PARAMS.get(kind)
    return f(m, site) if f else [()]


def enumerate_sites(m: Machine, kind: str, scope: str = "global") -> list[Move]:
    """Every concrete move of ``kind`` applicable to ``m``."""
    return [Move(kind, s, p) for s in base_sites(m, kind, scope) for p in site_params(m, kind, s)]


# application -----------------------------------------------------------------

def apply(m: Machine, move: Move) -> Machine:
    kind, site, params = move.kind, tuple(move.site), tuple(move.params)
    _check_kind(m, kind)
    if kind == "RackAutomorphism":
        return _apply_automorphism(m, site, params)
    if site not in _SITES[kind](m):
        raise StaleSite(f"{move} does not match the machine")
    if kind in _PARAMS and params not in site_params(m, kind, site):
        raise StaleSite(f"{move} has parameters outside the site's range")
    e = _Edit(m)
    if kind == "R2Insert":
        (r,), (a, s) = site, params
        u = m.pred[r]
        e.colours[r] = _act(m, m.colours[u], m.colours[a], s)
        e.groups += [[a, {u: s}], [a, {r: -s}]]
    elif kind == "R2Remove":
        r = site[0]
        u = m.pred[r]
        for src in (u, r):
            del e.group_of(src)[1][src]
        e.colours[r] = m.colours[u]
    elif kind == "R1Insert":
        (v,), (end, s) = site, params
        e.groups.append([v if end == "source" else m.succ[v], {v: s}])
    elif kind == "R1Remove":
        v = site[0]
        del e.group_of(v)[1][v]
    elif kind in ("Stabilize", "FalseResolve"):
        r = site[0]
        new = fresh_name(m)
        if kind == "FalseResolve":
            moved = set(params)
            for g in e.groups:
                if g[0] == r and min(g[1], key=m.position.get) in moved:
                    g[0] = new
            e.provenance.append("false-resolve")
        e.insert_after(r, new)
        e.colours[new] = m.colours[r]
        e.rekey(r, new)
    elif kind == "Destabilize":
        v, which = site
        w = m.succ[v]
        if which == "target":
            e.rekey(w, v)
            e.remove_register(w)
        else:
            e.remove_register(v)
    elif kind == "FalseJoin":
        v = site[0]
        w = m.succ[v]
        e.rekey(w, v)
        for g in e.groups:
            if g[0] == w:
                g[0] = v
        e.remove_register(w)
        e.provenance.append("false-join")
    elif kind == "R3Forward":
        y, z, s, zk, jk, strands = _r3_forward_match(m, site[0])
        gz, gj = e.groups[zk], e.groups[jk]
        gj[0] = y
        gj[1] = {}
        for x, x2, t in strands:
            del gz[1][x]
            gz[1][x2] = s
            gj[1][x] = t
            e.colours[x2] = _act(m, m.colours[x], m.colours[y], t)
    elif kind == "R3Backward":
        y2, z, s, zk, jk, strands = _r3_backward_match(m, site[0])
        gz, gj = e.groups[zk], e.groups[jk]
        gj[0] = y2
        gj[1] = {}
        for x, x2, t in strands:
            del gz[1][x2]
            gz[1][x] = s
            gj[1][x2] = t
            e.colours[x2] = _act(m, m.colours[x], m.colours[z], s)
    return e.build()


def _apply_automorphism(m: Machine, site, params) -> Machine:
    if len(params) != 2 or not (0 <= params[0] < m.rack.size) or params[1] not in (1, -1):
        raise StaleSite(f"bad automorphism parameters {params}")
    q, s = params
    if site == ("global",):
        regs = set(m.registers)
    elif len(site) == 2 and site[0] == "component" and site[1] in m.position:
        pi = m.process_of[site[1]]
        comp = next(c for c in components(m) if pi in c)
        regs = {r for i in comp for r in m.processes[i].registers}
    else:
        raise StaleSite(f"bad automorphism scope {site}")
    colours = {r: (_act(m, c, q, s) if r in regs else c) for r, c in m.colours.items()}
    return m.replace(colours=colours)


# walks -----------------------------------------------------------------------

@dataclass
class Walk:
    machine: Machine
    trace: list[Move] = field(default_factory=list)
    truncated: bool = False

    def __iter__(self):
        return iter((self.machine, self.trace))


def default_kinds(m: Machine) -> tuple[str, ...]:
    return tuple(k for k in EQUIVALENCE_KINDS if m.rack.is_quandle or k not in R1_KINDS)


def random_walk(
    m: Machine,
    steps: int,
    seed: int = 0,
    allowed_kinds: Sequence[str] | None = None,
    scope: str = "global",
    allow_false: bool = False,
    check: bool = False,
) -> Walk:
    """Apply ``steps`` random moves, deterministically for a given seed.

    Each step picks a kind uniformly among those with a site, then a site,
    then parameters.  With ``check`` every intermediate machine is validated.
    """
    kinds = tuple(allowed_kinds) if allowed_kinds is not None else default_kinds(m)
    bad = [k for k in kinds if k in NON_EQUIVALENCE_KINDS]
    if bad and not allow_false:
        raise RewriteError(f"non-equivalence kinds {bad} need allow_false=True")
    for k in kinds:
        _check_kind(m, k)
    rng = random.Random(seed)
    walk = Walk(m)
    for _ in range(steps):
        cur = walk.machine
        options = [(k, s) for k in kinds if (s := base_sites(cur, k, scope))]
        if not options:
            walk.truncated = True
            break
        kind, sites = options[rng.randrange(len(options))]
        site = sites[rng.randrange(len(sites))]
        choices = site_params(cur, kind, site)
        move = Move(kind, site, choices[rng.randrange(len(choices))])
        nxt = apply(cur, move)
        if check and validate(cur).ok and not validate(nxt).ok:
            raise AssertionError(f"{move} broke validation: {validate(nxt).violations}")
        walk.machine = nxt
        walk.trace.append(move)
    return walk


def replay(m: Machine, trace: Iterable[Move]) -> Machine:
    for move in trace:
        m = apply(m, move)
    return m


def trace_to_list(trace: Iterable[Move]) -> list[dict]:
    return [mv.to_dict() for mv in trace]


def trace_from_list(items: Iterable[dict]) -> list[Move]:
    return [Move.from_dict(d) for d in items]
