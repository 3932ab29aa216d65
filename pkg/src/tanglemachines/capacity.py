"""Zero-error capacity bounds from a machine's confusability graph.

Colours are letters; two colours are confusable when they occur together in
the ``{input, output, agent}`` triple of some patient edge.  Words of length
``k`` are confusable when every position is equal or confusable, so the
largest set of pairwise distinguishable words is the independence number of
the k-th strong power of the graph.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .config import default_budget


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CapacityResult:
    colours: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    values: tuple[int, ...]  # Cap_1, Cap_2, ...
    truncated: bool = False

    @property
    def lower_bound(self) -> float:
        return max((v ** (1.0 / k) for k, v in enumerate(self.values, 1)), default=0.0)

    def to_dict(self) -> dict:
        return {
            "colours": list(self.colours),
            "confusable": [list(e) for e in self.edges],
            "cap": list(self.values),
            "lower_bound": round(self.lower_bound, 12),
            "truncated": self.truncated,
        }


def confusability_graph(m) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...]]:
    if any(c is None for c in m.colours.values()):
        raise ValueError("capacity needs a fully coloured machine")
    colours = tuple(sorted(set(m.colours.values())))
    edges = set()
    for it in m.interactions:
        a = m.colours[it.agent]
        for p in it.patients:
            trio = {m.colours[p.source], m.colours[m.succ[p.source]], a}
            for x, y in itertools.combinations(sorted(trio), 2):
                edges.add((x, y))
    return colours, tuple(sorted(edges))


def strong_power(n: int, adj: list[int], k: int) -> list[int]:
    """Adjacency bitmasks of the k-th strong power of a graph on ``0..n-1``.

    Word ``(a_1..a_k)`` has index ``sum a_i n^(k-i)``.
    """
    closed = [adj[v] | (1 << v) for v in range(n)]
    words = list(itertools.product(range(n), repeat=k))
    index = {w: i for i, w in enumerate(words)}
    out = []
    for i, w in enumerate(words):
        nbr_letters = [[b for b in range(n) if closed[a] >> b & 1] for a in w]
        mask = 0
        for u in itertools.product(*nbr_letters):
            mask |= 1 << index[u]
        out.append(mask & ~(1 << i))
    return out


def max_independent_set(adj: list[int]) -> int:
    """Independence number by branch and bound with a greedy clique-cover bound."""
    n = len(adj)
    best = 0

    def cover_order(cand: int):
        # greedy partition of the candidates into cliques; label = clique count so far
        order, labels = [], []
        rest, k = cand, 0
        while rest:
            k += 1
            q = rest
            while q:
                v = (q & -q).bit_length() - 1
                q &= adj[v]
                rest &= ~(1 << v)
                order.append(v)
                labels.append(k)
        return order, labels

    def expand(cand: int, size: int):
        nonlocal best
        order, labels = cover_order(cand)
        for i in range(len(order) - 1, -1, -1):
            if size + labels[i] <= best:
                return
            v = order[i]
            new = cand & ~adj[v] & ~(1 << v)
            if new:
                expand(new, size + 1)
            elif size + 1 > best:
                best = size + 1
            cand &= ~(1 << v)

    if n:
        expand((1 << n) - 1, 0)
    return best


def capacity(m, k_max: int = 3, budget: int | None = None) -> CapacityResult:
    """Cap_k for k = 1..k_max, stopping early when n^k exceeds the budget."""
    budget = default_budget().capacity_vertices if budget is None else budget
    colours, edges = confusability_graph(m)
    pos = {c: i for i, c in enumerate(colours)}
    n = len(colours)
    adj = [0] * n
    for x, y in edges:
        adj[pos[x]] |= 1 << pos[y]
        adj[pos[y]] |= 1 << pos[x]
    values = []
    truncated = False
    for k in range(1, k_max + 1):
        if n ** k > budget:
            truncated = True
            break
        values.append(max_independent_set(strong_power(n, adj, k)))
    return CapacityResult(colours, edges, tuple(values), truncated)
