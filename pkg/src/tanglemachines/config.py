"""Resource budgets shared by the group, capacity and search routines."""
from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Budget:
    group_elements: int = 10**5
    capacity_vertices: int = 10**5
    split_interactions: int = 16

    @classmethod
    def from_env(cls) -> Budget:
        raw = os.environ.get("TANGLE_BUDGET")
        if not raw:
            return cls()
        value = int(raw)
        return cls(group_elements=value, capacity_vertices=value)


def default_budget() -> Budget:
    return Budget.from_env()
