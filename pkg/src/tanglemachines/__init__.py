"""Rack-coloured tangle machines: construction, moves, invariants and factorization."""
from .config import Budget
from .dsl import load, parse, serialize
from .machine import Interaction, Machine, Patient, Process, build, cancel_factor, connect_sum, validate
from .racks import RackTable, alexander, build_rack, conjugation, constant_action, dihedral, explicit, trivial

__all__ = [
    "Budget", "Interaction", "Machine", "Patient", "Process", "RackTable",
    "alexander", "build", "build_rack", "cancel_factor", "conjugation", "connect_sum", "constant_action",
    "dihedral", "explicit", "load", "parse", "serialize", "trivial", "validate",
]
__version__ = "0.1.0"
