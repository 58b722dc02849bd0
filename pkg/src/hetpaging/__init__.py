"""Slot-heterogenous paging: online algorithms, exact oracle, adversaries."""

from .core import (PageSetSequence, Request, RequestSequence, SlotSetFamily, WeightMap, family_stats,
                   is_satisfiable, schedule_cost, set_schedule_cost, slot_mask, slots_of, validate_schedule)
from .errors import (BudgetExceeded, CapExceeded, HetPagingError, InvariantViolation, NotLaminarError,
                     ParameterError, TraceParseError)
from .laminar import LaminarForest
from .offline.oracle import OracleCaps, opt_bruteforce
from .online.registry import make_algorithm
from .traceio import format_trace, parse_trace, parse_weights

__all__ = [
    "BudgetExceeded", "CapExceeded", "HetPagingError", "InvariantViolation", "LaminarForest",
    "NotLaminarError", "OracleCaps", "PageSetSequence", "ParameterError", "Request", "RequestSequence",
    "SlotSetFamily", "TraceParseError", "WeightMap", "family_stats", "format_trace", "is_satisfiable",
    "make_algorithm", "opt_bruteforce", "parse_trace", "parse_weights", "schedule_cost",
    "set_schedule_cost", "slot_mask", "slots_of", "validate_schedule",
]
