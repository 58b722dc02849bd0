"""Turn a solution of a page-laminar instance into one for its preferred-page sequence.

Slots are irrelevant for page-set requests, so the transform works on the
sets of cached pages; :func:`sets_to_slots` lays a set schedule back out
over slots without adding retrievals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..core import PageSetSequence, set_schedule_cost
from ..errors import InvariantViolation, ParameterError
from ..laminar import PreferredPages
from ..online.pagelaminar import induced_pages


@dataclass
class RepairResult:
    sigma: list
    schedule: list[frozenset]
    cost_before: int
    cost_after: int
    phase_increases: dict = field(default_factory=dict)


def _phases(requests: Sequence[frozenset], P: frozenset) -> list[tuple[int, int]]:
    starts = [0] + [t for t in range(1, len(requests)) if requests[t] < P]
    ends = [s - 1 for s in starts[1:]] + [len(requests) - 1]
    return list(zip(starts, ends))


def repair_phases(pi: PageSetSequence, C: Sequence[Sequence]) -> RepairResult:
    """Repair every phase of every requested set, children first.

    ``C`` may list slot configurations or page sets; only the cached sets
    matter.  Each phase repair is checked to add at most one retrieval, and
    none when the phase runs to the end.
    """
    T = len(pi.requests)
    if len(C) != T:
        raise ParameterError(f"schedule has {len(C)} steps for {T} requests")
    cur = [frozenset(p for p in c if p is not None) for c in C]
    for t, (req, held) in enumerate(zip(pi.requests, cur), 1):
        if not req & held:
            raise ParameterError(f"input schedule misses request {t}")
    forest = pi.forest()
    requested = set(pi.requests)
    order = [P for P in forest.bottom_up() if P in requested]

    tracker = PreferredPages(forest)
    preferred_at: list[dict] = []
    for req in pi.requests:
        tracker.observe(req)
        preferred_at.append({P: tracker.preferred(P) for P in order})

    cost_before = set_schedule_cost(cur)
    increases: dict = {}
    for P in order:
        for i, j in _phases(pi.requests, P):
            p = preferred_at[i][P]
            before = set_schedule_cost(cur)
            q = None
            for t in range(i, j + 1):
                held = cur[t]
                if not (held & P) or p in held:
                    q = None
                    continue
                if q is None or q not in held:
                    q = min(held & P)
                cur[t] = (held - {q}) | {p}
            growth = set_schedule_cost(cur) - before
            if growth > 1 or (j == T - 1 and growth > 0):
                raise InvariantViolation(f"repairing phase [{i + 1}, {j + 1}] of {sorted(P)} added {growth}")
            if growth:
                increases[(tuple(sorted(P)), i + 1)] = growth
    sigma = induced_pages(forest, pi.requests)
    for t, (page, held) in enumerate(zip(sigma, cur), 1):
        if page not in held:
            raise InvariantViolation(f"repaired schedule misses preferred page {page} at time {t}")
    return RepairResult(sigma, cur, cost_before, set_schedule_cost(cur), increases)


def sets_to_slots(sets: Sequence[frozenset], k: int) -> list[tuple]:
    """Slot configurations for a set schedule; cached pages never change slot."""
    config: list = [None] * k
    out = []
    for held in sets:
        if len(held) > k:
            raise ParameterError(f"{len(held)} pages do not fit in {k} slots")
        config = [p if p in held else None for p in config]
        for p in sorted(held - set(config)):
            config[config.index(None)] = p
        out.append(tuple(config))
    return out
