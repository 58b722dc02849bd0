from __future__ import annotations

from typing import Sequence

from ..core import PageSetSequence, schedule_cost
from ..laminar import LaminarForest, PreferredPages
from .base import RunResult
from .baselines import PagingPolicy, make_policy


def induced_pages(forest: LaminarForest, requests: Sequence[frozenset]) -> list:
    """Replace each set request by the set's preferred page at that moment."""
    tracker = PreferredPages(forest)
    out = []
    for r in requests:
        tracker.observe(r)
        out.append(tracker.preferred(r))
    return out


class PageLaminarReduction:
    """Serves page-set requests by running a standard paging policy on preferred pages."""

    def __init__(self, inner: PagingPolicy | str = "lru", seed: int = 0):
        self.inner = make_policy(inner, seed) if isinstance(inner, str) else inner
        self.name = f"pl:{self.inner.name}"

    def run(self, pseq: PageSetSequence, weights=None) -> RunResult:
        sigma = induced_pages(pseq.forest(), pseq.requests)
        schedule = self.inner.serve(sigma, pseq.k)
        return RunResult(schedule, schedule_cost(schedule, weights), details={"induced": sigma})


def page_laminar_reduce(pseq: PageSetSequence, inner: PagingPolicy | str = "lru", seed: int = 0) -> list:
    return PageLaminarReduction(inner, seed).run(pseq).schedule
