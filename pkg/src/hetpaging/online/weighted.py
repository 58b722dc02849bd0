"""Primal-dual online algorithm for Weighted All-Or-One paging.

The cache holds request times rather than pages.  Specific requests carry a
capacity, every cached request carries a credit, and a general request that
finds no good slot raises both until enough slots qualify.  The continuous
raise is simulated event by event with exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..core import Config, Request, RequestSequence, WeightMap, full_mask, schedule_cost, slots_of
from ..errors import InvariantViolation, ParameterError
from .base import OnlineAlgorithm, RunResult

ARTIFICIAL_PAGE = 0


@dataclass(frozen=True)
class RaiseEvent:
    """One breakpoint of the continuous raise while serving request ``t``.

    ``caps`` and ``credits`` list the request times whose capacity or credit
    grew by ``delta``; ``evicted`` are the times evicted once the raise ended;
    ``phi`` is the potential afterwards.
    """

    t: int
    delta: Fraction
    caps: tuple[int, ...]
    credits: tuple[int, ...]
    evicted: tuple[int, ...]
    phi: Fraction


class WeightedAllOrOne(OnlineAlgorithm):
    name = "waoo"

    def reset(self, k, family, weights=None):
        super().reset(k, family, weights)
        self.w = weights if isinstance(weights, WeightMap) else WeightMap(weights or {})
        self.full = full_mask(k)
        self.pages: dict[int, object] = {}
        self.slot_of_request: dict[int, int] = {}
        self.specific: dict[int, bool] = {}
        self.capacity: dict[int, Fraction] = {}
        self.credit: dict[int, Fraction] = {}
        self.cache: list[Optional[int]] = [None] * k
        self.latest_specific: list[int] = [0] * k
        self.events: list[RaiseEvent] = []
        self.redundant: list[int] = []
        self.phi = Fraction(0)
        self.t = 0
        for s in range(1, k + 1):
            self._serve(Request.specific(ARTIFICIAL_PAGE, s))

    # the public step only sees user requests; artificial ones go through _serve
    def step(self, request: Request) -> Config:
        if request.slots != self.full and len(slots_of(request.slots)) != 1:
            raise ParameterError(f"{request} is neither general nor specific")
        self.w[request.page]
        self._serve(request)
        return self.config()

    def config(self) -> Config:
        return tuple(None if t is None or self.pages[t] == ARTIFICIAL_PAGE else self.pages[t]
                     for t in self.cache)

    def _is_general(self, r: Request) -> bool:
        return r.slots == self.full and self.k > 1

    def _serve(self, r: Request) -> None:
        self.t += 1
        t = self.t
        self.pages[t] = r.page
        self.credit[t] = Fraction(0)
        if not self._is_general(r):
            s = slots_of(r.slots)[0]
            self.specific[t] = True
            self.slot_of_request[t] = s
            held = self.cache[s - 1]
            if held is not None and self.specific[held] and self.pages[held] == r.page:
                self.redundant.append(t)
                return
            self.capacity[t] = Fraction(0)
            self.latest_specific[s - 1] = t
            for i, u in enumerate(self.cache):
                if u is not None and not self.specific[u] and self.pages[u] == r.page:
                    self.cache[i] = None
            self.cache[s - 1] = t
            return
        self.specific[t] = False
        if any(u is not None and self.pages[u] == r.page for u in self.cache):
            self.redundant.append(t)
            return
        half = self.w[r.page] / 2
        while True:
            self._evict_full()
            A, B = self._good_slots(half)
            if len(A) > len(B):
                break
            self._raise(t, half, A)
        choice = sorted(set(A) - set(B))
        if not choice:
            raise InvariantViolation("no slot in A outside B")
        s = choice[0]
        self.cache[s - 1] = t
        self.slot_of_request[t] = s

    def _good_slots(self, half: Fraction) -> tuple[list[int], list[int]]:
        A, B = [], []
        for s in range(1, self.k + 1):
            u = self.cache[s - 1]
            holds_specific = u is not None and self.specific[u]
            if self.capacity[self.latest_specific[s - 1]] >= half and not holds_specific:
                A.append(s)
            if u is not None and not self.specific[u] and self.w[self.pages[u]] >= half:
                B.append(s)
        return A, B

    def _evict_full(self) -> list[int]:
        gone = sorted(u for u in self.cache if u is not None and self.credit[u] >= self.w[self.pages[u]])
        for u in gone:
            self.cache[self.cache.index(u)] = None
        if gone and self.events and not self.events[-1].evicted and self.events[-1].t == self.t:
            last = self.events[-1]
            self.events[-1] = RaiseEvent(last.t, last.delta, last.caps, last.credits, tuple(gone), last.phi)
        elif gone:
            self.events.append(RaiseEvent(self.t, Fraction(0), (), (), tuple(gone), self.phi))
        return gone

    def _raise(self, t: int, half: Fraction, A: list[int]) -> None:
        gaps = []
        for u in self.cache:
            if u is not None:
                gaps.append(self.w[self.pages[u]] - self.credit[u])
        for s in range(1, self.k + 1):
            if s not in A:
                gap = half - self.capacity[self.latest_specific[s - 1]]
                if gap > 0:
                    gaps.append(gap)
        gaps = [g for g in gaps if g > 0]
        if not gaps:
            raise InvariantViolation(f"raise at request {t} cannot make progress")
        delta = min(gaps)
        caps = tuple(self.latest_specific)
        credits = tuple(sorted(u for u in self.cache if u is not None))
        for u in caps:
            self.capacity[u] += delta
        for u in credits:
            self.credit[u] += delta
            if self.credit[u] > self.w[self.pages[u]]:
                raise InvariantViolation(f"credit of request {u} exceeds its weight")
        self.phi += delta * (len(caps) + len(credits))
        self.events.append(RaiseEvent(t, delta, caps, credits, (), self.phi))

    def run(self, seq: RequestSequence, weights=None) -> RunResult:
        w = weights if weights is not None else WeightMap.unit(seq.pages())
        self.reset(seq.k, seq.family, w)
        schedule = [self.step(r) for r in seq.requests]
        details = {
            "phi": self.phi,
            "events": list(self.events),
            "redundant": [u - self.k for u in self.redundant if u > self.k],
            "prefix": self.k,
        }
        return RunResult(schedule, schedule_cost(schedule, self.w), details=details)


def weighted_all_or_one(seq: RequestSequence, weights) -> RunResult:
    return WeightedAllOrOne().run(seq, weights)
