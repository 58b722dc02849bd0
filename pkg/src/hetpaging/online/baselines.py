"""Classic paging policies.

They serve plain page sequences (``serve``) and, as online algorithms, request
sequences whose requests all name the whole cache.  ``LazyLRU`` is the odd
one out: it accepts any slot set and evicts the least recently used slot
among the requested ones.
"""

from __future__ import annotations

import random
from typing import Hashable, Sequence

from ..core import Config, Request, SlotSetFamily, full_mask, schedule_cost, slots_of
from ..errors import ParameterError
from .base import OnlineAlgorithm, RunResult


class PagingPolicy(OnlineAlgorithm):
    """Standard paging: every request may be served from any slot."""

    def reset(self, k, family=None, weights=None):
        super().reset(k, family or SlotSetFamily.standard(k), weights)
        self.config: list = [None] * k
        self.clock = 0
        self._reset_policy()

    def _reset_policy(self) -> None:
        pass

    def step(self, request: Request) -> Config:
        if request.slots != full_mask(self.k):
            raise ParameterError(f"{self.name} only serves requests for the whole cache")
        return self.access(request.page)

    def access(self, page: Hashable) -> Config:
        self.clock += 1
        if page in self.config:
            self._hit(self.config.index(page))
        else:
            if None in self.config:
                slot = self.config.index(None)
            else:
                slot = self._victim()
            self.config[slot] = page
            self._placed(slot)
        return tuple(self.config)

    def serve(self, pages: Sequence[Hashable], k: int) -> list[Config]:
        self.reset(k)
        return [self.access(p) for p in pages]

    def _hit(self, slot: int) -> None:
        pass

    def _placed(self, slot: int) -> None:
        pass

    def _victim(self) -> int:
        raise NotImplementedError


class LRU(PagingPolicy):
    name = "lru"

    def _reset_policy(self):
        self.last = [0] * self.k

    def _hit(self, slot):
        self.last[slot] = self.clock

    _placed = _hit

    def _victim(self):
        return min(range(self.k), key=lambda s: self.last[s])


class FIFO(PagingPolicy):
    name = "fifo"

    def _reset_policy(self):
        self.loaded = [0] * self.k

    def _placed(self, slot):
        self.loaded[slot] = self.clock

    def _victim(self):
        return min(range(self.k), key=lambda s: self.loaded[s])


class Marker(PagingPolicy):
    """Randomized marking; evicts a uniformly random unmarked page."""

    name = "marker"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def _reset_policy(self):
        self.rng = random.Random(self.seed)
        self.marked = [False] * self.k

    def _hit(self, slot):
        self.marked[slot] = True

    _placed = _hit

    def _victim(self):
        unmarked = [s for s in range(self.k) if not self.marked[s]]
        if not unmarked:
            self.marked = [False] * self.k
            unmarked = list(range(self.k))
        return self.rng.choice(unmarked)


class Belady(PagingPolicy):
    """Offline optimum for standard paging: evict the page requested furthest in the future."""

    name = "belady"

    def step(self, request):
        raise ParameterError("belady is offline; use run() or serve()")

    def serve(self, pages, k):
        self.reset(k)
        nxt = [0] * len(pages)
        last_seen: dict = {}
        for t in range(len(pages) - 1, -1, -1):
            nxt[t] = last_seen.get(pages[t], len(pages))
            last_seen[pages[t]] = t
        next_use = {}
        out = []
        for t, p in enumerate(pages):
            if p not in self.config:
                if None in self.config:
                    slot = self.config.index(None)
                else:
                    slot = max(range(k), key=lambda s: (next_use[self.config[s]], -s))
                self.config[slot] = p
            next_use[p] = nxt[t]
            out.append(tuple(self.config))
        return out

    def run(self, seq, weights=None):
        full = full_mask(seq.k)
        if any(r.slots != full for r in seq.requests):
            raise ParameterError("belady only serves requests for the whole cache")
        schedule = self.serve([r.page for r in seq.requests], seq.k)
        return RunResult(schedule, schedule_cost(schedule, weights))


class LazyLRU(OnlineAlgorithm):
    """Lazy LRU over arbitrary slot sets (used as the All-or-One baseline).

    A request already served is a hit and refreshes the serving slot.  A miss
    loads the page into the lowest empty requested slot, or else into the
    requested slot used least recently.
    """

    name = "lru-aoo"

    def reset(self, k, family, weights=None):
        super().reset(k, family, weights)
        self.config = [None] * k
        self.last = [0] * k
        self.clock = 0

    def step(self, request: Request) -> Config:
        self.clock += 1
        slots = [s - 1 for s in slots_of(request.slots)]
        hit = [s for s in slots if self.config[s] == request.page]
        if hit:
            slot = max(hit, key=lambda s: self.last[s])
        else:
            empty = [s for s in slots if self.config[s] is None]
            slot = empty[0] if empty else min(slots, key=lambda s: self.last[s])
            self.config[slot] = request.page
        self.last[slot] = self.clock
        return tuple(self.config)


STANDARD_POLICIES = {"lru": LRU, "fifo": FIFO, "marker": Marker, "belady": Belady}


def make_policy(name: str, seed: int = 0) -> PagingPolicy:
    try:
        cls = STANDARD_POLICIES[name]
    except KeyError:
        raise ParameterError(f"unknown standard paging policy {name!r}") from None
    return cls(seed) if cls is Marker else cls()
