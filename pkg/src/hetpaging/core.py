"""Requests, families, configurations, schedules and their basic operations.

Slots are numbered 1..k.  A slot set is an ``int`` bitmask with bit j-1 set
for slot j.  A cache configuration is a tuple of length k whose entries are
page ids or ``None`` for an empty slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import CapExceeded, ParameterError, UnknownPage
from .laminar import LaminarForest, is_laminar_masks, rep

Page = Hashable
SlotSet = int
Config = tuple
Schedule = list

GENERIC_SAT_CAP = 16
CLOSURE_CAP = 24


def slot_mask(slots: Iterable[int]) -> SlotSet:
    m = 0
    for s in slots:
        if s < 1:
            raise ParameterError(f"slot index {s} is not positive")
        m |= 1 << (s - 1)
    return m


def slots_of(mask: SlotSet) -> tuple[int, ...]:
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


def full_mask(k: int) -> SlotSet:
    return (1 << k) - 1


def format_slots(mask: SlotSet, k: int | None = None) -> str:
    if k is not None and mask == full_mask(k):
        return "*"
    return ",".join(map(str, slots_of(mask)))


def is_subset(a: SlotSet, b: SlotSet) -> bool:
    return a & b == a


@dataclass(frozen=True, order=True)
class Request:
    page: Page
    slots: SlotSet

    def __post_init__(self):
        if self.slots <= 0:
            raise ParameterError("request slot set must be non-empty")

    @classmethod
    def general(cls, page: Page, k: int) -> "Request":
        return cls(page, full_mask(k))

    @classmethod
    def specific(cls, page: Page, slot: int) -> "Request":
        return cls(page, slot_mask([slot]))

    @classmethod
    def on(cls, page: Page, slots: Iterable[int]) -> "Request":
        return cls(page, slot_mask(slots))

    def __repr__(self) -> str:
        return f"<{self.page!r},{{{format_slots(self.slots)}}}>"


@dataclass(frozen=True)
class SlotSetFamily:
    """The requestable slot sets, in a fixed order."""

    k: int
    members: tuple[SlotSet, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError("cache size must be at least 1")
        full = full_mask(self.k)
        seen = set()
        for m in self.members:
            if m <= 0 or m & ~full:
                raise ParameterError(f"slot set {slots_of(m)} is not a non-empty subset of [{self.k}]")
            if m in seen:
                raise ParameterError(f"duplicate slot set {slots_of(m)}")
            seen.add(m)
        object.__setattr__(self, "_lookup", frozenset(self.members))

    @classmethod
    def from_sets(cls, k: int, sets: Iterable[Iterable[int]]) -> "SlotSetFamily":
        masks = []
        for s in sets:
            m = slot_mask(s)
            if m not in masks:
                masks.append(m)
        return cls(k, tuple(masks))

    @classmethod
    def standard(cls, k: int) -> "SlotSetFamily":
        return cls(k, (full_mask(k),))

    @classmethod
    def all_or_one(cls, k: int) -> "SlotSetFamily":
        singles = tuple(1 << j for j in range(k))
        return cls(k, (full_mask(k),) + tuple(s for s in singles if s != full_mask(k)))

    @classmethod
    def power_set(cls, k: int) -> "SlotSetFamily":
        return cls(k, tuple(range(1, 1 << k)))

    @classmethod
    def uniform(cls, k: int, m: int) -> "SlotSetFamily":
        return cls(k, tuple(slot_mask(c) for c in combinations(range(1, k + 1), m)))

    def __contains__(self, mask: SlotSet) -> bool:
        return mask in self._lookup

    def __iter__(self) -> Iterator[SlotSet]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def laminar(self) -> bool:
        return is_laminar_masks(self.members)

    @property
    def mass(self) -> int:
        return sum(bin(m).count("1") for m in self.members)

    def forest(self) -> LaminarForest:
        return LaminarForest(slots_of(m) for m in self.members)


@dataclass(frozen=True)
class RequestSequence:
    k: int
    family: SlotSetFamily
    requests: tuple[Request, ...]

    def __post_init__(self):
        if self.family.k != self.k:
            raise ParameterError("family and sequence disagree on k")
        object.__setattr__(self, "requests", tuple(self.requests))
        for t, r in enumerate(self.requests, 1):
            if r.slots not in self.family:
                raise ParameterError(f"request {t} uses slot set {slots_of(r.slots)} outside the family")

    def __len__(self) -> int:
        return len(self.requests)

    def __iter__(self) -> Iterator[Request]:
        return iter(self.requests)

    def __getitem__(self, i):
        return self.requests[i]

    def pages(self) -> list:
        """Distinct pages in order of first request."""
        return list(dict.fromkeys(r.page for r in self.requests))


@dataclass(frozen=True)
class PageSetSequence:
    """A page-laminar instance: each request is a member of ``page_family``."""

    k: int
    page_family: tuple[frozenset, ...]
    requests: tuple[frozenset, ...]

    def __post_init__(self):
        fam = tuple(dict.fromkeys(frozenset(s) for s in self.page_family))
        object.__setattr__(self, "page_family", fam)
        object.__setattr__(self, "requests", tuple(frozenset(r) for r in self.requests))
        members = set(fam)
        for t, r in enumerate(self.requests, 1):
            if r not in members:
                raise ParameterError(f"request {t} is not a member of the page family")

    def __len__(self) -> int:
        return len(self.requests)

    def __iter__(self):
        return iter(self.requests)

    def forest(self) -> LaminarForest:
        return LaminarForest(self.page_family)

    def pages(self) -> list:
        return sorted({p for s in self.page_family for p in s})


class WeightMap(Mapping):
    """Exact non-negative page weights.  Page 0 always weighs 0."""

    def __init__(self, weights: Mapping | None = None):
        self._w: dict = {}
        for p, w in (weights or {}).items():
            fw = Fraction(w)
            if fw < 0:
                raise ParameterError(f"negative weight for page {p!r}")
            self._w[p] = fw
        if self._w.get(0, 0) != 0:
            raise ParameterError("page 0 is reserved with weight 0")

    def __getitem__(self, page) -> Fraction:
        if page in self._w:
            return self._w[page]
        if page == 0:
            return Fraction(0)
        raise UnknownPage(f"no weight for page {page!r}")

    def __iter__(self):
        return iter(self._w)

    def __len__(self) -> int:
        return len(self._w)

    def __repr__(self) -> str:
        return f"WeightMap({self._w!r})"

    @classmethod
    def unit(cls, pages: Iterable) -> "WeightMap":
        return cls({p: 1 for p in pages if p != 0})


def empty_config(k: int) -> Config:
    return (None,) * k


def satisfies(config: Sequence, req: Union[Request, frozenset]) -> bool:
    """Does ``config`` serve a slot request or a page-set request?"""
    if isinstance(req, Request):
        mask, i = req.slots, 0
        while mask:
            if mask & 1 and i < len(config) and config[i] == req.page:
                return True
            mask >>= 1
            i += 1
        return False
    return any(c is not None and c in req for c in config)


def schedule_cost(schedule: Sequence[Sequence], weights: Optional[Mapping] = None):
    """Total retrieval cost; an int for unit weights, a Fraction otherwise."""
    total = Fraction(0) if weights is not None else 0
    prev: Sequence = ()
    for config in schedule:
        for s, p in enumerate(config):
            if p is not None and (s >= len(prev) or prev[s] != p):
                total += weights[p] if weights is not None else 1
        prev = config
    return total


def set_schedule_cost(schedule: Sequence[Iterable]) -> int:
    """Retrievals when slots are interchangeable: pages cached now but not just before."""
    total, prev = 0, set()
    for c in schedule:
        cur = {p for p in c if p is not None}
        total += len(cur - prev)
        prev = cur
    return total


def validate_schedule(seq, schedule: Sequence[Sequence]) -> Optional[int]:
    """``None`` if every configuration serves its request, else the first bad time (1-based)."""
    if len(seq) != len(schedule):
        raise ParameterError(f"schedule has {len(schedule)} steps for {len(seq)} requests")
    for t, (req, config) in enumerate(zip(seq, schedule), 1):
        if len(config) != seq.k or not satisfies(config, req):
            return t
    return None


@dataclass(frozen=True)
class FamilyStats:
    mass: int
    laminar: bool
    height: Optional[int]
    closure_size: Optional[int]
    size: int = field(default=0)


def closure_size(family: SlotSetFamily, cap: int = CLOSURE_CAP) -> Optional[int]:
    if family.k > cap:
        return None
    seen: set[int] = set()
    for m in family.members:
        sub = m
        while sub:
            seen.add(sub)
            sub = (sub - 1) & m
    return len(seen)


def family_stats(family: SlotSetFamily, closure_cap: int = CLOSURE_CAP) -> FamilyStats:
    lam = family.laminar
    return FamilyStats(
        mass=family.mass,
        laminar=lam,
        height=family.forest().height if lam else None,
        closure_size=closure_size(family, closure_cap),
        size=len(family),
    )


def min_change_configuration(requests: Iterable[Request], k: int,
                             base: Optional[Sequence] = None) -> Optional[Config]:
    """A configuration serving all ``requests`` with the fewest slots changed from ``base``.

    Slots that no request needs keep their ``base`` content.  Returns ``None``
    when the requests are not jointly satisfiable.  Search order is by
    (page, slot mask) with the lowest slot tried first, and the first
    optimum found wins.
    """
    reqs = sorted(set(requests), key=lambda r: (_page_key(r.page), r.slots))
    content = list(base) if base is not None else [None] * k
    fixed = [False] * k
    slot_lists = {r.slots: [s - 1 for s in slots_of(r.slots)] for r in reqs}
    for sl in slot_lists.values():
        if sl and sl[-1] >= k:
            raise ParameterError("request names a slot outside [k]")
    best: list = [None, None]

    def dfs(i: int, cost: int) -> bool:
        if best[0] is not None and cost >= best[0]:
            return False
        if i == len(reqs):
            best[0], best[1] = cost, tuple(content)
            return cost == 0
        r = reqs[i]
        slots = slot_lists[r.slots]
        p = r.page
        for s in slots:
            if fixed[s] and content[s] == p:
                return dfs(i + 1, cost)
        for s in slots:
            if not fixed[s] and content[s] == p:
                fixed[s] = True
                done = dfs(i + 1, cost)
                fixed[s] = False
                if done:
                    return True
        for s in slots:
            if not fixed[s] and content[s] != p:
                old = content[s]
                content[s], fixed[s] = p, True
                done = dfs(i + 1, cost + 1)
                content[s], fixed[s] = old, False
                if done:
                    return True
        return False

    dfs(0, 0)
    return best[1]


def _page_key(p):
    return (0, p, "") if isinstance(p, int) else (1, 0, repr(p))


def is_satisfiable(requests: Iterable[Request], k: int, family: Optional[SlotSetFamily] = None,
                   cap: int = GENERIC_SAT_CAP) -> bool:
    """Can a single configuration serve every request?

    With a laminar ``family`` this is the counting test on representative
    requests; otherwise an exhaustive backtracking search (``k <= cap``).
    """
    reqs = set(requests)
    if family is not None and family.laminar and all(r.slots in family for r in reqs):
        reps = rep(reqs)
        for m in family.members:
            if sum(1 for r in reps if r.slots & m == r.slots) > bin(m).count("1"):
                return False
        return True
    if k > cap:
        raise CapExceeded(f"generic satisfiability limited to k <= {cap}")
    return min_change_configuration(reqs, k) is not None
