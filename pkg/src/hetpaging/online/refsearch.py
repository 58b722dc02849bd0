from __future__ import annotations

from ..core import Config, Request, is_satisfiable, satisfies, slots_of
from ..errors import InvariantViolation, NotLaminarError
from ..laminar import RepSet
from .base import OnlineAlgorithm


def _proper_subset(a: int, b: int) -> bool:
    return a != b and a & b == a


class RefSearch(OnlineAlgorithm):
    """Phase-based algorithm for laminar slot families.

    Every representative request of the phase owns exactly one slot.  On a
    fault the requested page takes a slot in its set that is free, or one
    that serves a representative request on a strictly larger set; in the
    latter case the displaced request is re-placed the same way, one level
    up the tree, until a free slot ends the chain.
    """

    name = "ref"

    def __init__(self, check_invariants: bool = True):
        self.check_invariants = check_invariants

    def reset(self, k, family, weights=None):
        if not family.laminar:
            raise NotLaminarError("ref needs a laminar slot family")
        super().reset(k, family, weights)
        self.cache: list = [None] * k
        self.R = RepSet()
        self.t = 0
        self._starts: list[int] = []
        self.phase_costs: list[int] = []
        covered = 0
        for m in family.members:
            covered |= m
        # slots outside every member never serve anything, so they are left out of the bound
        self.bound = 2 * family.mass - bin(covered).count("1")

    def step(self, request: Request) -> Config:
        self.t += 1
        if self.t == 1 or not is_satisfiable(self.R.requests | {request}, self.k, self.family):
            self._start_phase()
        if satisfies(self.cache, request):
            self._absorb_redundant(request)
        else:
            self._serve(request)
        if self.check_invariants:
            self._check()
        return tuple(self.cache)

    def _start_phase(self) -> None:
        self.R.clear()
        self.cache = [None] * self.k
        self._starts.append(self.t)
        self.phase_costs.append(0)

    def _absorb_redundant(self, r: Request) -> None:
        removed, joins = self.R.add(r)
        if not joins:
            return
        taken = set(self.R.assignment)
        for s in slots_of(r.slots):
            if self.cache[s - 1] == r.page and s not in taken:
                self.R.assignment[s] = r
                return
        raise InvariantViolation("redundant request has no free serving slot")

    def _serve(self, r: Request) -> None:
        # ancestors of r that leave rep; their slots count as free for the chain
        leaving = {q for q in self.R.rep if q.page == r.page and _proper_subset(r.slots, q.slots)}
        assign = dict(self.R.assignment)
        free_pool = {s for s, q in assign.items() if q in leaving}
        chain: list[tuple[int, Request]] = []
        cur = r
        while True:
            candidates = slots_of(cur.slots)
            free = [s for s in candidates if s not in assign or s in free_pool]
            if free:
                chain.append((free[0], cur))
                break
            up = [s for s in candidates if _proper_subset(cur.slots, assign[s].slots)]
            if not up:
                raise InvariantViolation("no free or higher slot for a satisfiable request")
            s = up[0]
            displaced = assign[s]
            chain.append((s, cur))
            assign[s] = cur
            cur = displaced
        self.R.add(r)
        for s, q in chain:
            if self.cache[s - 1] != q.page:
                self.phase_costs[-1] += 1
            self.cache[s - 1] = q.page
            self.R.assignment[s] = q
        if self.phase_costs[-1] > self.bound:
            raise InvariantViolation(f"phase cost {self.phase_costs[-1]} exceeds the per-phase bound {self.bound}")

    def _check(self) -> None:
        assignment = self.R.assignment
        served = set(assignment.values())
        if served != self.R.rep or len(served) != len(assignment):
            raise InvariantViolation("rep requests and slot assignment disagree")
        for s, q in assignment.items():
            if not (q.slots >> (s - 1)) & 1 or self.cache[s - 1] != q.page:
                raise InvariantViolation(f"slot {s} does not serve its assigned request {q}")

    def phase_starts(self):
        return list(self._starts)

    def diagnostics(self):
        return {"phase_costs": list(self.phase_costs), "phase_bound": self.bound}
