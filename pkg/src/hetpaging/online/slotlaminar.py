"""Slot-laminar paging via one page-laminar run per family member.

For every member S the requests confined to S are relaxed to page-set
requests over virtual pages ``(p, s)`` and served by the inner page-laminar
algorithm with |S| slots.  A slot assignment ``B[S]`` mirrors each inner
cache.  Two conditions are kept after every request:

1. ``B[S]`` holds exactly the virtual pages the inner run for S caches.
2. If a child ``c`` of S holds ``(p, s)`` in slot x and S also holds it,
   S holds it in slot x as well.

Retrievals that would break (2) are repaired by permuting at most three
slots in S and in all of its ancestors.  The output is the assignment of the
root(s), with virtual pages mapped back to real ones.
"""

from __future__ import annotations

from ..core import RequestSequence, schedule_cost, slot_mask
from ..errors import InvariantViolation, NotLaminarError
from ..offline.relax import relax_to_page_laminar
from .base import RunResult
from .pagelaminar import PageLaminarReduction


class SlotLaminarReduction:
    def __init__(self, inner: PageLaminarReduction | str = "lru", seed: int = 0, debug: bool = False):
        self.inner = PageLaminarReduction(inner, seed) if isinstance(inner, str) else inner
        self.name = f"sl:{self.inner.name}"
        self.debug = debug

    def run(self, seq: RequestSequence, weights=None) -> RunResult:
        if not seq.family.laminar:
            raise NotLaminarError("slot-laminar reduction needs a laminar family")
        forest = seq.family.forest()
        self.forest = forest
        self.parent = {n: forest.parent[n] for n in forest}
        self.cached: dict[frozenset, list[set]] = {}
        inner_costs = {}
        for node in forest:
            pseq, times = relax_to_page_laminar(seq, slot_mask(node))
            res = self.inner.run(pseq)
            inner_costs[node] = res.cost
            self.cached[node] = [{v for v in c if v is not None} for c in res.schedule]
        self.B: dict[frozenset, dict[int, tuple]] = {n: {} for n in forest}
        self.current: dict[frozenset, set] = {n: set() for n in forest}
        self.moves = 0
        pos = {n: 0 for n in forest}
        node_of_mask = {slot_mask(n): n for n in forest}
        virtual, real = [], []
        for r in seq.requests:
            node = node_of_mask[r.slots]
            chain = [node] + forest.ancestors(node)
            for S in chain:
                new = self.cached[S][pos[S]]
                pos[S] += 1
                self._mirror(S, new)
            if self.debug:
                self.check()
            row = [None] * seq.k
            for root in forest.roots:
                for s, v in self.B[root].items():
                    row[s - 1] = v
            virtual.append(tuple(row))
            real.append(tuple(None if v is None else v[0] for v in row))
        virtual_cost = schedule_cost(virtual)
        total_inner = sum(inner_costs.values())
        if virtual_cost > 3 * total_inner:
            raise InvariantViolation(f"root retrievals {virtual_cost} exceed 3 x inner cost {total_inner}")
        details = {
            "virtual_cost": virtual_cost,
            "inner_costs": {tuple(sorted(n)): c for n, c in inner_costs.items()},
            "inner_total": total_inner,
            "virtual_schedule": virtual,
        }
        return RunResult(real, schedule_cost(real, weights), details=details)

    def _mirror(self, S: frozenset, new: set) -> None:
        B = self.B[S]
        self.current[S] = new
        for s in [s for s, v in B.items() if v not in new]:
            del B[s]
        held = set(B.values())
        for v in sorted(new - held):
            self._retrieve(S, v)

    def _slot_of(self, S: frozenset | None, v) -> int | None:
        if S is None:
            return None
        for s, u in self.B[S].items():
            if u == v:
                return s
        return None

    def _retrieve(self, S: frozenset, v: tuple) -> None:
        B = self.B[S]
        child = self.forest.child_containing(S, v[1])
        parent = self.parent[S]
        s1 = self._slot_of(child, v)
        s2 = self._slot_of(parent, v)
        vacant = [s for s in sorted(S) if s not in B]
        if not vacant:
            raise InvariantViolation("inner cache larger than its slot set")
        if s1 in vacant:
            sp = s1
        elif s2 in vacant:
            sp = s2
        else:
            sp = vacant[0]
        B[sp] = v
        target = sp
        if s1 is not None and s1 != sp:
            B[sp], B[s1] = B[s1], v
            target = s1
        if parent is None:
            return
        if target != sp:
            if s2 is None:
                if self.B[parent].get(target) == B[sp]:
                    self._permute_up(parent, {target: sp, sp: target})
            elif s2 == sp:
                self._permute_up(parent, {target: sp, sp: target})
            elif s2 != target:
                self._permute_up(parent, {s2: target, target: sp, sp: s2})
        elif s2 is not None and s2 != sp:
            self._permute_up(parent, {s2: sp, sp: s2})

    def _permute_up(self, node: frozenset | None, move: dict[int, int]) -> None:
        """Apply ``move`` (old slot -> new slot) to ``node`` and every ancestor."""
        while node is not None:
            B = self.B[node]
            old = {s: B.pop(s) for s in move if s in B}
            for s, v in old.items():
                B[move[s]] = v
            self.moves += 1
            node = self.parent[node]

    def check(self) -> None:
        for S in self.forest:
            B = self.B[S]
            held = list(B.values())
            if set(held) != self.current[S]:
                raise InvariantViolation(f"set {sorted(S)} does not mirror its inner cache")
            if len(held) != len(set(held)):
                raise InvariantViolation(f"set {sorted(S)} holds a virtual page twice")
            if any(s not in S for s in B):
                raise InvariantViolation(f"set {sorted(S)} uses a slot outside itself")
            for c in self.forest.children[S]:
                for s, v in self.B[c].items():
                    own = self._slot_of(S, v)
                    if own is not None and own != s:
                        raise InvariantViolation(
                            f"{v} sits in slot {s} for {sorted(c)} but slot {own} for {sorted(S)}")


def slot_laminar_reduce(seq: RequestSequence, inner: str = "lru", seed: int = 0, debug: bool = False) -> list:
    return SlotLaminarReduction(inner, seed, debug).run(seq).schedule
