"""Reduction from Vertex Cover to All-or-One paging with k+2 slots.

Slots 1..k are vertex slots, slot k+1 is the gadget slot and slot k+2 the
junk slot.  The instance has a schedule with at most ``F`` retrievals iff
the graph has a vertex cover of size k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from ..core import Request, RequestSequence, SlotSetFamily, schedule_cost, validate_schedule
from ..errors import InvariantViolation, ParameterError, TraceParseError


@dataclass(frozen=True)
class VCInstance:
    n: int
    edges: tuple[tuple[int, int], ...]
    k: int

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError("the graph needs at least two vertices")
        if not 1 <= self.k <= self.n:
            raise ParameterError(f"cover size {self.k} outside 1..{self.n}")
        norm = []
        for u, v in self.edges:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise ParameterError(f"bad edge ({u}, {v})")
            norm.append((min(u, v), max(u, v)))
        if len(set(norm)) != len(norm):
            raise ParameterError("duplicate edge")
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges) + 1

    @property
    def P(self) -> int:
        return self.k * (self.n - self.k) + 1

    @property
    def B(self) -> int:
        return self.m * self.P

    @property
    def F_prime(self) -> int:
        return (2 * self.n - self.k + 2) * self.B

    @property
    def F(self) -> int:
        return self.F_prime + 7 * self.P * (self.m - 1)

    def tau(self, b: int, j: int) -> int:
        return 9 * (b * self.n + j)

    def tau_end(self, b: int, j: int) -> int:
        return self.tau(b, j) + 9 * self.n - 6

    def theta(self, b: int) -> int:
        return self.tau_end(b, 0) - 2

    def theta_end(self, b: int) -> int:
        return self.tau_end(b, 0) - 1

    def is_cover(self, cover) -> bool:
        c = set(cover)
        return all(u in c or v in c for u, v in self.edges)

    def quantities(self) -> dict:
        return {"F": self.F, "F_prime": self.F_prime, "m": self.m, "P": self.P, "B": self.B}


@dataclass
class VCReduction:
    instance: VCInstance
    seq: RequestSequence
    times: list[int]
    labels: dict = field(default_factory=dict)
    roles: list = field(default_factory=list)

    @cached_property
    def index_of_time(self) -> dict[int, int]:
        return {t: i for i, t in enumerate(self.times)}

    @property
    def threshold(self) -> int:
        return self.instance.F


def _timeline(inst: VCInstance) -> dict[int, tuple]:
    """Original time -> (page label, slot or None for a general request, role)."""
    k, n = inst.k, inst.n
    gadget, junk = k + 1, k + 2
    events: dict[int, tuple] = {}

    def put(t, label, slot, role=None):
        if t in events:
            raise InvariantViolation(f"two requests at time {t}")
        events[t] = (label, slot, role)

    for b in range(inst.B):
        for j in range(n):
            put(inst.tau(b, j), ("x", b, j), None)
            put(inst.tau_end(b, j), ("x", b, j), None)
        put(inst.theta(b), ("y", b), gadget)
        put(inst.theta_end(b), ("y", b), junk)
    for p in range(inst.P):
        for e, (u, v) in enumerate(inst.edges):
            beta = p * inst.m + e
            a, c = inst.tau_end(beta, u), inst.tau_end(beta, v)
            put(a + 1, ("h", p, e, "u"), gadget, "hu_in")
            put(a + 2, ("z", p, e, "u"), junk)
            put(a + 3, ("g", p, e, "u"), None, "gu")
            put(a + 4, ("z", p, e, "u"), junk)
            put(a + 5, ("h", p, e, "v"), None, "hv_in")
            put(c + 1, ("h", p, e, "u"), None, "hu_out")
            put(c + 2, ("z", p, e, "v"), junk)
            put(c + 3, ("g", p, e, "v"), None, "gv")
            put(c + 4, ("z", p, e, "v"), junk)
            put(c + 5, ("h", p, e, "v"), gadget, "hv_out")
    return events


def vc_reduce(inst: VCInstance) -> VCReduction:
    """The reduced request sequence with empty time steps removed."""
    events = _timeline(inst)
    K = inst.k + 2
    page_of: dict = {}
    requests, times = [], sorted(events)
    for t in times:
        label, slot, _ = events[t]
        page = page_of.setdefault(label, len(page_of) + 1)
        requests.append(Request.general(page, K) if slot is None else Request.specific(page, slot))
    seq = RequestSequence(K, SlotSetFamily.all_or_one(K), tuple(requests))
    roles = [events[t][2] for t in times]
    return VCReduction(inst, seq, times, {p: lab for lab, p in page_of.items()}, roles)


def vc_solution_from_cover(inst: VCInstance, cover, reduction: VCReduction | None = None) -> list[tuple]:
    """Schedule with exactly ``F`` retrievals built from a size-k vertex cover."""
    cover = sorted(set(cover))
    if len(cover) != inst.k or not inst.is_cover(cover):
        raise ParameterError(f"{cover} is not a vertex cover of size {inst.k}")
    red = reduction or vc_reduce(inst)
    home = {j: i + 1 for i, j in enumerate(cover)}
    gadget, junk = inst.k + 1, inst.k + 2
    config: list = [None] * (inst.k + 2)
    out = []
    for r, role in zip(red.seq.requests, red.roles):
        label = red.labels[r.page]
        if label[0] == "x":
            slot = home.get(label[2], junk)
        elif role is None:
            slot = r.slots.bit_length()
        else:
            u, v = inst.edges[label[2]]
            if u in home:
                # u-solution: g_u sits in u's vertex slot, h_u waits in the gadget slot
                slot = {"hu_in": gadget, "gu": home[u], "hv_in": junk, "hu_out": gadget,
                        "gv": gadget, "hv_out": gadget}[role]
            else:
                slot = {"hu_in": gadget, "gu": gadget, "hv_in": gadget, "hu_out": junk,
                        "gv": home[v], "hv_out": gadget}[role]
        config[slot - 1] = r.page
        out.append(tuple(config))
    bad = validate_schedule(red.seq, out)
    if bad is not None:
        raise InvariantViolation(f"cover schedule misses request {bad}")
    cost = schedule_cost(out)
    if cost != inst.F:
        raise InvariantViolation(f"cover schedule costs {cost}, expected {inst.F}")
    return out


def parse_graph(text: str) -> VCInstance:
    """Graph file: ``n <int>``, ``k <int>``, then ``e <u> <v>`` lines."""
    n = k = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "n" and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "k" and len(parts) == 2:
                k = int(parts[1])
            elif parts[0] == "e" and len(parts) == 3:
                edges.append((int(parts[1]), int(parts[2])))
            else:
                raise ValueError
        except ValueError:
            raise TraceParseError(f"cannot parse graph line {raw!r}", lineno) from None
    if n is None or k is None:
        raise TraceParseError("graph file needs both n and k lines")
    return VCInstance(n, tuple(edges), k)
