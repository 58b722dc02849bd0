"""Two-page adversary that makes every request fault for a deterministic algorithm.

Each round looks at which slots of the algorithm hold page ``P0`` (anything
else counts as ``P1``), picks a set of G lying entirely on one side, and
requests the other page there.  Alongside, one reference strategy per member
of Z and per complement stays in its own two-page configuration and pays 2
whenever a request misses it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import Request, RequestSequence, full_mask, schedule_cost, slots_of
from ..errors import InvariantViolation, ParameterError
from ..online.base import OnlineAlgorithm
from .gz import GZFamilies, check_gz

P0, P1 = 1, 2


@dataclass
class TwoPageAdversaryReport:
    k: int
    rounds: int
    alg: str
    alg_cost: int
    faults: int
    strategy_costs: list[int]
    setup_cost: int
    ratio_lb: float
    requests: list = field(default_factory=list, repr=False)

    def as_dict(self) -> dict:
        return {"k": self.k, "K": self.rounds, "alg": self.alg, "alg_cost": self.alg_cost,
                "faults": self.faults, "strategy_costs": self.strategy_costs,
                "setup_cost": self.setup_cost, "ratio_lb": self.ratio_lb}


def lemma2_adversary(fams: GZFamilies, alg: OnlineAlgorithm, rounds: int, seed: int = 0,
                     verify: bool = True) -> TwoPageAdversaryReport:
    """Run ``rounds`` adversarial requests against ``alg``.

    Strategy costs exclude the one-off cost (at most k) of loading each
    reference configuration; that is reported as ``setup_cost``.  The
    engine is deterministic, ``seed`` is accepted for interface symmetry.
    """
    if rounds < 0:
        raise ParameterError("rounds must be non-negative")
    k = fams.k
    full = full_mask(k)
    if verify and k <= 16:
        res = check_gz(fams)
        if not res.ok:
            raise ParameterError(f"families violate {res.violated} at {res.witness}")
    G = sorted(fams.G, key=slots_of)
    family = fams.family()
    strategies = list(fams.Z) + [full ^ z for z in fams.Z]
    costs = [0] * len(strategies)
    alg.reset(k, family)
    config = (None,) * k
    schedule, requests = [], []
    faults = 0
    for _ in range(rounds):
        X = sum(1 << (s - 1) for s in range(1, k + 1) if config[s - 1] == P0)
        choice = next((S for S in G if S & X == S or S & ~X & full == S), None)
        if choice is None:
            raise InvariantViolation(f"no set of G fits either side of {slots_of(X)}")
        page = P1 if choice & X == choice else P0
        r = Request(page, choice)
        config = alg.step(r)
        if not any(config[s - 1] == page for s in slots_of(choice)):
            raise InvariantViolation(f"{alg.name} left {r} unserved")
        faults += 1
        missed = 0
        for i, Zm in enumerate(strategies):
            # strategy Z keeps P0 on Z and P1 elsewhere
            holds = Zm if page == P0 else full ^ Zm
            if not holds & choice:
                costs[i] += 2
                missed += 1
        if missed > 1:
            raise InvariantViolation(f"{missed} reference strategies fault on {r}")
        schedule.append(config)
        requests.append(r)
    alg_cost = schedule_cost(schedule)
    best = min(costs) if costs else 0
    return TwoPageAdversaryReport(k, rounds, alg.name, alg_cost, faults, costs, k,
                        alg_cost / max(best, 1), requests)


def adversarial_sequence(report: TwoPageAdversaryReport, fams: GZFamilies) -> RequestSequence:
    return RequestSequence(fams.k, fams.family(), tuple(report.requests))
