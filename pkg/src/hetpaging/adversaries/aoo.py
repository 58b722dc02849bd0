"""Randomized phase adversary for All-or-One paging with k+1 pages.

Each phase the adversary swaps one resident page for the outside page (its
only cost), requests the newcomer generally, and then pins a growing random
prefix of the slots with specific requests, re-requesting the newcomer
after each round.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ..core import Request, RequestSequence, SlotSetFamily, schedule_cost
from ..errors import InvariantViolation, ParameterError
from ..online.base import OnlineAlgorithm

DEFAULT_REPS = 64


def harmonic(k: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, k + 1)), Fraction(0))


def lower_bound(k: int) -> Fraction:
    return 2 * harmonic(k) - 1


@dataclass
class AOOReport:
    k: int
    phases: int
    reps: int
    seed: int
    alg: str
    alg_cost: int
    adv_cost: int
    ratio: float

    def as_dict(self) -> dict:
        return {"k": self.k, "L": self.phases, "reps": self.reps, "seed": self.seed, "alg": self.alg,
                "alg_cost": self.alg_cost, "adv_cost": self.adv_cost, "ratio": self.ratio,
                "bound": float(lower_bound(self.k))}


def adversary_sequence(k: int, phases: int, seed: int, reps: int = DEFAULT_REPS) -> tuple[list[Request], int]:
    """Warm-up requests (page i in slot i) followed by the phases.

    Returns the requests and the length of the warm-up prefix.
    """
    if k < 1 or phases < 0 or reps < 1:
        raise ParameterError("need k >= 1, phases >= 0 and reps >= 1")
    rng = random.Random(seed)
    resident = list(range(1, k + 1))
    outside = k + 1
    reqs = [Request.specific(resident[i], i + 1) for i in range(k)]
    warmup = len(reqs)
    for _ in range(phases):
        order = list(range(1, k + 1))
        rng.shuffle(order)
        last = order[-1]
        resident[last - 1], outside = outside, resident[last - 1]
        newcomer = resident[last - 1]
        reqs.append(Request.general(newcomer, k))
        for s in range(1, k):
            stage = [Request.specific(resident[i - 1], i) for i in order[:s]] + [Request.general(newcomer, k)]
            reqs.extend(stage * reps)
    return reqs, warmup


def all_or_one_adversary(k: int, phases: int, seed: int, alg: OnlineAlgorithm,
                         reps: int = DEFAULT_REPS) -> AOOReport:
    reqs, warmup = adversary_sequence(k, phases, seed, reps)
    seq = RequestSequence(k, SlotSetFamily.all_or_one(k), tuple(reqs))
    result = alg.run(seq)
    prefix = schedule_cost(result.schedule[:warmup])
    alg_cost = result.cost - prefix
    if alg_cost < 0:
        raise InvariantViolation("negative algorithm cost after warm-up")
    adv_cost = phases
    return AOOReport(k, phases, reps, seed, alg.name, alg_cost, adv_cost, alg_cost / max(adv_cost, 1))
