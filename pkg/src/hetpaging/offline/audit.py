"""Replay a Weighted All-Or-One run against a reference schedule.

The reference (normally optimal) schedule fixes eviction indicators ``x`` and
per-slot retrieval spends ``y``.  Their weighted sum, the pseudo-cost, must
stay within twice the reference cost; the residual cost must fall at least
as fast as the algorithm raises, and the potential at most 2k times as fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..core import RequestSequence, WeightMap, full_mask, schedule_cost, slots_of
from ..errors import InvariantViolation, ParameterError
from ..online.base import RunResult


@dataclass
class PrimalDualAudit:
    x: dict = field(default_factory=dict)
    y: dict = field(default_factory=dict)
    pseudo_cost: Fraction = Fraction(0)
    reference_cost: Fraction = Fraction(0)
    residual: list = field(default_factory=list)
    phi: list = field(default_factory=list)


def primal_dual_audit(seq: RequestSequence, weights: WeightMap, reference: Sequence[Sequence],
                      run: RunResult) -> PrimalDualAudit:
    """Check the charging argument on one run; raises InvariantViolation on failure.

    Times are those of the algorithm's own numbering: the k artificial
    requests first, then the user requests it did not find redundant.
    """
    k = seq.k
    if len(reference) != len(seq):
        raise ParameterError("reference schedule length differs from the sequence")
    redundant = set(run.details["redundant"])
    kept = [i for i in range(len(seq)) if i + 1 not in redundant]
    # positions in the restricted sequence -> the algorithm's request times
    times = list(range(1, k + 1)) + [k + 1 + i for i in kept]
    # the artificial prefix holds page 0 everywhere, which weighs nothing
    pages = [0] * k + [seq.requests[i].page for i in kept]
    slots = [1 << j for j in range(k)] + [seq.requests[i].slots for i in kept]
    configs = [(0,) * k] * k + [tuple(reference[i]) for i in kept]
    T = len(pages)
    full = full_mask(k)
    general = [m == full and k > 1 for m in slots]
    w = weights

    def held_until(t, s):
        u = t
        while u + 1 < T and configs[u + 1][s - 1] == pages[t]:
            u += 1
        return u

    x: dict[int, int] = {}
    for t in range(T):
        serving = [s for s in slots_of(slots[t]) if configs[t][s - 1] == pages[t]]
        if not serving:
            raise InvariantViolation(f"reference schedule misses request at position {t + 1}")
        s = max(serving, key=lambda s: (held_until(t, s), -s))
        end = held_until(t, s)
        reused = any(pages[u] == pages[t] and (slots[u] >> (s - 1)) & 1 for u in range(t + 1, end + 1))
        x[times[t]] = int(end + 1 < T and not reused)

    y: dict[int, Fraction] = {}
    for t in range(T):
        if general[t]:
            continue
        s = slots_of(slots[t])[0]
        nxt = next((u for u in range(t + 1, T) if not general[u] and slots[u] == slots[t]), T)
        spent = Fraction(0)
        for u in range(t + 1, nxt):
            p = configs[u][s - 1]
            if p is not None and p != configs[u - 1][s - 1]:
                spent += w[p]
        y[times[t]] = spent
    page_at = dict(zip(times, pages))

    ref_cost = schedule_cost(configs, w)
    pseudo = sum((w[page_at[t]] * xt for t, xt in x.items()), Fraction(0)) + sum(y.values(), Fraction(0))
    if pseudo > 2 * ref_cost:
        raise InvariantViolation(f"pseudo-cost {pseudo} exceeds twice the reference cost {ref_cost}")

    credit: dict[int, Fraction] = {}
    cap: dict[int, Fraction] = {}

    def residual():
        r = Fraction(0)
        for t, xt in x.items():
            r += max(Fraction(0), w[page_at[t]] * xt - credit.get(t, 0))
        for t, yt in y.items():
            r += max(Fraction(0), yt - cap.get(t, 0))
        return r

    audit = PrimalDualAudit(x, y, pseudo, ref_cost, [residual()], [Fraction(0)])
    phi = Fraction(0)
    for ev in run.details["events"]:
        if ev.delta == 0:
            continue
        witness = any(x.get(u) == 1 and credit.get(u, 0) < w[page_at[u]] for u in ev.credits) or \
            any(y.get(u, 0) > cap.get(u, 0) for u in ev.caps)
        if not witness:
            raise InvariantViolation(f"raise at request {ev.t} has no witness in the reference")
        before = residual()
        for u in ev.caps:
            cap[u] = cap.get(u, 0) + ev.delta
        for u in ev.credits:
            credit[u] = credit.get(u, 0) + ev.delta
        after = residual()
        if after < 0 or before - after < ev.delta:
            raise InvariantViolation(f"residual fell by {before - after} during a raise of {ev.delta}")
        growth = ev.delta * (len(ev.caps) + len(ev.credits))
        if growth > 2 * k * ev.delta:
            raise InvariantViolation("potential grew faster than 2k")
        phi += growth
        audit.residual.append(after)
        audit.phi.append(phi)
    return audit
