"""Exact offline optimum by dynamic programming over cache configurations.

At time t a slot may only hold a page whose requests straddle t (first
request <= t <= last request) or nothing.  Loading a page earlier than its
first request or keeping it after its last one never helps, so the
restriction is exact.  The per-step transition is separable over slots,
which lets the min-plus update run one axis at a time on a numpy array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional, Union

import numpy as np

from ..core import PageSetSequence, RequestSequence, full_mask, slots_of
from ..errors import BudgetExceeded, CapExceeded

INF = np.int64(1) << 60


@dataclass(frozen=True)
class OracleCaps:
    k: int = 4
    pages: int = 8
    T: int = 30
    states: int = 5_000_000


@dataclass
class OptResult:
    cost: Any
    schedule: list = field(default_factory=list)
    explored_states: int = 0


def _constraints(seq) -> tuple[int, list[tuple[int, frozenset]]]:
    if isinstance(seq, PageSetSequence):
        full = full_mask(seq.k)
        return seq.k, [(full, frozenset(r)) for r in seq.requests]
    return seq.k, [(r.slots, frozenset([r.page])) for r in seq.requests]


def _scaled_weights(pages, weights: Optional[Mapping]) -> tuple[dict, int]:
    if weights is None:
        return {p: 1 for p in pages}, 1
    ws = {p: Fraction(weights[p]) for p in pages}
    scale = 1
    for w in ws.values():
        scale = math.lcm(scale, w.denominator)
    return {p: int(w * scale) for p, w in ws.items()}, scale


def opt_bruteforce(seq: Union[RequestSequence, PageSetSequence], weights: Optional[Mapping] = None,
                   caps: OracleCaps = OracleCaps(), need_schedule: bool = True) -> OptResult:
    """Minimum retrieval cost (weighted when ``weights`` is given) and an optimal schedule."""
    k, cons = _constraints(seq)
    T = len(cons)
    if T == 0:
        return OptResult(Fraction(0) if weights is not None else 0, [], 0)
    first: dict = {}
    last: dict = {}
    for t, (_, pset) in enumerate(cons):
        for p in sorted(pset, key=repr):
            first.setdefault(p, t)
            last[p] = t
    pages = sorted(first, key=lambda p: (first[p], repr(p)))
    if k > caps.k:
        raise CapExceeded(f"oracle limited to k <= {caps.k}")
    if len(pages) > caps.pages:
        raise CapExceeded(f"oracle limited to {caps.pages} distinct pages")
    if T > caps.T:
        raise CapExceeded(f"oracle limited to T <= {caps.T}")
    w, scale = _scaled_weights(pages, weights)

    domains: list[list] = []
    for t in range(T):
        domains.append([None] + [p for p in pages if first[p] <= t <= last[p]])
    explored = 0
    layers: list[np.ndarray] = []
    g = np.zeros((1,) * k, dtype=np.int64)
    prev_domain: list = [None]
    for t in range(T):
        dom = domains[t]
        n = len(dom)
        if n ** k > caps.states:
            raise BudgetExceeded(f"{n ** k} states at step {t + 1} exceed the budget {caps.states}")
        explored += n ** k
        g = _project(g, prev_domain, dom, k)
        wvec = np.array([0] + [w[p] for p in dom[1:]], dtype=np.int64)
        for axis in range(k):
            shape = [1] * k
            shape[axis] = n
            best = g.min(axis=axis, keepdims=True)
            g = np.minimum(g, best + wvec.reshape(shape))
        mask, pset = cons[t]
        ok = np.zeros((n,) * k, dtype=bool)
        hit = np.array([p is not None and p in pset for p in dom])
        for s in slots_of(mask):
            if s > k:
                continue
            shape = [1] * k
            shape[s - 1] = n
            ok = ok | hit.reshape(shape)
        g = np.where(ok, g, INF)
        if need_schedule:
            layers.append(g)
        prev_domain = dom
    best = int(g.min())
    if best >= INF:
        raise BudgetExceeded("no feasible configuration; the instance is unsatisfiable")
    cost = Fraction(best, scale) if weights is not None else best
    schedule: list = []
    if need_schedule:
        schedule = _backtrack(layers, domains, w, k)
    return OptResult(cost, schedule, explored)


def _project(g: np.ndarray, old: list, new: list, k: int) -> np.ndarray:
    """Re-index ``g`` from domain ``old`` to ``new`` on every axis."""
    pos = {p: i for i, p in enumerate(old)}
    dead = [i for i, p in enumerate(old) if i > 0 and p not in set(new)]
    for axis in range(k):
        none_part = g.take([0] + dead, axis=axis).min(axis=axis, keepdims=True)
        parts = [none_part]
        for p in new[1:]:
            if p in pos:
                parts.append(g.take([pos[p]], axis=axis))
            else:
                shape = list(g.shape)
                shape[axis] = 1
                parts.append(np.full(shape, INF, dtype=np.int64))
        g = np.concatenate(parts, axis=axis)
    return g


def _backtrack(layers: list[np.ndarray], domains: list[list], w: dict, k: int) -> list[tuple]:
    T = len(layers)
    idx = np.unravel_index(int(np.argmin(layers[-1])), layers[-1].shape)
    configs = [tuple(domains[-1][i] for i in idx)]
    for t in range(T - 1, 0, -1):
        cur = configs[-1]
        dom = domains[t - 1]
        n = len(dom)
        total = layers[t - 1].copy()
        for axis, p in enumerate(cur):
            if p is None:
                continue
            vec = np.array([0 if q == p else w[p] for q in dom], dtype=np.int64)
            shape = [1] * k
            shape[axis] = n
            total = total + vec.reshape(shape)
        idx = np.unravel_index(int(np.argmin(total)), total.shape)
        configs.append(tuple(dom[i] for i in idx))
    configs.reverse()
    return configs


def opt_cost(seq, weights=None, caps: OracleCaps = OracleCaps()):
    return opt_bruteforce(seq, weights, caps, need_schedule=False).cost
