"""Balanced two-page configurations and request sequences that pin them down.

A balanced configuration puts page ``P0`` on a half ``S0`` of the slots and
``P1`` on the other half; it is identified here by the mask of ``S0``.
"""

from __future__ import annotations

from itertools import combinations, product

from ..core import Request, RequestSequence, SlotSetFamily, full_mask, satisfies, slot_mask
from ..errors import ParameterError
from .lemma2 import P0, P1

FORCING_VERIFY_CAP = 10


def balanced_masks(k: int) -> list[int]:
    if k < 2 or k % 2:
        raise ParameterError("balanced configurations need an even k >= 2")
    return [slot_mask(c) for c in combinations(range(1, k + 1), k // 2)]


def balanced_config(k: int, s0: int) -> tuple:
    return tuple(P0 if (s0 >> j) & 1 else P1 for j in range(k))


def hamming(k: int, a: int, b: int) -> int:
    """Slots whose content differs between the balanced configurations ``a`` and ``b``."""
    return bin((a ^ b) & full_mask(k)).count("1")


def greedy_code(k: int, min_distance: int = 3) -> list[int]:
    """Balanced configurations, scanned in order, kept when far from all kept so far."""
    code: list[int] = []
    for m in balanced_masks(k):
        if all(hamming(k, m, c) >= min_distance for c in code):
            code.append(m)
    return code


def forcing_sequence(k: int, code: list[int]) -> RequestSequence:
    """Every half-size request that all members of ``code`` satisfy."""
    full = full_mask(k)
    halves = balanced_masks(k)
    code = list(dict.fromkeys(code))
    if any(m not in set(halves) for m in code):
        raise ParameterError("every configuration must be balanced")
    for a, b in combinations(code, 2):
        if hamming(k, a, b) < 3:
            raise ParameterError("configurations must be at distance at least 3")
    zeros = set(code)
    ones = {full ^ m for m in code}
    reqs = [Request(P0, S) for S in halves if S not in ones]
    reqs += [Request(P1, S) for S in halves if S not in zeros]
    return RequestSequence(k, SlotSetFamily.uniform(k, k // 2), tuple(reqs))


def zero_cost_satisfiers(seq: RequestSequence, cap: int = FORCING_VERIFY_CAP) -> set[tuple]:
    """All configurations over {P0, P1, empty} that serve every request of ``seq``."""
    if seq.k > cap:
        raise ParameterError(f"exhaustive check limited to k <= {cap}")
    return {c for c in product((P0, P1, None), repeat=seq.k)
            if all(satisfies(c, r) for r in seq.requests)}


def is_forcing(seq: RequestSequence, code: list[int]) -> bool:
    return zero_cost_satisfiers(seq) == {balanced_config(seq.k, m) for m in code}
