"""Slot-set families that drive the two-page deterministic lower bound.

``G`` lists the sets the adversary may request; ``Z`` lists the reference
configurations (slots holding page 0).  :func:`check_gz` verifies the three
properties the bound needs:

* gz0: for every X, some S in G fits inside X or inside its complement;
* gz1: no member of Z has its complement in Z;
* gz2: every S in G fits inside Z or its complement for at most one Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from ..core import SlotSetFamily, full_mask, slot_mask, slots_of
from ..errors import CapExceeded, ParameterError

GZ0_CAP = 16


@dataclass(frozen=True)
class GZFamilies:
    k: int
    G: tuple[int, ...]
    Z: tuple[int, ...]

    def family(self) -> SlotSetFamily:
        return SlotSetFamily(self.k, tuple(self.G))


@dataclass(frozen=True)
class GZCheck:
    ok: bool
    violated: Optional[str] = None
    witness: Optional[tuple[int, ...]] = None
    gz0_checked: bool = True

    def __bool__(self) -> bool:
        return self.ok


def _as_array(masks) -> np.ndarray:
    # object dtype keeps exact bit operations for k beyond 63
    if masks and max(masks).bit_length() > 62:
        return np.array(masks, dtype=object)
    return np.array(masks, dtype=np.int64)


def check_gz(fams: GZFamilies, cap: int = GZ0_CAP, skip_gz0: bool = False) -> GZCheck:
    """Check gz0..gz2; the first failure is reported with a witness."""
    k = fams.k
    full = full_mask(k)
    G, Z = list(fams.G), list(fams.Z)
    gz0_checked = not skip_gz0
    if gz0_checked:
        if k > cap:
            raise CapExceeded(f"exhaustive gz0 check limited to k <= {cap}")
        X = np.arange(1 << k, dtype=np.int64)
        covered = np.zeros(1 << k, dtype=bool)
        for S in G:
            covered |= ((X & S) == S) | (((full ^ X) & S) == S)
        if not covered.all():
            x = int(np.flatnonzero(~covered)[0])
            return GZCheck(False, "gz0", slots_of(x))
    zset = set(Z)
    for z in Z:
        if full ^ z in zset:
            return GZCheck(False, "gz1", slots_of(z), gz0_checked)
    if G and not Z:
        return GZCheck(False, "gz2", slots_of(G[0]), gz0_checked)
    if G:
        Za = _as_array(Z)
        Zc = _as_array([full ^ z for z in Z])
        for S in G:
            hits = ((Za & S) == S) | ((Zc & S) == S)
            if int(np.count_nonzero(hits)) > 1:
                return GZCheck(False, "gz2", slots_of(S), gz0_checked)
    return GZCheck(True, None, None, gz0_checked)


def family_theorem1i(k: int) -> GZFamilies:
    """G = Z = all subsets of size (k+1)/2, for odd k."""
    if k < 1 or k % 2 == 0:
        raise ParameterError("this construction needs an odd k")
    sets = tuple(slot_mask(c) for c in combinations(range(1, k + 1), (k + 1) // 2))
    return GZFamilies(k, sets, sets)


def _cycle_slot(e: int, c: int, ell: int) -> int:
    return e * ell + c


def _step(c: int, i: int, ell: int) -> int:
    return (c + i - 1) % ell + 1


def family_theorem1ii(k: int, m: int) -> GZFamilies:
    """Odd cycles of length k/(m-1); G picks m/2 edges from distinct cycles.

    For each S' in G, Z holds one set that contains exactly the m/2 edges of
    S' while its complement contains one edge from each remaining cycle.
    """
    if m < 2 or m % 2:
        raise ParameterError("m must be an even number >= 2")
    if k <= m or k % (m - 1) or (k // (m - 1)) % 2 == 0:
        raise ParameterError("k must exceed m and be an odd multiple of m-1")
    ell = k // (m - 1)
    cycles = m - 1
    G: list[int] = []
    Z: list[int] = []
    for chosen in combinations(range(cycles), m // 2):
        for starts in np.ndindex(*([ell] * (m // 2))):
            edge_at = {e: c + 1 for e, c in zip(chosen, starts)}
            S = 0
            Zm = 0
            for e in range(cycles):
                if e in edge_at:
                    c = edge_at[e]
                    for slot in (c, _step(c, 1, ell)):
                        S |= 1 << (_cycle_slot(e, slot, ell) - 1)
                    picks = [c, _step(c, 1, ell)] + [_step(c, i, ell) for i in range(3, ell - 1, 2)]
                else:
                    picks = list(range(1, ell - 1, 2))
                for slot in picks:
                    Zm |= 1 << (_cycle_slot(e, slot, ell) - 1)
            G.append(S)
            Z.append(Zm)
    return GZFamilies(k, tuple(G), tuple(Z))


def theorem1ii_size(k: int, m: int) -> int:
    return comb(m - 1, m // 2) * (k // (m - 1)) ** (m // 2)
