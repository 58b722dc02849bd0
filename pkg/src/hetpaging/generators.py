"""Seeded random instances and fixed benchmark instances."""

from __future__ import annotations

import random
from fractions import Fraction

from .core import PageSetSequence, Request, RequestSequence, SlotSetFamily, WeightMap, full_mask
from .errors import ParameterError

FAMILY_KINDS = ("laminar", "aoo", "standard", "power", "uniform", "random")
WEIGHT_CHOICES = tuple(Fraction(n, 2) for n in range(0, 7))


def _partition(rng: random.Random, items: list) -> list[list]:
    """Split ``items`` into 2 or 3 non-empty random blocks."""
    items = items[:]
    rng.shuffle(items)
    parts = min(len(items), rng.choice((2, 2, 3)))
    cuts = sorted(rng.sample(range(1, len(items)), parts - 1))
    return [items[a:b] for a, b in zip([0] + cuts, cuts + [len(items)])]


def random_laminar_sets(rng: random.Random, ground: list, keep_root: float = 0.7) -> list[list]:
    """A random laminar family over ``ground`` whose union is all of ``ground``.

    A dropped set is always split further, so every element stays covered.
    """
    out: list[list] = []

    def grow(block: list, keep: bool) -> None:
        if keep or len(block) == 1:
            out.append(sorted(block))
        if len(block) > 1 and (not keep or rng.random() < 0.6):
            for part in _partition(rng, block):
                grow(part, rng.random() < keep_root)

    grow(list(ground), rng.random() < keep_root)
    return out


def random_family(rng: random.Random, kind: str, k: int) -> SlotSetFamily:
    if kind == "laminar":
        return SlotSetFamily.from_sets(k, random_laminar_sets(rng, list(range(1, k + 1))))
    if kind == "aoo":
        return SlotSetFamily.all_or_one(k)
    if kind == "standard":
        return SlotSetFamily.standard(k)
    if kind == "power":
        return SlotSetFamily.power_set(k)
    if kind == "uniform":
        return SlotSetFamily.uniform(k, rng.randint(1, k))
    if kind == "random":
        pool = list(range(1, full_mask(k) + 1))
        members = rng.sample(pool, rng.randint(1, min(len(pool), 5)))
        return SlotSetFamily(k, tuple(members))
    raise ParameterError(f"unknown family kind {kind!r}; choose from {', '.join(FAMILY_KINDS)}")


def random_instance(k: int, kind: str, pages: int, length: int, seed: int) -> RequestSequence:
    """Requests drawn uniformly from family members times pages ``1..pages``."""
    if k < 1 or pages < 1 or length < 0:
        raise ParameterError("need k >= 1, pages >= 1 and length >= 0")
    rng = random.Random(seed)
    family = random_family(rng, kind, k)
    members = list(family.members)
    reqs = tuple(Request(rng.randint(1, pages), rng.choice(members)) for _ in range(length))
    return RequestSequence(k, family, reqs)


def random_page_laminar(k: int, pages: int, length: int, seed: int) -> PageSetSequence:
    if k < 1 or pages < 1 or length < 0:
        raise ParameterError("need k >= 1, pages >= 1 and length >= 0")
    rng = random.Random(seed)
    fam = [frozenset(s) for s in random_laminar_sets(rng, list(range(1, pages + 1)))]
    reqs = tuple(rng.choice(fam) for _ in range(length))
    return PageSetSequence(k, tuple(fam), reqs)


def random_weights(pages, seed: int, choices=WEIGHT_CHOICES) -> WeightMap:
    rng = random.Random(seed)
    return WeightMap({p: rng.choice(choices) for p in sorted(set(pages))})


def motivating_instance(rounds: int) -> tuple[RequestSequence, WeightMap]:
    """k=2 rounds of a weight-1 general request, then weight-0 pages pinned to each slot."""
    if rounds < 0:
        raise ParameterError("rounds must be non-negative")
    reqs = []
    for _ in range(rounds):
        reqs += [Request.general(1, 2), Request.specific(2, 1), Request.specific(3, 2)]
    weights = WeightMap({1: Fraction(1), 2: Fraction(0), 3: Fraction(0)})
    return RequestSequence(2, SlotSetFamily.all_or_one(2), tuple(reqs)), weights


def standard_instance(k: int, pages: int, length: int, seed: int) -> RequestSequence:
    rng = random.Random(seed)
    full = full_mask(k)
    reqs = tuple(Request(rng.randint(1, pages), full) for _ in range(length))
    return RequestSequence(k, SlotSetFamily.standard(k), reqs)

