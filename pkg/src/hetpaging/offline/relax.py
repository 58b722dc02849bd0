from __future__ import annotations

from ..core import PageSetSequence, RequestSequence, SlotSet, slots_of
from ..errors import NotLaminarError, ParameterError


def virtual_pages(page, mask: SlotSet) -> frozenset:
    """The copies ``(page, s)`` of ``page``, one per slot s of ``mask``."""
    return frozenset((page, s) for s in slots_of(mask))


def relax_to_page_laminar(seq: RequestSequence, S: SlotSet) -> tuple[PageSetSequence, list[int]]:
    """Requests of ``seq`` confined to ``S``, as page-set requests over virtual pages.

    Returns the relaxed instance (cache size ``|S|``) and the 0-based times in
    ``seq`` that its requests came from.
    """
    if S not in seq.family:
        raise ParameterError(f"slot set {slots_of(S)} is not in the family")
    if not seq.family.laminar:
        raise NotLaminarError("relaxation needs a laminar slot family")
    times = [t for t, r in enumerate(seq.requests) if r.slots & S == r.slots]
    inner = [m for m in seq.family.members if m & S == m]
    pages = dict.fromkeys(seq.requests[t].page for t in times)
    family = [virtual_pages(p, m) for p in pages for m in inner]
    requests = [virtual_pages(seq.requests[t].page, seq.requests[t].slots) for t in times]
    return PageSetSequence(bin(S).count("1"), tuple(family), tuple(requests)), times
