"""Text formats for request traces and weight files.

A trace starts with ``k <int>``.  An optional ``family`` block lists one slot
set per line (``1,2`` or ``*``); an optional ``pagefamily`` block lists one
page set per line (``3,4,5``).  A block ends at ``end`` or at the first
request line.  Requests are ``<page> *``, ``<page> <slot>``,
``<page> {s1,s2}`` or, for page-set traces, ``{p1,p2}``.  ``#`` starts a
comment.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .core import PageSetSequence, Request, RequestSequence, SlotSetFamily, WeightMap, full_mask, slot_mask, slots_of
from .errors import HetPagingError, TraceParseError

Trace = Union[RequestSequence, PageSetSequence]


def _ints(text: str, lineno: int) -> list[int]:
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    try:
        vals = [int(x) for x in body.split(",") if x.strip()]
    except ValueError:
        raise TraceParseError(f"expected comma-separated integers, got {text!r}", lineno) from None
    if not vals:
        raise TraceParseError("empty set", lineno)
    return vals


def _slot_set(text: str, k: int, lineno: int) -> int:
    if text == "*":
        return full_mask(k)
    vals = _ints(text, lineno)
    if any(v < 1 or v > k for v in vals):
        raise TraceParseError(f"slot outside 1..{k} in {text!r}", lineno)
    return slot_mask(vals)


def _page(text: str, lineno: int) -> int:
    try:
        p = int(text)
    except ValueError:
        raise TraceParseError(f"page id must be an integer, got {text!r}", lineno) from None
    if p < 0:
        raise TraceParseError("page ids are non-negative", lineno)
    return p


def parse_trace(text: str) -> Trace:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise TraceParseError("empty trace")
    lineno, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "k":
        raise TraceParseError("first line must be 'k <int>'", lineno)
    try:
        k = int(parts[1])
    except ValueError:
        raise TraceParseError("cache size must be an integer", lineno) from None
    if k < 1:
        raise TraceParseError("cache size must be at least 1", lineno)

    family: list[int] | None = None
    page_family: list[frozenset] | None = None
    slot_reqs: list[Request] = []
    set_reqs: list[frozenset] = []
    block = None
    for lineno, line in lines[1:]:
        tokens = line.split()
        if line in ("family", "pagefamily"):
            if slot_reqs or set_reqs:
                raise TraceParseError(f"{line} block after requests", lineno)
            if (family if line == "family" else page_family) is not None:
                raise TraceParseError(f"second {line} block", lineno)
            block = line
            if line == "family":
                family = []
            else:
                page_family = []
            continue
        if line == "end":
            if block is None:
                raise TraceParseError("'end' outside a block", lineno)
            block = None
            continue
        if block == "family" and len(tokens) == 1:
            family.append(_slot_set(tokens[0], k, lineno))
            continue
        if block == "pagefamily" and len(tokens) == 1 and not tokens[0].startswith("{"):
            page_family.append(frozenset(_ints(tokens[0], lineno)))
            continue
        block = None
        if len(tokens) == 1 and tokens[0].startswith("{"):
            set_reqs.append(frozenset(_ints(tokens[0], lineno)))
        elif len(tokens) == 2:
            slot_reqs.append(Request(_page(tokens[0], lineno), _slot_set(tokens[1], k, lineno)))
        else:
            raise TraceParseError(f"cannot parse request {line!r}", lineno)
        if slot_reqs and set_reqs:
            raise TraceParseError("a trace mixes slot requests and page-set requests", lineno)

    try:
        if set_reqs or (page_family is not None and not slot_reqs):
            fam = page_family if page_family is not None else list(dict.fromkeys(set_reqs))
            seq = PageSetSequence(k, tuple(fam), tuple(set_reqs))
            seq.forest()
            return seq
        fam_masks = family if family is not None else list(dict.fromkeys(r.slots for r in slot_reqs))
        return RequestSequence(k, SlotSetFamily(k, tuple(fam_masks)), tuple(slot_reqs))
    except TraceParseError:
        raise
    except HetPagingError as e:
        raise TraceParseError(str(e)) from None


def read_trace(path: str) -> Trace:
    with open(path, encoding="utf-8") as fh:
        return parse_trace(fh.read())


def _fmt_slots(mask: int, k: int) -> str:
    if mask == full_mask(k):
        return "*"
    s = slots_of(mask)
    return str(s[0]) if len(s) == 1 else "{" + ",".join(map(str, s)) + "}"


def format_trace(seq: Trace, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"k {seq.k}")
    if isinstance(seq, PageSetSequence):
        out.append("pagefamily")
        out.extend(",".join(map(str, sorted(s))) for s in seq.page_family)
        out.append("end")
        out.extend("{" + ",".join(map(str, sorted(r))) + "}" for r in seq.requests)
    else:
        out.append("family")
        full = full_mask(seq.k)
        out.extend("*" if m == full else ",".join(map(str, slots_of(m))) for m in seq.family.members)
        out.append("end")
        out.extend(f"{r.page} {_fmt_slots(r.slots, seq.k)}" for r in seq.requests)
    return "\n".join(out) + "\n"


def parse_weights(text: str) -> WeightMap:
    weights: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise TraceParseError(f"expected '<page> <weight>', got {raw!r}", lineno)
        page = _page(parts[0], lineno)
        try:
            w = Fraction(parts[1])
        except (ValueError, ZeroDivisionError):
            raise TraceParseError(f"bad weight {parts[1]!r}", lineno) from None
        if page in weights:
            raise TraceParseError(f"page {page} weighted twice", lineno)
        weights[page] = w
    try:
        return WeightMap(weights)
    except HetPagingError as e:
        raise TraceParseError(str(e)) from None


def read_weights(path: str) -> WeightMap:
    with open(path, encoding="utf-8") as fh:
        return parse_weights(fh.read())


def format_weights(weights: WeightMap) -> str:
    return "".join(f"{p} {w}\n" for p, w in sorted(weights.items()))
