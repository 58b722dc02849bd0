"""Tree view of laminar set families, representative requests and preferred pages.

The same machinery serves slot families (sets of slot indices) and page
families (sets of page ids).  Nodes are ``frozenset`` objects; requests are
anything with ``page`` and ``slots`` attributes where ``slots`` is a bitmask.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import NotLaminarError


def _is_proper_submask(a: int, b: int) -> bool:
    return a != b and a & b == a


class LaminarForest:
    """Parent/child structure of a laminar family.

    Children of a node are ordered by their smallest element, which fixes
    what "leftmost" means for default pages.
    """

    def __init__(self, sets: Iterable[Iterable[Hashable]]):
        nodes = []
        seen = set()
        for s in sets:
            fs = frozenset(s)
            if not fs:
                raise NotLaminarError("empty set in family")
            if fs not in seen:
                seen.add(fs)
                nodes.append(fs)
        by_size = sorted(nodes, key=len)
        for i, a in enumerate(by_size):
            for b in by_size[i + 1:]:
                if a & b and not a <= b:
                    raise NotLaminarError(f"sets {sorted(a)} and {sorted(b)} overlap without nesting")
        parent: dict[frozenset, frozenset | None] = {}
        for i, a in enumerate(by_size):
            parent[a] = None
            for b in by_size[i + 1:]:
                if len(b) > len(a) and a < b:
                    parent[a] = b
                    break
        children: dict[frozenset, list[frozenset]] = {n: [] for n in nodes}
        for n, p in parent.items():
            if p is not None:
                children[p].append(n)
        self.nodes: tuple[frozenset, ...] = tuple(nodes)
        self.parent = parent
        self.children = {n: tuple(sorted(c, key=min)) for n, c in children.items()}
        self.roots = tuple(sorted((n for n in nodes if parent[n] is None), key=min))
        self._depth: dict[frozenset, int] = {}
        for n in self.nodes:
            d, a = 1, parent[n]
            while a is not None:
                d, a = d + 1, parent[a]
            self._depth[n] = d
        self._subtree_height: dict[frozenset, int] = {}
        for n in sorted(self.nodes, key=len):
            kids = self.children[n]
            self._subtree_height[n] = 1 + max((self._subtree_height[c] for c in kids), default=0)
        self._default: dict[frozenset, Hashable] = {}

    def __contains__(self, node) -> bool:
        return node in self.parent

    def __iter__(self) -> Iterator[frozenset]:
        return iter(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def height(self) -> int:
        """Length of the longest strictly nested chain (0 for an empty family)."""
        return max(self._depth.values(), default=0)

    def depth(self, node: frozenset) -> int:
        """Number of members containing ``node``, itself included."""
        return self._depth[node]

    def subtree_height(self, node: frozenset) -> int:
        return self._subtree_height[node]

    def is_leaf(self, node: frozenset) -> bool:
        return not self.children[node]

    def ancestors(self, node: frozenset) -> list[frozenset]:
        """Proper ancestors, nearest first."""
        out = []
        a = self.parent[node]
        while a is not None:
            out.append(a)
            a = self.parent[a]
        return out

    def root_of(self, node: frozenset) -> frozenset:
        while self.parent[node] is not None:
            node = self.parent[node]
        return node

    def subtree(self, node: frozenset) -> list[frozenset]:
        """Members contained in ``node`` (including it), parents before children."""
        out, stack = [], [node]
        while stack:
            n = stack.pop()
            out.append(n)
            stack.extend(reversed(self.children[n]))
        return out

    def child_containing(self, node: frozenset, element) -> frozenset | None:
        for c in self.children[node]:
            if element in c:
                return c
        return None

    def bottom_up(self) -> list[frozenset]:
        """All members ordered so that every child precedes its parent."""
        return sorted(self.nodes, key=lambda n: (self._subtree_height[n], min(n)))

    def default_page(self, node: frozenset):
        """Smallest element of the leftmost leaf below ``node``."""
        if node not in self._default:
            n = node
            while self.children[n]:
                n = self.children[n][0]
            self._default[node] = min(n)
        return self._default[node]


def is_laminar_masks(masks: Iterable[int]) -> bool:
    ms = list(set(masks))
    for i, a in enumerate(ms):
        for b in ms[i + 1:]:
            inter = a & b
            if inter and inter != a and inter != b:
                return False
    return True


def rep(requests: Iterable) -> set:
    """Requests with no proper descendant to the same page."""
    by_page: dict = defaultdict(list)
    for r in set(requests):
        by_page[r.page].append(r)
    out = set()
    for group in by_page.values():
        for r in group:
            if not any(_is_proper_submask(o.slots, r.slots) for o in group):
                out.add(r)
    return out


def anc(r, requests: Iterable) -> set:
    """Requests to ``r.page`` whose slot set contains ``r.slots``."""
    return {o for o in requests if o.page == r.page and o.slots & r.slots == r.slots}


class RepSet:
    """Accumulates a phase's requests and keeps ``rep`` up to date incrementally.

    ``assignment`` maps a slot index to the representative request it serves;
    it is maintained by the caller (RefSearch), this class only drops entries
    for requests that leave ``rep``.
    """

    def __init__(self):
        self.requests: set = set()
        self.rep: set = set()
        self.assignment: dict[int, object] = {}

    def clear(self) -> None:
        self.requests.clear()
        self.rep.clear()
        self.assignment.clear()

    def preview(self, r) -> tuple[set, bool]:
        """What ``add(r)`` would remove from rep, and whether r would join it."""
        if r in self.requests:
            return set(), False
        has_desc = any(o.page == r.page and _is_proper_submask(o.slots, r.slots) for o in self.requests)
        if has_desc:
            return set(), False
        removed = {o for o in self.rep if o.page == r.page and _is_proper_submask(r.slots, o.slots)}
        return removed, True

    def add(self, r) -> tuple[set, bool]:
        removed, joins = self.preview(r)
        self.requests.add(r)
        if joins:
            self.rep -= removed
            self.rep.add(r)
            for s in [s for s, q in self.assignment.items() if q in removed]:
                del self.assignment[s]
        return removed, joins


class PreferredPages:
    """Online tracker of preferred children and pages in a page-laminar forest."""

    def __init__(self, forest: LaminarForest):
        self.forest = forest
        self._last_child: dict[frozenset, frozenset] = {}

    def observe(self, requested: frozenset) -> None:
        """Record a request to ``requested`` (must be a member of the forest)."""
        child = requested
        for a in self.forest.ancestors(requested):
            self._last_child[a] = child
            child = a

    def preferred_child(self, node: frozenset) -> frozenset | None:
        return self._last_child.get(node)

    def preferred(self, node: frozenset):
        n = node
        while n in self._last_child:
            n = self._last_child[n]
        return self.forest.default_page(n)


def preferred_page(forest: LaminarForest, node: frozenset, t: int, history: Sequence[frozenset]):
    """Preferred page of ``node`` just after the first ``t`` requests of ``history``."""
    tracker = PreferredPages(forest)
    for req in history[:t]:
        tracker.observe(frozenset(req))
    return tracker.preferred(frozenset(node))
