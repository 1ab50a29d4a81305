"""k-smallest selection on heap-ordered trees of arbitrary degree.

The tree is read through a small view protocol (``root``, ``children``,
``entry``). Children of a node are heapified into an implicit binary heap
the first time the node is expanded, so the soft heap only ever sees a tree
of out-degree at most three: two heap siblings plus the first child-heap of
the node itself. The corruption budget then stays proportional to the
number of extractions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Protocol, Sequence

from .order import ComparisonCounter, Entry
from .softheap import SoftHeap

SELECT_EPSILON = Fraction(1, 6)


class TreeView(Protocol):
    root: Any

    def children(self, node) -> Sequence[Any]: ...

    def entry(self, node) -> Entry: ...


@dataclass
class SelectionStats:
    expanded_nodes: int = 0
    degree_sum: int = 0
    corruption_events: int = 0


class ExplicitTree:
    """Tree view over :class:`ExplicitTree.Node` objects."""

    class Node:
        __slots__ = ("entry", "kids")

        def __init__(self, entry, kids=None):
            self.entry = entry
            self.kids = kids if kids is not None else []

        def __repr__(self):
            return f"Node({self.entry.key!r})"

    def __init__(self, root):
        self.root = root

    def children(self, node):
        return node.kids

    def entry(self, node):
        return node.entry

    def nodes(self):
        out = []
        stack = [self.root]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(x.kids)
        return out

    def structure_hash(self):
        def walk(x):
            return (x.entry.key, x.entry.seq, tuple(walk(c) for c in x.kids))

        return hash(walk(self.root))


def degree_sum(view: TreeView, nodes: Iterable) -> int:
    """Sum of tree degrees of ``nodes``."""
    return sum(len(view.children(x)) for x in nodes)


# -- linear-time selection over a flat sequence --------------------------------

def _small_sort(items, less):
    a = list(items)
    for i in range(1, len(a)):
        x = a[i]
        j = i - 1
        while j >= 0 and less(x, a[j]):
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = x
    return a


def _pivot(items, less):
    if len(items) <= 5:
        return _small_sort(items, less)[(len(items) - 1) // 2]
    medians = []
    for i in range(0, len(items), 5):
        group = _small_sort(items[i : i + 5], less)
        medians.append(group[(len(group) - 1) // 2])
    return nth_smallest(medians, (len(medians) - 1) // 2, less)


class _Pivots:
    """Introselect pivot policy.

    Median of three sampled items while rounds shrink the range by at least
    an eighth; after a round that does not, one median-of-medians round. That
    keeps the worst case linear and the typical cost near 3n comparisons.
    Sampling is seeded from the input size so runs are reproducible.
    """

    __slots__ = ("rng", "careful")

    def __init__(self, n, k):
        self.rng = random.Random(n * 1_000_003 + k)
        self.careful = False

    def pick(self, items, less):
        if self.careful:
            self.careful = False
            return _pivot(items, less)
        r = self.rng.randrange
        n = len(items)
        a, b, c = items[r(n)], items[r(n)], items[r(n)]
        if less(a, b):
            if less(b, c):
                return b
            return c if less(a, c) else a
        if less(a, c):
            return a
        return c if less(b, c) else b

    def judge(self, before, after):
        if 8 * after > 7 * before:
            self.careful = True


def _split(items, p, less):
    lo = []
    hi = []
    for x in items:
        if x is not p:
            (lo if less(x, p) else hi).append(x)
    return lo, hi


def nth_smallest(items, i, less):
    """Item of 0-based rank ``i`` under the strict order ``less``."""
    items = list(items)
    piv = _Pivots(len(items), i)
    while True:
        if len(items) <= 10:
            return _small_sort(items, less)[i]
        p = piv.pick(items, less)
        lo, hi = _split(items, p, less)
        before = len(items)
        if i < len(lo):
            items = lo
        elif i == len(lo):
            return p
        else:
            i -= len(lo) + 1
            items = hi
        piv.judge(before, len(items))


def partition_k(items, k, less):
    """Split ``items`` into the ``k`` smallest and the rest.

    Returns ``(low, high, low_max, high_min)``; the last two are the extreme
    entries next to the cut when they fall out of the selection for free,
    else ``None``. At least one is known whenever both sides are non-empty.
    """
    items = list(items)
    low = []
    high = []
    if k <= 0:
        return low, items, None, None
    if k >= len(items):
        return items, high, None, None
    piv = _Pivots(len(items), k)
    low_max = high_min = None
    while True:
        if len(items) <= 10:
            s = _small_sort(items, less)
            low.extend(s[:k])
            high.extend(s[k:])
            if k:
                low_max = s[k - 1]
            if k < len(s):
                high_min = s[k]
            return low, high, low_max, high_min
        p = piv.pick(items, less)
        lo, hi = _split(items, p, less)
        before = len(items)
        if k <= len(lo):
            high.append(p)
            high.extend(hi)
            high_min = p
            items = lo
            if k == len(lo):
                low.extend(lo)
                return low, high, None, high_min
        else:
            low.extend(lo)
            low.append(p)
            low_max = p
            k -= len(lo) + 1
            items = hi
            if k == 0:
                high.extend(hi)
                return low, high, low_max, None
        piv.judge(before, len(items))


def k_smallest(items, k, less):
    """The ``k`` smallest items in no particular order."""
    return partition_k(items, k, less)[0]


def select_k_of_sequence(seq: Sequence[Entry], k: int, counter=None) -> list:
    counter = counter if counter is not None else ComparisonCounter()
    return k_smallest(seq, k, counter.less)


# -- heap-ordered tree selection ------------------------------------------------

def _heapify(nodes, less, entry):
    a = list(nodes)
    n = len(a)
    for start in range(n // 2 - 1, -1, -1):
        i = start
        x = a[i]
        ex = entry(x)
        while True:
            c = 2 * i + 1
            if c >= n:
                break
            if c + 1 < n and less(entry(a[c + 1]), entry(a[c])):
                c += 1
            if less(entry(a[c]), ex):
                a[i] = a[c]
                i = c
            else:
                break
        a[i] = x
    return a


def soft_select(view: TreeView, k: int, counter: ComparisonCounter | None = None,
                epsilon=SELECT_EPSILON, size: int | None = None, less=None):
    """Return ``(nodes, stats)``: the ``k`` smallest nodes of the tree.

    Nodes are returned (not entries) so callers can act on them; order is
    unspecified. The view is not modified and the root's entry is never
    compared, so a virtual root with no meaningful entry is fine.
    ``size`` is an optional node count enabling the full-traversal shortcut
    when ``k >= size``. ``less`` overrides the entry order.
    """
    counter = counter if counter is not None else ComparisonCounter()
    stats = SelectionStats()
    if k <= 0:
        return [], stats
    root = view.root
    children = view.children
    entry = view.entry
    if size is not None and k >= size:
        out = []
        stack = [root]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(children(x))
        return out, stats
    if k == 1:
        return [root], stats

    less = less if less is not None else counter.less
    seen = {id(root)}
    candidates = [root]

    def expand(node):
        kids = [c for c in children(node) if id(c) not in seen]
        stats.expanded_nodes += 1
        stats.degree_sum += len(kids)
        for c in kids:
            seen.add(id(c))
        candidates.extend(kids)
        return _heapify(kids, less, entry) if kids else None

    top = expand(root)
    if top is None:
        return [root], stats

    slot_entry = lambda s: entry(s[0][s[1]])
    q = SoftHeap(epsilon, counter=counter, key=slot_entry, less=less)
    work = []

    def push(slot):
        corrupted = q.insert(slot)
        stats.corruption_events += len(corrupted)
        work.extend(corrupted)

    push((top, 0))
    # the root is already taken; k-1 more come from the derived tree
    for _ in range(k - 2):
        if not len(q):
            break
        item, corrupted = q.extract_min()
        stats.corruption_events += len(corrupted)
        work.extend(corrupted)
        if not q.extracted_corrupted:
            work.append(item)
        while work:
            arr, i = work.pop()
            for j in (2 * i + 1, 2 * i + 2):
                if j < len(arr):
                    push((arr, j))
            sub = expand(arr[i])
            if sub is not None:
                push((sub, 0))
    if len(candidates) <= k:
        return candidates, stats
    by_entry = {id(entry(x)): x for x in candidates[1:]}
    chosen = k_smallest([entry(x) for x in candidates[1:]], k - 1, less)
    rest = [by_entry[id(e)] for e in chosen]
    rest.append(root)
    return rest, stats
