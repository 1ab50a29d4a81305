"""Soft heap with corruption reporting.

Binary-tree variant: every node owns an item list and a "current key"
(``ckey``) borrowed from one of its items. Refilling a node whose list is
already non-empty raises the node's ckey, which corrupts exactly one item,
the previous ckey owner. That makes the set of newly corrupted items cheap
to report, which is all heap selection needs.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .order import ComparisonCounter


class SoftHeapError(Exception):
    pass


class EmptyHeapError(SoftHeapError, IndexError):
    pass


class _Node:
    __slots__ = ("ckey", "owner_alive", "items", "rank", "left", "right")

    def __init__(self, rank, item=None):
        self.rank = rank
        self.ckey = item
        # False once the ckey owner has been extracted from a root
        self.owner_alive = item is not None
        self.items = [] if item is None else [item]
        self.left = None
        self.right = None

    def is_leaf(self):
        return self.left is None and self.right is None


def _identity(x):
    return x


class SoftHeap:
    """Priority queue allowing at most ``epsilon * inserted_total`` corrupted items.

    ``key`` maps a stored item to the :class:`~lazydict.order.Entry` it is
    ordered by; by default items are entries themselves. ``less`` overrides
    the entry order (it must count through ``counter`` itself).

    ``insert`` returns the items it corrupted (usually none). ``extract_min``
    returns ``(item, newly_corrupted)`` and sets :attr:`extracted_corrupted`
    to tell whether the returned item itself was corrupted.
    """

    def __init__(self, epsilon=Fraction(1, 6), counter=None, key=_identity,
                 less=None):
        epsilon = Fraction(epsilon).limit_denominator(10**6)
        if not 0 < epsilon <= Fraction(1, 2):
            raise ValueError(f"epsilon must lie in (0, 1/2], got {epsilon}")
        self.epsilon = epsilon
        self.counter = counter if counter is not None else ComparisonCounter()
        self._key = key
        self._entry_less = less if less is not None else self.counter.less
        # nodes above this rank double-fill; ceil(log2(3/eps))
        self._threshold = math.ceil(math.log2(3 / epsilon))
        self._roots = []  # increasing rank
        self._suffix_min = []  # min-ckey root among roots[i:]
        self._corrupted = set()
        self._newly = []
        self.inserted_total = 0
        self.size = 0
        self.extracted_corrupted = False

    def __len__(self):
        return self.size

    @property
    def corrupted_count(self):
        return len(self._corrupted)

    def _less(self, a, b):
        return self._entry_less(self._key(a), self._key(b))

    def _fill(self, x):
        if x.left is None or (
            x.right is not None and self._less(x.right.ckey, x.left.ckey)
        ):
            x.left, x.right = x.right, x.left
        child = x.left
        if x.items:
            if x.owner_alive:
                old = x.ckey
                self._corrupted.add(id(old))
                self._newly.append(old)
            x.items.extend(child.items)
        else:
            x.items = child.items
        x.ckey = child.ckey
        x.owner_alive = child.owner_alive
        child.items = []
        if child.is_leaf():
            x.left = None
        else:
            self._defill(child)

    def _defill(self, x):
        self._fill(x)
        if x.rank > self._threshold and x.rank & 1 and not x.is_leaf():
            self._fill(x)

    def _link(self, x, y):
        z = _Node(x.rank + 1)
        z.left = x
        z.right = y
        self._defill(z)
        return z

    def _update_suffix(self, upto):
        roots = self._roots
        sm = self._suffix_min
        last = len(roots) - 1
        for i in range(min(upto, last), -1, -1):
            x = roots[i]
            if i == last:
                sm[i] = x
            else:
                best = sm[i + 1]
                sm[i] = best if self._less(best.ckey, x.ckey) else x

    def insert(self, item):
        self._newly = []
        node = _Node(0, item)
        roots = self._roots
        while roots and roots[0].rank == node.rank:
            node = self._link(roots.pop(0), node)
            self._suffix_min.pop(0)
        roots.insert(0, node)
        self._suffix_min.insert(0, node)
        self._update_suffix(0)
        self.inserted_total += 1
        self.size += 1
        return self._newly

    def find_min(self):
        if not self.size:
            raise EmptyHeapError("find_min on empty soft heap")
        return self._suffix_min[0].items[-1]

    def extract_min(self):
        if not self.size:
            raise EmptyHeapError("extract_min on empty soft heap")
        self._newly = []
        x = self._suffix_min[0]
        idx = self._roots.index(x)
        item = x.items.pop()
        if item is x.ckey:
            x.owner_alive = False
        key = id(item)
        self.extracted_corrupted = key in self._corrupted
        self._corrupted.discard(key)
        self.size -= 1
        if not x.items:
            if x.is_leaf():
                del self._roots[idx]
                del self._suffix_min[idx]
                idx -= 1
            else:
                self._defill(x)
        if idx >= 0:
            self._update_suffix(idx)
        return item, self._newly

    def audit(self):
        """Walk every node and return ``(corrupted, violations)``.

        Corruption is recomputed from scratch (item is not its node's ckey
        owner) without touching the comparison counter.
        """
        violations = []
        corrupted = 0
        items_seen = 0
        sk = lambda it: self._key(it).sort_key()
        stack = list(self._roots)
        while stack:
            x = stack.pop()
            for it in x.items:
                items_seen += 1
                if it is not x.ckey:
                    corrupted += 1
                    if id(it) not in self._corrupted:
                        violations.append(f"untracked corruption {it!r}")
                if sk(it) > sk(x.ckey):
                    violations.append(f"soft key below true key for {it!r}")
            for c in (x.left, x.right):
                if c is not None:
                    if sk(c.ckey) < sk(x.ckey):
                        violations.append("heap order broken on soft keys")
                    if not c.items:
                        violations.append("empty non-root node")
                    stack.append(c)
        if items_seen != self.size:
            violations.append(f"size {self.size} but {items_seen} items stored")
        if corrupted != len(self._corrupted):
            violations.append(
                f"tracked {len(self._corrupted)} corrupted, found {corrupted}"
            )
        if corrupted > self.epsilon * self.inserted_total:
            violations.append(
                f"{corrupted} corrupted > eps * {self.inserted_total}"
            )
        return corrupted, violations


def sh_make(epsilon=Fraction(1, 6), counter=None, key=_identity):
    return SoftHeap(epsilon, counter=counter, key=key)
