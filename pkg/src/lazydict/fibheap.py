"""Fibonacci heap with k-smallest selection, extraction and batch deletion.

Nothing about the classic structure changes: selection runs on a virtual
root whose children are the real roots, so ``select_k`` leaves every node
where it was (apart from consolidating the root list afterwards).
"""

from __future__ import annotations

import math

from .order import ComparisonCounter, Entry
from .select import SelectionStats, soft_select

PHI = (1 + math.sqrt(5)) / 2


class HeapError(Exception):
    pass


class EmptyHeapError(HeapError, IndexError):
    pass


class StaleHandleError(HeapError, KeyError):
    pass


class KeyOrderError(HeapError, ValueError):
    """Raised when a key change moves against the heap's direction."""


class FibNode:
    __slots__ = (
        "entry", "data", "parent", "child", "left", "right",
        "degree", "marked", "alive",
    )

    def __init__(self, entry, data=None):
        self.entry = entry
        self.data = data
        self.parent = None
        self.child = None
        self.left = self
        self.right = self
        self.degree = 0
        self.marked = False
        self.alive = True

    def children(self):
        """Children in the order they were linked."""
        out = []
        c = self.child
        if c is not None:
            x = c
            while True:
                out.append(x)
                x = x.right
                if x is c:
                    break
        return out

    def __repr__(self):
        return f"FibNode({self.entry.key!r}, deg={self.degree})"


def _splice(anchor, node):
    """Insert ``node`` (a lone node) just before ``anchor`` in its ring."""
    node.right = anchor
    node.left = anchor.left
    anchor.left.right = node
    anchor.left = node


def _unlink(node):
    node.left.right = node.right
    node.right.left = node.left
    node.left = node.right = node


def _ring(head):
    out = []
    if head is not None:
        x = head
        while True:
            out.append(x)
            x = x.right
            if x is head:
                break
    return out


def fib(k):
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


class _RootView:
    """Selection view: a virtual root above every real root."""

    __slots__ = ("heap", "root")

    def __init__(self, heap):
        self.heap = heap
        self.root = self

    def children(self, node):
        if node is self:
            return _ring(self.heap._min)
        return node.children()

    def entry(self, node):
        return node.entry


class FibHeap:
    """Fibonacci heap over :class:`Entry` objects.

    With ``reverse=True`` it is a max-heap: "decrease" then means moving an
    entry towards the top, i.e. increasing its key.
    """

    def __init__(self, counter: ComparisonCounter | None = None, reverse=False):
        self.reverse = reverse
        self.set_counter(counter if counter is not None else ComparisonCounter())
        self._min = None
        self.n = 0
        self.root_count = 0
        self.last_select_stats = SelectionStats()

    def __len__(self):
        return self.n

    def __bool__(self):
        return self.n > 0

    def set_counter(self, counter: ComparisonCounter):
        self.counter = counter
        self._less = (lambda a, b: counter.less(b, a)) if self.reverse else counter.less

    # -- basic operations -------------------------------------------------

    def insert(self, entry: Entry, data=None) -> FibNode:
        x = FibNode(entry, data)
        self._add_root(x)
        self.n += 1
        return x

    def _add_root(self, x):
        x.parent = None
        x.marked = False
        m = self._min
        if m is None:
            x.left = x.right = x
            self._min = x
        else:
            _splice(m, x)
            if self._less(x.entry, m.entry):
                self._min = x
        self.root_count += 1

    def merge(self, other: "FibHeap") -> "FibHeap":
        """Meld ``other`` into this heap; ``other`` is left empty."""
        if other is self:
            raise HeapError("cannot merge a heap with itself")
        if other.reverse != self.reverse:
            raise HeapError("cannot merge a min-heap with a max-heap")
        if other.counter is not self.counter:
            self.counter.count += other.counter.snapshot_and_reset()
        if other._min is not None:
            if self._min is None:
                self._min = other._min
            else:
                a, b = self._min, other._min
                a_last, b_last = a.left, b.left
                a_last.right = b
                b.left = a_last
                b_last.right = a
                a.left = b_last
                if self._less(b.entry, a.entry):
                    self._min = b
        self.n += other.n
        self.root_count += other.root_count
        other._min = None
        other.n = 0
        other.root_count = 0
        return self

    def find_min(self) -> Entry:
        if self._min is None:
            raise EmptyHeapError("find_min on empty heap")
        return self._min.entry

    def min_node(self) -> FibNode:
        if self._min is None:
            raise EmptyHeapError("find_min on empty heap")
        return self._min

    def extract_min(self) -> Entry:
        z = self._min
        if z is None:
            raise EmptyHeapError("extract_min on empty heap")
        self._remove_root(z)
        for c in z.children():
            self._add_root_raw(c)
        z.child = None
        z.alive = False
        self.n -= 1
        self._consolidate()
        return z.entry

    def _add_root_raw(self, x):
        """Add to the root list without touching ``_min``."""
        x.parent = None
        x.marked = False
        if self._min is None:
            x.left = x.right = x
            self._min = x
        else:
            _splice(self._min, x)
        self.root_count += 1

    def _remove_root(self, x):
        if x.right is x:
            self._min = None
        else:
            if self._min is x:
                self._min = x.right
            _unlink(x)
        self.root_count -= 1

    def _link(self, y, x):
        """Make root ``y`` the last child of root ``x``."""
        y.parent = x
        y.marked = False
        if x.child is None:
            y.left = y.right = y
            x.child = y
        else:
            _splice(x.child, y)
        x.degree += 1

    def consolidate(self) -> None:
        """Link roots of equal degree until all root degrees differ."""
        if self._min is not None:
            self._consolidate()

    def _consolidate(self):
        roots = _ring(self._min)
        table = {}
        for x in roots:
            x.left = x.right = x
            d = x.degree
            while d in table:
                y = table.pop(d)
                if self._less(y.entry, x.entry):
                    x, y = y, x
                self._link(y, x)
                d += 1
            table[d] = x
        self._min = None
        self.root_count = 0
        for x in table.values():
            self._add_root(x)

    def _cut(self, x):
        p = x.parent
        if x.right is x:
            p.child = None
        else:
            if p.child is x:
                p.child = x.right
            _unlink(x)
        p.degree -= 1
        self._add_root_raw(x)

    def _cascade(self, y):
        while y.parent is not None:
            if not y.marked:
                y.marked = True
                return
            p = y.parent
            self._cut(y)
            y = p

    def _check(self, x):
        if not isinstance(x, FibNode) or not x.alive:
            raise StaleHandleError(f"stale or foreign handle {x!r}")

    def decrease_key(self, x: FibNode, key) -> None:
        """Move ``x`` towards the top: a smaller key, or larger when reversed."""
        self._check(x)
        c = self.counter
        wrong_way = c.key_lt(x.entry, key) if not self.reverse else not c.key_le(x.entry, key)
        if wrong_way:
            raise KeyOrderError(
                f"cannot move key {x.entry.key!r} to {key!r} in a "
                f"{'max' if self.reverse else 'min'}-heap"
            )
        x.entry.key = key
        p = x.parent
        if p is not None and self._less(x.entry, p.entry):
            self._cut(x)
            self._cascade(p)
        if x is not self._min and x.parent is None and self._less(x.entry, self._min.entry):
            self._min = x

    def delete(self, x: FibNode) -> None:
        self.delete_multi([x])

    def delete_multi(self, xs) -> None:
        """Remove every node in ``xs``.

        Each node's subtree is detached with cascading cuts above it and its
        children become unmarked roots. The root list is only consolidated
        when the minimum itself was removed.
        """
        xs = list(xs)
        seen = set()
        for x in xs:
            self._check(x)
            if id(x) in seen:
                raise StaleHandleError(f"duplicate handle {x!r}")
            seen.add(id(x))
        lost_min = False
        for x in xs:
            if x is self._min:
                lost_min = True
            p = x.parent
            if p is None:
                self._remove_root(x)
            else:
                if x.right is x:
                    p.child = None
                else:
                    if p.child is x:
                        p.child = x.right
                    _unlink(x)
                p.degree -= 1
                self._cascade(p)
            for c in x.children():
                self._add_root_raw(c)
            x.child = None
            x.degree = 0
            x.alive = False
            self.n -= 1
        if lost_min and self._min is not None:
            self._consolidate()

    # -- selection ----------------------------------------------------------

    def _select_nodes(self, k):
        if k <= 0 or self.n == 0:
            self.last_select_stats = SelectionStats()
            return []
        view = _RootView(self)
        nodes, stats = soft_select(
            view, k + 1, counter=self.counter, size=self.n + 1, less=self._less
        )
        self.last_select_stats = stats
        return [x for x in nodes if x is not view]

    def select_k(self, k: int) -> list:
        """The ``min(k, n)`` smallest entries, unordered; the element set is
        unchanged but the root list is consolidated if it is long."""
        nodes = self._select_nodes(k)
        if self.root_count > math.floor(math.log2(max(self.n, 1))) + 1:
            self._consolidate()
        return [x.entry for x in nodes]

    def select_k_nodes(self, k: int) -> list:
        nodes = self._select_nodes(k)
        if self.root_count > math.floor(math.log2(max(self.n, 1))) + 1:
            self._consolidate()
        return nodes

    def extract_k(self, k: int) -> list:
        """Remove and return the ``min(k, n)`` smallest entries, unordered."""
        return [x.entry for x in self.extract_k_nodes(k)]

    def extract_k_nodes(self, k: int) -> list:
        nodes = self._select_nodes(k)
        if not nodes:
            return []
        chosen = {id(x) for x in nodes}
        # the selection is closed under taking parents, so no cuts are needed
        keep = [r for r in _ring(self._min) if id(r) not in chosen]
        for x in nodes:
            for c in x.children():
                if id(c) not in chosen:
                    keep.append(c)
            x.child = None
            x.degree = 0
            x.parent = None
            x.alive = False
        self._min = None
        self.root_count = 0
        for r in keep:
            self._add_root_raw(r)
        self.n -= len(nodes)
        if self._min is not None:
            self._consolidate()
        return nodes

    # -- inspection -----------------------------------------------------------

    def roots(self):
        return _ring(self._min)

    def nodes(self):
        out = []
        stack = _ring(self._min)
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(x.children())
        return out

    def entries(self):
        return [x.entry for x in self.nodes()]

    def copy(self) -> "FibHeap":
        """Structural clone sharing entries, with a fresh counter."""
        h = FibHeap(ComparisonCounter(), reverse=self.reverse)

        def clone(x, parent):
            y = FibNode(x.entry, x.data)
            y.degree = x.degree
            y.marked = x.marked
            y.parent = parent
            for c in x.children():
                cc = clone(c, y)
                if y.child is None:
                    y.child = cc
                else:
                    _splice(y.child, cc)
            return y

        for r in _ring(self._min):
            y = clone(r, None)
            if h._min is None:
                h._min = y
            else:
                _splice(h._min, y)
            if r is self._min:
                h._min = y
        h.n = self.n
        h.root_count = self.root_count
        return h

    def validate(self) -> list:
        """Structural audit; returns a list of violation messages."""
        bad = []
        sk = (lambda e: e.sort_key())
        above = (lambda a, b: sk(a) > sk(b)) if not self.reverse else (lambda a, b: sk(a) < sk(b))
        roots = _ring(self._min)
        if len(roots) != self.root_count:
            bad.append(f"root_count {self.root_count} but {len(roots)} roots")
        if self._min is not None:
            for r in roots:
                if above(self._min.entry, r.entry):
                    bad.append(f"min {self._min!r} is not minimal; {r!r} is smaller")
                    break
        total = 0

        def walk(x):
            nonlocal total
            total += 1
            if not x.alive:
                bad.append(f"dead node {x!r} still linked")
            if x.left.right is not x or x.right.left is not x:
                bad.append(f"broken sibling links at {x!r}")
            kids = x.children()
            if len(kids) != x.degree:
                bad.append(f"{x!r} degree {x.degree} but {len(kids)} children")
            size = 1
            for i, c in enumerate(kids, start=1):
                if c.parent is not x:
                    bad.append(f"{c!r} has wrong parent pointer")
                if above(x.entry, c.entry):
                    bad.append(f"heap order violated between {x!r} and {c!r}")
                if c.degree < i - 2:
                    bad.append(f"child {i} of {x!r} has degree {c.degree} < {i - 2}")
                size += walk(c)
            if size < fib(x.degree + 2):
                bad.append(
                    f"{x!r} has {size} descendants, fewer than F({x.degree + 2})"
                    f" = {fib(x.degree + 2)}"
                )
            if size < PHI ** x.degree - 1e-9:
                bad.append(f"{x!r} has {size} descendants < phi^{x.degree}")
            return size

        for r in roots:
            if r.parent is not None:
                bad.append(f"root {r!r} has a parent")
            if r.marked:
                bad.append(f"root {r!r} is marked")
            walk(r)
        if total != self.n:
            bad.append(f"n = {self.n} but {total} nodes reachable")
        return bad


def fh_make(counter=None, reverse=False) -> FibHeap:
    return FibHeap(counter, reverse=reverse)
