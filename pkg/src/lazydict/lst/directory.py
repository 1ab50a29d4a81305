"""Ordered index over gaps.

A splay tree whose nodes are the gaps themselves. Searching for a gap costs
comparisons only against gap separators, and by the splay access lemma
with gap sizes as weights, reaching gap ``g`` costs amortized
``O(log(n / |g|))`` of them.
"""

from __future__ import annotations

import math


class Directory:
    __slots__ = ("root",)

    def __init__(self, root=None):
        self.root = root
        if root is not None:
            root.parent = None

    def __bool__(self):
        return self.root is not None

    # -- splay machinery --------------------------------------------------

    @staticmethod
    def _fix(x):
        t = x.size
        if x.left is not None:
            t += x.left.total
        if x.right is not None:
            t += x.right.total
        x.total = t

    def _rotate(self, x):
        p = x.parent
        g = p.parent
        if p.left is x:
            b = x.right
            p.left = b
            x.right = p
        else:
            b = x.left
            p.right = b
            x.left = p
        if b is not None:
            b.parent = p
        p.parent = x
        x.parent = g
        if g is None:
            self.root = x
        elif g.left is p:
            g.left = x
        else:
            g.right = x
        self._fix(p)
        self._fix(x)

    def splay(self, x):
        while x.parent is not None:
            p = x.parent
            g = p.parent
            if g is not None:
                if (g.left is p) == (p.left is x):
                    self._rotate(p)
                else:
                    self._rotate(x)
            self._rotate(x)
        self.root = x

    # -- queries ---------------------------------------------------------------

    def locate(self, pred):
        """Find the gap where the boundary of a monotone predicate falls.

        ``pred(sep)`` is true when ``sep`` lies on the small side. Each gap
        covers ``(lo_sep, hi_sep]``, so the answer is the first gap whose
        upper separator fails ``pred``; one comparison per visited node.
        """
        x = self.root
        found = None
        while x is not None:
            s = x.hi_sep
            if s is None or not pred(s):
                found = x
                x = x.left
            else:
                x = x.right
        self.splay(found)
        return found

    def locate_rank(self, r):
        """Gap holding rank ``r`` (1-based) and the number of elements before it.

        Rank descents cost no key comparisons, so the found gap is splayed
        only when it sits deeper than its weight warrants; splaying light
        gaps to the root would push heavy ones down for later key searches.
        """
        x = self.root
        total = x.total
        before = 0
        depth = 0
        while True:
            lt = x.left.total if x.left is not None else 0
            if r <= lt:
                x = x.left
            elif r <= lt + x.size:
                break
            else:
                r -= lt + x.size
                before += lt + x.size
                x = x.right
            depth += 1
        if depth > 2 * math.log2(total / max(x.size, 1)) + 2:
            self.splay(x)
            return x, (x.left.total if x.left is not None else 0)
        return x, before + (x.left.total if x.left is not None else 0)

    def prefix(self, g):
        self.splay(g)
        return g.left.total if g.left is not None else 0

    def first(self):
        x = self.root
        if x is None:
            return None
        while x.left is not None:
            x = x.left
        self.splay(x)
        return x

    def last(self):
        x = self.root
        if x is None:
            return None
        while x.right is not None:
            x = x.right
        self.splay(x)
        return x

    def gaps(self):
        out = []
        stack = []
        x = self.root
        while stack or x is not None:
            while x is not None:
                stack.append(x)
                x = x.left
            x = stack.pop()
            out.append(x)
            x = x.right
        return out

    def __len__(self):
        return len(self.gaps())

    # -- updates -----------------------------------------------------------------

    def resize(self, g, size):
        g.size = size
        x = g
        while x is not None:
            self._fix(x)
            x = x.parent

    def insert_after(self, g, new):
        self.splay(g)
        new.left = None
        new.right = g.right
        if new.right is not None:
            new.right.parent = new
        new.parent = g
        g.right = new
        self._fix(new)
        self._fix(g)

    def insert_before(self, g, new):
        self.splay(g)
        new.right = None
        new.left = g.left
        if new.left is not None:
            new.left.parent = new
        new.parent = g
        g.left = new
        self._fix(new)
        self._fix(g)

    def remove(self, g):
        self.splay(g)
        left, right = g.left, g.right
        g.left = g.right = g.parent = None
        if left is not None:
            left.parent = None
        if right is not None:
            right.parent = None
        if left is None:
            self.root = right
            return
        self.root = left
        m = left
        while m.right is not None:
            m = m.right
        self.splay(m)
        m.right = right
        if right is not None:
            right.parent = m
        self._fix(m)

    def split_after(self, g):
        """Detach and return everything after ``g`` as a new directory."""
        self.splay(g)
        right = g.right
        g.right = None
        self._fix(g)
        return Directory(right)

    def concat(self, other):
        """Append all of ``other`` after this directory's last gap."""
        if other.root is None:
            return
        if self.root is None:
            self.root = other.root
            other.root = None
            return
        m = self.last()
        m.right = other.root
        other.root.parent = m
        other.root = None
        self._fix(m)

    def audit(self):
        bad = []

        if self.root is not None:
            stack = [(self.root, None)]
            sums = {}
            order = []
            while stack:
                x, p = stack.pop()
                if x.parent is not p:
                    bad.append("directory parent pointer broken")
                order.append(x)
                for c in (x.left, x.right):
                    if c is not None:
                        stack.append((c, x))
            for x in reversed(order):
                t = x.size
                for c in (x.left, x.right):
                    if c is not None:
                        t += sums[id(c)]
                sums[id(x)] = t
                if t != x.total:
                    bad.append(f"directory weight {x.total} != subtree sum {t}")
        return bad
