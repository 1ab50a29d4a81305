"""Lazy search tree: a sorted dictionary that sorts only as queries demand.

Elements live in gaps, blocks that are ordered relative to each other but
unsorted inside. Each query splits the gap it lands in. How a gap stores
its elements depends on which of its boundaries queries have touched:

* neither side: an unsorted list;
* left side only: a selectable min-heap;
* right side only: a selectable max-heap;
* both sides: thirds, with a min-heap below a static separator, an
  unsorted middle, and a max-heap above a second separator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional

from ..fibheap import FibHeap
from ..order import ComparisonCounter, Entry
from ..select import partition_k
from .directory import Directory

ZERO_SIDED = "zero"
LEFT_SIDED = "left"
RIGHT_SIDED = "right"
TWO_SIDED = "two"

LO, MID, HI = 0, 1, 2

# each third must hold at least (1/3 - 1/12) = 1/4 of the gap
THIRDS_SLACK = 4


class LSTError(Exception):
    pass


class RankError(LSTError, IndexError):
    pass


class HandleError(LSTError, KeyError):
    pass


class OutOfGapError(LSTError, ValueError):
    """The new key would leave the element's gap; use delete + insert."""


class ShapeError(LSTError, ValueError):
    pass


def _slog(s):
    return s * math.log2(s) if s > 1 else 0.0


class Handle:
    """Stable reference to an element of a :class:`LazySearchTree`."""

    __slots__ = ("entry", "gap", "where", "ref", "alive")

    def __init__(self, entry):
        self.entry = entry
        self.gap = None
        self.where = MID
        self.ref = None
        self.alive = True

    @property
    def key(self):
        return self.entry.key

    def __repr__(self):
        return f"Handle({self.entry.key!r}, seq={self.entry.seq})"


class Gap:
    """A key-range block of elements plus its directory links."""

    __slots__ = (
        "left", "right", "parent", "total", "size",
        "lo_sep", "hi_sep", "tl", "tr",
        "lo", "mid", "hi", "sep_lo", "sep_hi",
    )

    def __init__(self, lo_sep=None, hi_sep=None):
        self.left = self.right = self.parent = None
        self.total = 0
        self.size = 0
        self.lo_sep = lo_sep
        self.hi_sep = hi_sep
        self.tl = False
        self.tr = False
        self.lo = None
        self.mid = []
        self.hi = None
        self.sep_lo = None
        self.sep_hi = None

    @property
    def sidedness(self):
        if self.tl:
            return TWO_SIDED if self.tr else LEFT_SIDED
        return RIGHT_SIDED if self.tr else ZERO_SIDED

    def handles(self):
        out = []
        if self.lo is not None:
            out.extend(x.data for x in self.lo.nodes())
        out.extend(self.mid)
        if self.hi is not None:
            out.extend(x.data for x in self.hi.nodes())
        return out

    def __repr__(self):
        return f"Gap({self.sidedness}, size={self.size})"


def _bucket(g):
    # credit account of a gap: 0 zero-sided, 1 one-sided, 2 none
    return (g.tl + g.tr) if (g.tl + g.tr) < 2 else 2


def below_entry(e: Entry) -> Entry:
    """Separator strictly between ``e`` and every entry ordered before it."""
    return Entry(e.key, e.seq - 0.5)


def above_entry(e: Entry) -> Entry:
    """Separator at or below every entry ordered after ``e``, and above ``e``."""
    return Entry(e.key, e.seq + 0.5)


def _cut_sep(low_max, high_min):
    # separator s with low_max <= s < high_min
    return low_max.frozen() if low_max is not None else below_entry(high_min)


def _split_handles(handles, k, less):
    """``(low, high, sep)``: the ``k`` smallest handles, the rest, and a
    separator between them."""
    by_id = {id(h.entry): h for h in handles}
    lo, hi, lmax, hmin = partition_k([h.entry for h in handles], k, less)
    return (
        [by_id[id(e)] for e in lo],
        [by_id[id(e)] for e in hi],
        _cut_sep(lmax, hmin),
    )


@dataclass
class KeyQuery:
    rank: int
    contains: bool
    predecessor: Optional[Entry]
    successor: Optional[Entry]


class LazySearchTree:
    """Sorted dictionary over :class:`Entry` elements.

    ``insert`` accepts an :class:`Entry` or a bare key (a sequence number is
    then assigned). All comparisons are tallied on :attr:`counter`.
    """

    def __init__(self, items=(), counter: ComparisonCounter | None = None):
        self.counter = counter if counter is not None else ComparisonCounter()
        self.dir = Directory()
        self.n = 0
        self.gap_count = 0
        self.zero_credits = 0
        self.one_credits = 0
        self._slogs = 0.0
        self._next_seq = 0
        for e in items:
            self.insert(e)

    def __len__(self):
        return self.n

    # -- bookkeeping ---------------------------------------------------------

    def _set_size(self, g, size):
        self._slogs += _slog(size) - _slog(g.size)
        self.dir.resize(g, size)

    def _move_credits(self, src, dst, count):
        if src == dst or count == 0:
            return
        if src == 0:
            self.zero_credits -= count
        elif src == 1:
            self.one_credits -= count
        if dst == 0:
            self.zero_credits += count
        elif dst == 1:
            self.one_credits += count

    def _new_gap_in_dir(self, g, anchor, after):
        self._slogs += _slog(g.size)
        g.total = g.size
        if anchor is None:
            self.dir = Directory(g)
        elif after:
            self.dir.insert_after(anchor, g)
        else:
            self.dir.insert_before(anchor, g)
        self.gap_count += 1

    def _drop_gap(self, g):
        self._slogs -= _slog(g.size)
        self.dir.remove(g)
        self.gap_count -= 1

    def b_value(self) -> float:
        """Sum over gaps of ``|gap| * log2(n / |gap|)``."""
        n = self.n
        return n * math.log2(n) - self._slogs if n > 1 else 0.0

    def b_exact(self) -> float:
        n = self.n
        return sum(s * math.log2(n / s) for s in self.gap_sizes() if s)

    def gap_sizes(self):
        return [g.size for g in self.dir.gaps()]

    def gaps(self):
        return self.dir.gaps()

    # -- interval structures -------------------------------------------------

    def _heap(self, reverse):
        return FibHeap(self.counter, reverse=reverse)

    def _fill_gap(self, g, handles, tl, tr):
        """(Re)build the interval structure of ``g`` from ``handles``."""
        g.tl, g.tr = tl, tr
        g.lo = g.hi = None
        g.mid = []
        g.sep_lo = g.sep_hi = None
        less = self.counter.less
        if tl and tr:
            m = len(handles)
            a = m // 3
            lo_part, mid_part, hi_part = [], handles, []
            if a:
                lo_part, rest, g.sep_lo = _split_handles(handles, a, less)
                by_id = {id(h.entry): h for h in rest}
                mid_e, hi_e, mmax, hmin = partition_k(
                    [h.entry for h in rest], len(rest) - a, less
                )
                mid_part = [by_id[id(e)] for e in mid_e]
                hi_part = [by_id[id(e)] for e in hi_e]
                g.sep_hi = hmin.frozen() if hmin is not None else above_entry(mmax)
            g.lo = self._heap(False)
            g.hi = self._heap(True)
            for h in lo_part:
                self._put(g, h, LO)
            for h in mid_part:
                self._put(g, h, MID)
            for h in hi_part:
                self._put(g, h, HI)
            # consolidating here is paid for by the linear-time build and keeps
            # later selections from inheriting a long root list
            g.lo.consolidate()
            g.hi.consolidate()
        elif tl:
            g.lo = self._heap(False)
            for h in handles:
                self._put(g, h, LO)
            g.lo.consolidate()
        elif tr:
            g.hi = self._heap(True)
            for h in handles:
                self._put(g, h, HI)
            g.hi.consolidate()
        else:
            for h in handles:
                self._put(g, h, MID)
        g.size = len(handles) if g.size is None else g.size

    def _put(self, g, h, where):
        h.gap = g
        h.where = where
        if where == MID:
            h.ref = len(g.mid)
            g.mid.append(h)
        elif where == LO:
            h.ref = g.lo.insert(h.entry, h)
        else:
            h.ref = g.hi.insert(h.entry, h)

    def _take(self, h):
        """Remove ``h`` from its gap's structure (sizes untouched)."""
        g = h.gap
        if h.where == MID:
            mid = g.mid
            i = h.ref
            last = mid.pop()
            if last is not h:
                mid[i] = last
                last.ref = i
        elif h.where == LO:
            g.lo.delete(h.ref)
        else:
            g.hi.delete(h.ref)
        h.ref = None

    def _route(self, g, h):
        """Place ``h`` into the right part of ``g``'s structure."""
        if g.tl and g.tr:
            less = self.counter.less
            e = h.entry
            if g.sep_lo is not None and not less(g.sep_lo, e):
                self._put(g, h, LO)
            elif g.sep_hi is not None and not less(e, g.sep_hi):
                self._put(g, h, HI)
            else:
                self._put(g, h, MID)
        elif g.tl:
            self._put(g, h, LO)
        elif g.tr:
            self._put(g, h, HI)
        else:
            self._put(g, h, MID)

    def _thirds_ok(self, g):
        t = g.size // THIRDS_SLACK
        return g.lo.n >= t and len(g.mid) >= t and g.hi.n >= t

    def _maintain(self, g):
        """Rebuild a two-sided gap whose thirds drifted below a quarter."""
        if g.tl and g.tr and not self._thirds_ok(g):
            self._fill_gap(g, g.handles(), True, True)

    def _gap_max(self, g) -> Entry:
        if g.hi is not None and g.hi.n:
            return g.hi.find_min()
        less = self.counter.less
        best = None
        for h in g.handles():
            if best is None or less(best, h.entry):
                best = h.entry
        return best

    def _gap_min(self, g) -> Entry:
        if g.lo is not None and g.lo.n:
            return g.lo.find_min()
        less = self.counter.less
        best = None
        for h in g.handles():
            if best is None or less(h.entry, best):
                best = h.entry
        return best

    def _retag(self, g, tl, tr):
        """Give ``g`` new sidedness, rebuilding its structure."""
        if (g.tl, g.tr) == (tl, tr):
            return
        src = _bucket(g)
        self._fill_gap(g, g.handles(), tl, tr)
        self._move_credits(src, _bucket(g), g.size)

    # -- updates ---------------------------------------------------------------

    def _make_entry(self, item, payload=None):
        if isinstance(item, Entry):
            if isinstance(item.seq, int) and item.seq >= self._next_seq:
                self._next_seq = item.seq + 1
            return item
        e = Entry(item, self._next_seq, payload)
        self._next_seq += 1
        return e

    def insert(self, item, payload=None) -> Handle:
        e = self._make_entry(item, payload)
        h = Handle(e)
        if self.dir.root is None:
            g = Gap()
            g.size = 0
            self._new_gap_in_dir(g, None, False)
        else:
            less = self.counter.less
            g = self.dir.locate(lambda s: less(s, e))
        self._route(g, h)
        b = _bucket(g)
        if b == 0:
            self.zero_credits += 1
        elif b == 1:
            self.one_credits += 1
        self.n += 1
        self._set_size(g, g.size + 1)
        self._maintain(g)
        return h

    def _check(self, h):
        if not isinstance(h, Handle) or not h.alive or h.gap is None:
            raise HandleError(f"stale or foreign handle {h!r}")

    def delete(self, h: Handle) -> None:
        self._check(h)
        g = h.gap
        self._take(h)
        h.alive = False
        h.gap = None
        self.n -= 1
        if g.size == 1:
            self._remove_gap(g)
        else:
            self._set_size(g, g.size - 1)
            self._maintain(g)

    def _remove_gap(self, g):
        # the neighbour absorbs g's key range
        self.dir.splay(g)
        prev = g.left
        if prev is not None:
            while prev.right is not None:
                prev = prev.right
        nxt = g.right
        if nxt is not None:
            while nxt.left is not None:
                nxt = nxt.left
        if prev is not None:
            prev.hi_sep = g.hi_sep
        elif nxt is not None:
            nxt.lo_sep = g.lo_sep
        self._drop_gap(g)

    def change_key(self, h: Handle, key) -> None:
        """Change ``h``'s key within its gap.

        Raises :class:`OutOfGapError` when ``key`` falls outside the gap's
        range; the caller should then delete and re-insert.
        """
        self._check(h)
        g = h.gap
        c = self.counter
        moved = Entry(key, h.entry.seq)
        if (g.lo_sep is not None and not c.less(g.lo_sep, moved)) or (
            g.hi_sep is not None and c.less(g.hi_sep, moved)
        ):
            raise OutOfGapError(f"key {key!r} lies outside the element's gap")
        if h.where == MID:
            self._take(h)
            h.entry.key = key
            self._route(g, h)
        elif h.where == LO:
            if not c.key_lt(h.entry, key):
                g.lo.decrease_key(h.ref, key)
            else:
                self._take(h)
                h.entry.key = key
                self._route(g, h)
        else:
            if not c.key_lt(h.entry, key) and h.entry.key != key:
                self._take(h)
                h.entry.key = key
                self._route(g, h)
            else:
                g.hi.decrease_key(h.ref, key)
        self._maintain(g)

    # -- splitting -------------------------------------------------------------

    def _install(self, g, left, right, sep):
        """Replace gap ``g`` by pieces ``left`` and ``right`` (one may be ``g``)."""
        left.hi_sep = sep
        right.lo_sep = sep
        if left is g:
            self._slogs -= _slog(g.size)
            g.size = g.size - right.size
            self._slogs += _slog(g.size)
            self.dir.resize(g, g.size)
            self._new_gap_in_dir(right, g, True)
        elif right is g:
            self._slogs -= _slog(g.size)
            g.size = g.size - left.size
            self._slogs += _slog(g.size)
            self.dir.resize(g, g.size)
            self._new_gap_in_dir(left, g, False)
        else:
            self._new_gap_in_dir(left, g, False)
            self._new_gap_in_dir(right, g, True)
            self._drop_gap(g)

    def _piece(self, handles, tl, tr, src):
        p = Gap()
        p.size = len(handles)
        self._fill_gap(p, handles, tl, tr)
        self._move_credits(src, _bucket(p), p.size)
        return p

    def _split_lists(self, g, left_h, right_h, sep):
        src = _bucket(g)
        left = Gap(g.lo_sep)
        right = Gap(None, g.hi_sep)
        left.size = len(left_h)
        right.size = len(right_h)
        self._fill_gap(left, left_h, g.tl, True)
        self._fill_gap(right, right_h, True, g.tr)
        self._move_credits(src, _bucket(left), left.size)
        self._move_credits(src, _bucket(right), right.size)
        if sep is None:
            sep = self._gap_max(left).frozen()
        left.lo_sep = g.lo_sep
        right.hi_sep = g.hi_sep
        self._install(g, left, right, sep)

    def _extract_low(self, g, heap, k):
        """Split off the ``k`` smallest of ``heap`` (part of ``g``) as a new
        gap on the left of ``g``."""
        if k >= g.size:
            self._retag(g, g.tl, True)
            return g
        src = _bucket(g)
        taken = [x.data for x in heap.extract_k_nodes(k)]
        left = Gap(g.lo_sep)
        left.size = len(taken)
        self._fill_gap(left, taken, g.tl, True)
        self._move_credits(src, _bucket(left), left.size)
        sep = self._gap_max(left).frozen()
        self._install(g, left, g, sep)
        self._maintain(g)
        return left

    def _extract_high(self, g, heap, k):
        if k >= g.size:
            self._retag(g, True, g.tr)
            return g
        src = _bucket(g)
        taken = [x.data for x in heap.extract_k_nodes(k)]
        right = Gap(None, g.hi_sep)
        right.size = len(taken)
        self._fill_gap(right, taken, True, g.tr)
        self._move_credits(src, _bucket(right), right.size)
        sep = below_entry(self._gap_min(right))
        self._install(g, g, right, sep)
        self._maintain(g)
        return right

    def _partition_rank(self, g, handles, k):
        """Split ``g`` so its left piece holds the ``k`` smallest of ``handles``."""
        left_h, right_h, sep = _split_handles(handles, k, self.counter.less)
        self._split_lists(g, left_h, right_h, sep)

    def _cut_rank(self, g, k):
        """Create a boundary after the ``k``-th smallest element of gap ``g``."""
        size = g.size
        if k >= size:
            self._retag(g, g.tl, True)
            return
        if k <= 0:
            self._retag(g, True, g.tr)
            return
        if g.tl and g.tr:
            nlo, nhi = g.lo.n, g.hi.n
            if k <= nlo:
                self._extract_low(g, g.lo, k)
            elif k >= size - nhi:
                self._extract_high(g, g.hi, size - k)
            else:
                # boundary inside the unsorted middle: rebuild both pieces
                below, above, sep = _split_handles(g.mid, k - nlo, self.counter.less)
                left_h = [x.data for x in g.lo.nodes()] + below
                right_h = above + [x.data for x in g.hi.nodes()]
                self._split_lists(g, left_h, right_h, sep)
        elif g.tl and 4 * k <= size:
            self._extract_low(g, g.lo, k)
        elif g.tr and 4 * (size - k) <= size:
            self._extract_high(g, g.hi, size - k)
        else:
            # zero-sided, or one-sided with the cut on the far half
            self._partition_rank(g, g.handles(), k)

    def _doubling_count(self, heap, pred, cap, low):
        """Count heap elements on the near side of a monotone boundary.

        For a min-heap (``low``) counts elements with ``pred`` true; for a
        max-heap counts those with ``pred`` false. Selects 1, 2, 4, ...
        elements until the boundary is bracketed. Returns ``None`` when the
        count would exceed ``cap``.
        """
        less = self.counter.less
        s = 1
        n = heap.n
        if n == 0:
            return 0
        while True:
            if s >= n:
                sel = [x.entry for x in heap.nodes()]
            else:
                sel = heap.select_k(s)
            # the far end of the selected prefix
            far = sel[0]
            for e in sel[1:]:
                if low == less(far, e):
                    far = e
            near_side = pred(far) if low else not pred(far)
            if not near_side or s >= n:
                c = sum(1 for e in sel if (pred(e) if low else not pred(e)))
                return c if c <= cap else None
            if 2 * s > cap and cap < n:
                return None
            s *= 2

    def _cut_pred(self, g, pred, sep):
        """Create the boundary of monotone ``pred`` inside gap ``g``.

        ``sep`` is a separator entry valid for that boundary. Returns the
        number of ``g``'s elements left of the boundary.
        """
        size = g.size
        if g.tl and g.tr:
            if g.sep_lo is not None and not pred(g.sep_lo):
                c = self._doubling_count(g.lo, pred, g.lo.n, True)
                if c:
                    self._extract_low(g, g.lo, c)
                return c
            if g.sep_hi is not None and pred(g.sep_hi):
                d = self._doubling_count(g.hi, pred, g.hi.n, False)
                if d:
                    self._extract_high(g, g.hi, d)
                return size - d
            left_h = [x.data for x in g.lo.nodes()]
            right_h = [x.data for x in g.hi.nodes()]
            for h in g.mid:
                (left_h if pred(h.entry) else right_h).append(h)
            c = len(left_h)
            if 0 < c < size:
                self._split_lists(g, left_h, right_h, sep)
            return c
        if g.tl:
            c = self._doubling_count(g.lo, pred, size // 2, True)
            if c is not None:
                if c:
                    self._extract_low(g, g.lo, c)
                return c
        elif g.tr:
            d = self._doubling_count(g.hi, pred, size // 2, False)
            if d is not None:
                if d:
                    self._extract_high(g, g.hi, d)
                return size - d
        left_h, right_h = [], []
        for h in g.handles():
            (left_h if pred(h.entry) else right_h).append(h)
        c = len(left_h)
        if 0 < c < size:
            self._split_lists(g, left_h, right_h, sep)
        return c

    def _boundary_rank(self, pred, sep):
        """Materialise the boundary of ``pred`` and return its rank."""
        if self.dir.root is None:
            return 0
        g = self.dir.locate(pred)
        prefix = self.dir.prefix(g)
        c = self._cut_pred(g, pred, sep)
        return prefix + c

    def _element_at(self, r) -> Entry:
        """Entry of rank ``r``, assuming a boundary already sits after it."""
        g, prefix = self.dir.locate_rank(r)
        if prefix + g.size != r:
            self._cut_rank(g, r - prefix)
            g, prefix = self.dir.locate_rank(r)
        self._retag(g, g.tl, True)
        return self._gap_max(g)

    def _element_after(self, r) -> Entry:
        """Entry of rank ``r + 1``, assuming a boundary sits before it."""
        g, prefix = self.dir.locate_rank(r + 1)
        if prefix != r:
            self._cut_rank(g, r - prefix)
            g, prefix = self.dir.locate_rank(r + 1)
        self._retag(g, True, g.tr)
        return self._gap_min(g)

    # -- queries ---------------------------------------------------------------

    def query_rank(self, r: int) -> Entry:
        """Entry of rank ``r`` (1-based); splits the gap holding it."""
        if not 1 <= r <= self.n:
            raise RankError(f"rank {r} outside 1..{self.n}")
        g, prefix = self.dir.locate_rank(r)
        self._cut_rank(g, r - prefix)
        return self._element_at(r)

    def minimum(self) -> Entry:
        return self.query_rank(1)

    def maximum(self) -> Entry:
        return self.query_rank(self.n)

    def query_key(self, key) -> KeyQuery:
        """Rank of ``key`` (elements with key ``<= key``), membership, and the
        nearest entries strictly below and above ``key``."""
        if self.n == 0:
            return KeyQuery(0, False, None, None)
        c = self.counter
        below = self._boundary_rank(
            lambda e: c.key_lt(e, key), Entry(key, -math.inf)
        )
        upto = self._boundary_rank(
            lambda e: c.key_le(e, key), Entry(key, math.inf)
        )
        pred = self._element_at(below) if below >= 1 else None
        succ = self._element_after(upto) if upto < self.n else None
        return KeyQuery(upto, upto > below, pred, succ)

    # -- split / merge -----------------------------------------------------------

    def _count_buckets(self):
        z = o = 0
        for g in self.dir.gaps():
            b = _bucket(g)
            if b == 0:
                z += g.size
            elif b == 1:
                o += g.size
        return z, o

    def _recount(self):
        gaps = self.dir.gaps()
        self.n = sum(g.size for g in gaps)
        self.gap_count = len(gaps)
        self._slogs = sum(_slog(g.size) for g in gaps)

    def split(self, r: int):
        """Split into trees holding ranks ``1..r`` and ``r+1..n``; consumes self."""
        if not 0 <= r <= self.n:
            raise RankError(f"split rank {r} outside 0..{self.n}")
        if r == 0:
            return LazySearchTree(counter=self.counter), self
        if r == self.n:
            return self, LazySearchTree(counter=self.counter)
        self.query_rank(r)
        g, prefix = self.dir.locate_rank(r)
        other = LazySearchTree(counter=self.counter)
        other.dir = self.dir.split_after(g)
        other._next_seq = self._next_seq
        g.hi_sep = None
        other.dir.first().lo_sep = None
        self._recount()
        other._recount()
        z, o = self._count_buckets()
        other.zero_credits = self.zero_credits - z
        other.one_credits = self.one_credits - o
        self.zero_credits, self.one_credits = z, o
        return self, other

    def _adopt(self, other):
        if other.counter is not self.counter:
            self.counter.count += other.counter.snapshot_and_reset()
            for g in other.dir.gaps():
                for hp in (g.lo, g.hi):
                    if hp is not None:
                        hp.set_counter(self.counter)
        self.zero_credits += other.zero_credits
        self.one_credits += other.one_credits
        self._next_seq = max(self._next_seq, other._next_seq)

    @classmethod
    def merge(cls, t1: "LazySearchTree", t2: "LazySearchTree") -> "LazySearchTree":
        """Concatenate ``t1`` and ``t2``; every key of ``t1`` must be ``<=``
        every key of ``t2``. Both inputs are consumed."""
        if t2.n == 0:
            return t1
        if t1.n == 0:
            t2._adopt(t1)
            return t2
        t1._adopt(t2)
        last = t1.dir.last()
        first = t2.dir.first()
        if last.hi is not None and last.hi.n:
            sep = last.hi.find_min().frozen()
        elif first.lo is not None and first.lo.n:
            sep = below_entry(first.lo.find_min())
        else:
            sep = t1._gap_max(last).frozen()
        last.hi_sep = sep
        first.lo_sep = sep
        t1.dir.concat(t2.dir)
        t1.n += t2.n
        t1.gap_count += t2.gap_count
        t1._slogs += t2._slogs
        t2.n = 0
        t2.gap_count = 0
        return t1

    def _pq_heap(self):
        """The single heap of a priority-queue-shaped tree, or ``None`` if empty."""
        if self.n == 0:
            return None
        if self.gap_count != 1:
            raise ShapeError(f"tree has {self.gap_count} gaps, not priority-queue shaped")
        g = self.dir.root
        if g.tl and g.tr:
            raise ShapeError("two-sided gap is not priority-queue shaped")
        return g

    @classmethod
    def merge_pq(cls, t1: "LazySearchTree", t2: "LazySearchTree") -> "LazySearchTree":
        """Meld two single-gap priority queues of the same orientation.

        Two left-sided (or two right-sided) gaps meld their heaps with one
        comparison. An unqueried (zero-sided) side is first promoted to the
        other's orientation, paid for by its insertion credits.
        """
        g1 = t1._pq_heap()
        g2 = t2._pq_heap()
        if g2 is None:
            return t1
        if g1 is None:
            t2._adopt(t1)
            return t2
        t1._adopt(t2)
        if g1.tl != g2.tl or g1.tr != g2.tr:
            if g1.tl or g1.tr:
                t1._retag(g2, g1.tl, g1.tr)
            else:
                t1._retag(g1, g2.tl, g2.tr)
        if g1.tl:
            for x in g2.lo.nodes():
                x.data.gap = g1
            g1.lo.merge(g2.lo)
        elif g1.tr:
            for x in g2.hi.nodes():
                x.data.gap = g1
            g1.hi.merge(g2.hi)
        else:
            for h in g2.mid:
                h.gap = g1
                h.ref = len(g1.mid)
                g1.mid.append(h)
        t1.n += t2.n
        t1._slogs -= _slog(g1.size)
        t1.dir.resize(g1, g1.size + g2.size)
        t1._slogs += _slog(g1.size)
        g1.lo_sep = g1.hi_sep = None
        t2.dir = Directory()
        t2.n = 0
        t2.gap_count = 0
        t2._slogs = 0.0
        return t1

    # -- inspection ----------------------------------------------------------------

    def entries(self):
        """All entries, gap by gap in key order, unsorted within a gap."""
        return [h.entry for g in self.dir.gaps() for h in g.handles()]

    def sorted_entries(self):
        """Full in-order scan; sorts within gaps without counting comparisons."""
        out = []
        for g in self.dir.gaps():
            out.extend(sorted((h.entry for h in g.handles()), key=Entry.sort_key))
        return out

    def validate(self) -> list:
        """Audit every structural invariant; returns violation messages."""
        bad = list(self.dir.audit())
        gaps = self.dir.gaps()
        sk = Entry.sort_key
        if len(gaps) != self.gap_count:
            bad.append(f"gap_count {self.gap_count} but {len(gaps)} gaps")
        total = 0
        z = o = 0
        prev = None
        for i, g in enumerate(gaps):
            hs = g.handles()
            total += len(hs)
            if len(hs) != g.size:
                bad.append(f"gap {i}: directory weight {g.size} != {len(hs)} stored")
            if not hs:
                bad.append(f"gap {i} is empty")
            b = _bucket(g)
            if b == 0:
                z += g.size
            elif b == 1:
                o += g.size
            if i == 0 and g.lo_sep is not None:
                bad.append("first gap has a lower separator")
            if i == len(gaps) - 1 and g.hi_sep is not None:
                bad.append("last gap has an upper separator")
            if prev is not None and prev.hi_sep is not g.lo_sep:
                bad.append(f"gaps {i - 1} and {i} disagree on their separator")
            for h in hs:
                if not h.alive or h.gap is not g:
                    bad.append(f"gap {i}: handle {h!r} has stale back-pointer")
                if g.lo_sep is not None and not sk(g.lo_sep) < sk(h.entry):
                    bad.append(f"gap {i}: {h!r} not above lower separator")
                if g.hi_sep is not None and not sk(h.entry) <= sk(g.hi_sep):
                    bad.append(f"gap {i}: {h!r} above upper separator")
            kind = g.sidedness
            want = {
                ZERO_SIDED: (False, False, False),
                LEFT_SIDED: (True, False, False),
                RIGHT_SIDED: (False, False, True),
                TWO_SIDED: (True, True, True),
            }[kind]
            have = (g.lo is not None, kind == TWO_SIDED, g.hi is not None)
            if kind != TWO_SIDED and g.mid and kind != ZERO_SIDED:
                bad.append(f"gap {i}: {kind} gap keeps unsorted elements")
            if (have[0], have[2]) != (want[0], want[2]):
                bad.append(f"gap {i}: {kind} gap has the wrong heaps")
            for part, hp in ((LO, g.lo), (HI, g.hi)):
                if hp is None:
                    continue
                for msg in hp.validate():
                    bad.append(f"gap {i} heap: {msg}")
                for x in hp.nodes():
                    if x.data.where != part or x.data.ref is not x:
                        bad.append(f"gap {i}: heap handle {x.data!r} mislabelled")
            for j, h in enumerate(g.mid):
                if h.where != MID or h.ref != j:
                    bad.append(f"gap {i}: middle handle {h!r} mislabelled")
            if kind == TWO_SIDED:
                t = g.size // THIRDS_SLACK
                for name, cnt in (("min", g.lo.n), ("middle", len(g.mid)), ("max", g.hi.n)):
                    if cnt < t:
                        bad.append(
                            f"gap {i}: {name} third holds {cnt} of {g.size}, below 1/4"
                        )
                lo_keys = [sk(x.entry) for x in g.lo.nodes()]
                hi_keys = [sk(x.entry) for x in g.hi.nodes()]
                mid_keys = [sk(h.entry) for h in g.mid]
                if lo_keys and (g.sep_lo is None or max(lo_keys) > sk(g.sep_lo)):
                    bad.append(f"gap {i}: min third exceeds its separator")
                if mid_keys and g.sep_lo is not None and min(mid_keys) <= sk(g.sep_lo):
                    bad.append(f"gap {i}: middle third dips below the low separator")
                if mid_keys and g.sep_hi is not None and max(mid_keys) >= sk(g.sep_hi):
                    bad.append(f"gap {i}: middle third reaches the high separator")
                if hi_keys and (g.sep_hi is None or min(hi_keys) < sk(g.sep_hi)):
                    bad.append(f"gap {i}: max third below its separator")
            prev = g
        if total != self.n:
            bad.append(f"n = {self.n} but {total} elements stored")
        if self.zero_credits < z or self.zero_credits < 0:
            bad.append(f"zero-sided credits {self.zero_credits} < {z} elements")
        if self.one_credits < o or self.one_credits < 0:
            bad.append(f"one-sided credits {self.one_credits} < {o} elements")
        return bad


def lst_construct(items=(), counter=None) -> LazySearchTree:
    return LazySearchTree(items, counter=counter)
