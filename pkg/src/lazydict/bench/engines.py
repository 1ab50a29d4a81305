"""Engines that replay workloads and render answers as comparable text."""

from __future__ import annotations

import bisect
import math

from ..fibheap import FibHeap
from ..lst import LazySearchTree, OutOfGapError
from ..order import ComparisonCounter, Entry
from .workload import WorkloadError


class Unsupported(Exception):
    """The engine cannot execute this op."""


def fmt(key, seq) -> str:
    return f"{key}:{seq}"


def fmt_entry(e) -> str:
    return "-" if e is None else fmt(e.key, e.seq)


def fmt_batch(entries) -> str:
    return " ".join(fmt(e.key, e.seq) for e in sorted(entries, key=Entry.sort_key))


class Engine:
    name = "?"

    def __init__(self):
        self.counter = ComparisonCounter()

    def apply(self, index, op, args):
        try:
            return getattr(self, "op_" + op.lower())(index, *args)
        except KeyError as exc:
            raise WorkloadError(f"op {index}: ref {exc.args[0]} is not live") from None

    def size(self):
        raise NotImplementedError

    def gaps(self):
        return ""

    def b_value(self):
        return ""

    def validate(self):
        return []


class LSTEngine(Engine):
    name = "lst"

    def __init__(self):
        super().__init__()
        self.tree = LazySearchTree(counter=self.counter)
        self.handles = {}
        self.pending = None

    def size(self):
        return self.tree.n

    def gaps(self):
        return self.tree.gap_count

    def b_value(self):
        return self.tree.b_value()

    def validate(self):
        return self.tree.validate()

    def _idle(self, index):
        if self.pending is not None:
            raise WorkloadError(f"op {index}: only MERGE may follow SPLIT")

    def op_insert(self, index, key):
        self._idle(index)
        self.handles[index] = self.tree.insert(Entry(key, index))

    def op_delete(self, index, ref):
        self._idle(index)
        self.tree.delete(self.handles.pop(ref))

    def op_changekey(self, index, ref, key):
        self._idle(index)
        h = self.handles[ref]
        try:
            self.tree.change_key(h, key)
        except OutOfGapError:
            self.tree.delete(h)
            self.handles[ref] = self.tree.insert(Entry(key, ref))

    def op_queryrank(self, index, r):
        self._idle(index)
        return fmt_entry(self.tree.query_rank(r))

    def op_querykey(self, index, key):
        self._idle(index)
        q = self.tree.query_key(key)
        return f"{q.rank} {int(q.contains)} {fmt_entry(q.predecessor)} {fmt_entry(q.successor)}"

    def op_split(self, index, r):
        self._idle(index)
        t1, t2 = self.tree.split(r)
        self.pending = (t1, t2)
        hi = t1.query_rank(t1.n) if t1.n else None
        lo = t2.query_rank(1) if t2.n else None
        return f"{fmt_entry(hi)} {fmt_entry(lo)}"

    def op_merge(self, index):
        if self.pending is None:
            raise WorkloadError(f"op {index}: MERGE without a preceding SPLIT")
        self.tree = LazySearchTree.merge(*self.pending)
        self.pending = None

    def op_extractk(self, index, k):
        self._idle(index)
        t1, t2 = self.tree.split(min(k, self.tree.n))
        out = t1.entries()
        for e in out:
            del self.handles[e.seq]
        self.tree = t2
        return fmt_batch(out)

    def op_selectk(self, index, k):
        self._idle(index)
        t1, t2 = self.tree.split(min(k, self.tree.n))
        out = t1.entries()
        self.tree = LazySearchTree.merge(t1, t2)
        return fmt_batch(out)

    def op_deletemulti(self, index, *refs):
        self._idle(index)
        for ref in refs:
            self.tree.delete(self.handles.pop(ref))


class FibHeapEngine(Engine):
    name = "fibheap"

    def __init__(self):
        super().__init__()
        self.heap = FibHeap(self.counter)
        self.nodes = {}

    def size(self):
        return self.heap.n

    def validate(self):
        return self.heap.validate()

    def op_insert(self, index, key):
        self.nodes[index] = self.heap.insert(Entry(key, index), index)

    def op_delete(self, index, ref):
        self.heap.delete(self.nodes.pop(ref))

    def op_changekey(self, index, ref, key):
        x = self.nodes[ref]
        if key <= x.entry.key:
            self.heap.decrease_key(x, key)
        else:
            self.heap.delete(x)
            self.nodes[ref] = self.heap.insert(Entry(key, ref), ref)

    def op_queryrank(self, index, r):
        if not 1 <= r <= self.heap.n:
            raise WorkloadError(f"op {index}: rank {r} out of range")
        if r == 1:
            return fmt_entry(self.heap.find_min())
        sel = self.heap.select_k(r)
        less = self.counter.less
        best = sel[0]
        for e in sel[1:]:
            if less(best, e):
                best = e
        return fmt_entry(best)

    def op_querykey(self, index, key):
        raise Unsupported("fibheap engine has no key queries")

    def op_split(self, index, r):
        raise Unsupported("fibheap engine cannot split")

    def op_merge(self, index):
        raise Unsupported("fibheap engine cannot merge sorted dictionaries")

    def op_extractk(self, index, k):
        out = self.heap.extract_k_nodes(k)
        for x in out:
            del self.nodes[x.data]
        return fmt_batch(x.entry for x in out)

    def op_selectk(self, index, k):
        return fmt_batch(self.heap.select_k(k))

    def op_deletemulti(self, index, *refs):
        self.heap.delete_multi([self.nodes.pop(r) for r in refs])


class OracleEngine(Engine):
    """Sorted list of ``(key, seq)`` answering everything by brute force."""

    name = "oracle"

    def __init__(self):
        super().__init__()
        self.items = []
        self.key_of = {}

    def size(self):
        return len(self.items)

    def _add(self, key, ref):
        bisect.insort(self.items, (key, ref))
        self.key_of[ref] = key

    def _remove(self, ref):
        key = self.key_of.pop(ref)
        del self.items[bisect.bisect_left(self.items, (key, ref))]

    def _at(self, i):
        return fmt(*self.items[i]) if 0 <= i < len(self.items) else "-"

    def op_insert(self, index, key):
        self._add(key, index)

    def op_delete(self, index, ref):
        self._remove(ref)

    def op_changekey(self, index, ref, key):
        self._remove(ref)
        self._add(key, ref)

    def op_queryrank(self, index, r):
        if not 1 <= r <= len(self.items):
            raise WorkloadError(f"op {index}: rank {r} out of range")
        return self._at(r - 1)

    def op_querykey(self, index, key):
        lo = bisect.bisect_left(self.items, (key, -math.inf))
        hi = bisect.bisect_right(self.items, (key, math.inf))
        return f"{hi} {int(hi > lo)} {self._at(lo - 1)} {self._at(hi)}"

    def op_split(self, index, r):
        if not 0 <= r <= len(self.items):
            raise WorkloadError(f"op {index}: split rank {r} out of range")
        return f"{self._at(r - 1)} {self._at(r)}"

    def op_merge(self, index):
        pass

    def op_extractk(self, index, k):
        out = self.items[:k]
        del self.items[:k]
        for _, ref in out:
            del self.key_of[ref]
        return " ".join(fmt(*t) for t in out)

    def op_selectk(self, index, k):
        return " ".join(fmt(*t) for t in self.items[:k])

    def op_deletemulti(self, index, *refs):
        for ref in refs:
            self._remove(ref)


ENGINES = {"lst": LSTEngine, "fibheap": FibHeapEngine, "oracle": OracleEngine}


def make_engine(name) -> Engine:
    try:
        return ENGINES[name]()
    except KeyError:
        raise ValueError(f"unknown engine {name!r}; choose from {', '.join(ENGINES)}") from None
