"""Entries and the instrumented comparator shared by every structure."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any


class Ordering(enum.IntEnum):
    LESS = -1
    GREATER = 1


@dataclass(eq=False, slots=True)
class Entry:
    """An element: user key, insertion counter used as tie-break, and payload.

    The effective order is ``(key, seq)``, which is strict as long as ``seq``
    values are unique within one structure.
    """

    key: Any
    seq: int
    payload: Any = None

    def frozen(self) -> "Entry":
        # separators must not follow later change-key calls on the original
        return Entry(self.key, self.seq)

    def sort_key(self):
        return (self.key, self.seq)


class ComparisonCounter:
    """Tally of key comparisons.

    Every comparison made by the library goes through one of the methods
    below, each of which counts exactly once.
    """

    __slots__ = ("count",)

    def __init__(self, count: int = 0):
        self.count = count

    def less(self, a: Entry, b: Entry) -> bool:
        self.count += 1
        ka = a.key
        kb = b.key
        if ka < kb:
            return True
        if kb < ka:
            return False
        return a.seq < b.seq

    def key_le(self, e: Entry, key) -> bool:
        """``e.key <= key``."""
        self.count += 1
        return not (key < e.key)

    def key_lt(self, e: Entry, key) -> bool:
        """``e.key < key``."""
        self.count += 1
        return e.key < key

    def snapshot_and_reset(self) -> int:
        n = self.count
        self.count = 0
        return n

    def __repr__(self):
        return f"ComparisonCounter({self.count})"


def compare(a: Entry, b: Entry, counter: ComparisonCounter) -> Ordering:
    return Ordering.LESS if counter.less(a, b) else Ordering.GREATER


def snapshot_and_reset(counter: ComparisonCounter) -> int:
    return counter.snapshot_and_reset()
