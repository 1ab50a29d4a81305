"""Brute-force references the tests compare against."""

import bisect
import random

from lazydict.order import Entry
from lazydict.select import ExplicitTree


def sk(e):
    return e.sort_key()


def keys_of(entries):
    return sorted(sk(e) for e in entries)


def smallest(entries, k):
    return sorted(entries, key=sk)[:k]


class SortedMultiset:
    """Sorted list of (key, seq) pairs."""

    def __init__(self):
        self.items = []

    def add(self, key, seq):
        bisect.insort(self.items, (key, seq))

    def remove(self, key, seq):
        i = bisect.bisect_left(self.items, (key, seq))
        assert self.items[i] == (key, seq)
        del self.items[i]

    def rank_of_key(self, key):
        return bisect.bisect_right(self.items, (key, float("inf")))

    def below(self, key):
        i = bisect.bisect_left(self.items, (key, float("-inf")))
        return self.items[i - 1] if i else None

    def above(self, key):
        i = bisect.bisect_right(self.items, (key, float("inf")))
        return self.items[i] if i < len(self.items) else None

    def __len__(self):
        return len(self.items)


def random_heap_tree(rng, size, max_degree=6, key_space=None):
    """Random heap-ordered tree: each node gets a key no smaller than its parent's."""
    key_space = key_space or 4 * size
    seq = iter(range(size))
    root = ExplicitTree.Node(Entry(rng.randrange(key_space // 4 + 1), next(seq)))
    frontier = [root]
    made = 1
    while made < size:
        parent = rng.choice(frontier)
        if len(parent.kids) >= max_degree:
            frontier.remove(parent)
            continue
        child = ExplicitTree.Node(
            Entry(parent.entry.key + rng.randrange(key_space // size + 2), next(seq))
        )
        parent.kids.append(child)
        frontier.append(child)
        made += 1
    return ExplicitTree(root)


def seeded(seed):
    return random.Random(seed)
