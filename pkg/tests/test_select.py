import random

import pytest
from hypothesis import given, settings, strategies as st

from lazydict.order import ComparisonCounter, Entry
from lazydict.select import (
    ExplicitTree,
    degree_sum,
    k_smallest,
    nth_smallest,
    partition_k,
    select_k_of_sequence,
    soft_select,
)
from oracles import keys_of, random_heap_tree, smallest

Node = ExplicitTree.Node


def chain(keys):
    nodes = [Node(Entry(k, i)) for i, k in enumerate(keys)]
    for a, b in zip(nodes, nodes[1:]):
        a.kids.append(b)
    return ExplicitTree(nodes[0])


def complete(d, depth):
    seq = iter(range(10**6))

    def build(level, key):
        n = Node(Entry(key, next(seq)))
        if level < depth:
            n.kids = [build(level + 1, key + 1 + j) for j in range(d)]
        return n

    return ExplicitTree(build(0, 0))


def selected_keys(view, k):
    nodes, _ = soft_select(view, k)
    return keys_of(view.entry(x) for x in nodes)


def test_path_tree():
    assert selected_keys(chain([1, 2, 3]), 2) == [(1, 0), (2, 1)]


def test_k_zero_and_k_at_least_size():
    t = chain([1, 2, 3])
    assert soft_select(t, 0)[0] == []
    assert selected_keys(t, 3) == [(1, 0), (2, 1), (3, 2)]
    assert selected_keys(t, 10) == [(1, 0), (2, 1), (3, 2)]


def test_random_tree_200_nodes_k25():
    t = random_heap_tree(random.Random(200), 200)
    want = keys_of(smallest([x.entry for x in t.nodes()], 25))
    assert selected_keys(t, 25) == want


def test_complete_4ary_degree_sum():
    t = complete(4, 4)
    size = len(t.nodes())
    for k in range(1, size + 1):
        nodes, stats = soft_select(t, k)
        assert keys_of(x.entry for x in nodes) == keys_of(smallest([x.entry for x in t.nodes()], k))
        assert stats.degree_sum <= 12 * k


def test_depth_degree_path_sum():
    # nodes at depth i have i + 2 children
    seq = iter(range(10**6))

    def build(depth, limit):
        n = Node(Entry(depth, next(seq)))
        if depth < limit:
            n.kids = [build(depth + 1, limit) for _ in range(depth + 2)]
        return n

    t = ExplicitTree(build(0, 5))
    x = t.root
    path = []
    for _ in range(5):
        path.append(x)
        x = x.kids[0]
    for k in range(1, 6):
        assert degree_sum(t, path[:k]) == k * (k + 3) // 2


def test_purity():
    t = random_heap_tree(random.Random(11), 300)
    h = t.structure_hash()
    a = selected_keys(t, 40)
    b = selected_keys(t, 40)
    assert a == b and t.structure_hash() == h


def test_root_entry_is_never_compared():
    t = random_heap_tree(random.Random(5), 100)
    t.root.entry = None  # any comparison against it would fail
    nodes, _ = soft_select(ExplicitTree(t.root), 10, counter=ComparisonCounter(),
                           less=lambda a, b: a.sort_key() < b.sort_key())
    assert t.root in nodes and len(nodes) == 10


def test_sequence_examples():
    seq = [Entry(k, i) for i, k in enumerate([9, 1, 5, 3])]
    assert keys_of(select_k_of_sequence(seq, 2)) == [(1, 1), (3, 3)]
    assert keys_of(select_k_of_sequence(seq, 4)) == keys_of(seq)
    assert select_k_of_sequence(seq, 0) == []


def test_sequence_selection_is_linear():
    rng = random.Random(1)
    es = [Entry(rng.random(), i) for i in range(20000)]
    c = ComparisonCounter()
    nth_smallest(es, 10000, c.less)
    assert c.count <= 12 * len(es)


def test_adversarial_input_falls_back_to_median_of_medians():
    # sorted input makes sampled pivots no worse; still linear
    es = [Entry(i, i) for i in range(5000)]
    c = ComparisonCounter()
    assert nth_smallest(es, 4999, c.less) is es[-1]
    assert c.count <= 12 * len(es)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-20, 20), max_size=80), st.data())
def test_partition_k_matches_sort(keys, data):
    es = [Entry(k, i) for i, k in enumerate(keys)]
    k = data.draw(st.integers(0, len(es)))
    c = ComparisonCounter()
    lo, hi, lmax, hmin = partition_k(es, k, c.less)
    ordered = smallest(es, len(es))
    assert keys_of(lo) == keys_of(ordered[:k])
    assert keys_of(hi) == keys_of(ordered[k:])
    if lmax is not None:
        assert lmax is ordered[k - 1]
    if hmin is not None:
        assert hmin is ordered[k]
    if 0 < k < len(es):
        assert lmax is not None or hmin is not None
    assert keys_of(k_smallest(es, k, c.less)) == keys_of(ordered[:k])


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 300), st.integers(0, 10**6), st.data())
def test_soft_select_matches_flatten_and_sort(size, seed, data):
    t = random_heap_tree(random.Random(seed), size)
    k = data.draw(st.integers(0, size))
    nodes, stats = soft_select(t, k)
    assert keys_of(x.entry for x in nodes) == keys_of(smallest([x.entry for x in t.nodes()], k))
    assert stats.expanded_nodes <= 3 * k


@pytest.mark.parametrize("eps", ["1/6", "1/12"])
def test_other_epsilon_still_exact(eps):
    from fractions import Fraction

    t = random_heap_tree(random.Random(9), 400)
    for k in (1, 7, 50, 399):
        nodes, _ = soft_select(t, k, epsilon=Fraction(eps))
        assert keys_of(x.entry for x in nodes) == keys_of(smallest([x.entry for x in t.nodes()], k))
