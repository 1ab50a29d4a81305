"""Pinned scaling measurements shared by ``calibrate`` and the acceptance suite."""

from __future__ import annotations

import json
import math
import random
from importlib import resources
from pathlib import Path

from ..fibheap import FibHeap
from ..lst import LazySearchTree
from ..order import Entry
from .runner import run
from .workload import generate

BASELINE_NAME = "baseline.json"
SLACK = 1.5

EXTRACT_N = 1 << 16
EXTRACT_KS = (1, 1 << 4, 1 << 8, 1 << 12)
B_BOUND_N = 100_000
B_BOUND_QS = (1, 10, 316)
MULTI_N = 1 << 14
MULTI_K = 1 << 6


def _random_heap(n, seed):
    rng = random.Random(seed)
    h = FibHeap()
    for i in range(n):
        h.insert(Entry(rng.random(), i))
    return h, rng


def select_degree_ratio(n, k, seed=0):
    """``degree_sum / (t + k log2(n/k))`` for one select_k on a consolidated
    heap that has also seen some decrease-keys."""
    h, rng = _random_heap(n, seed)
    nodes = h.nodes()
    h.extract_min()
    for x in rng.sample(nodes, n // 16):
        if x.alive:
            h.decrease_key(x, x.entry.key / 2)
    t = h.root_count
    h.select_k(k)
    d = h.last_select_stats.degree_sum
    return d / (t + k * math.log2(h.n / k))


def extract_all_ratio(n, k, seed=0):
    """Comparisons for n inserts then extract_k(k) until empty, over n log2(n/k)."""
    h, _ = _random_heap(n, seed)
    while h.n:
        h.extract_k(k)
    return h.counter.count / (n * math.log2(n / k))


def b_bound_ratio(n, q, seed=0):
    """Comparisons for n inserts then q distinct rank queries, over B + n."""
    rng = random.Random(seed * 7919 + q)
    t = LazySearchTree()
    for _ in range(n):
        t.insert(rng.randrange(1 << 40))
    for r in rng.sample(range(1, n + 1), q):
        t.query_rank(r)
    return t.counter.count / (t.b_exact() + n)


def multi_select_ratio(n=MULTI_N, k=MULTI_K, seed=0):
    """fibheap engine on the multi-select workload, over n log2(n/k)."""
    rep = run(generate("multi-select", n, k=k, seed=seed), "fibheap")
    return rep.total / (n * math.log2(n / k))


def calibrate(progress=None) -> dict:
    say = progress or (lambda msg: None)
    out = {"extract_all": {}, "b_bound": {}, "multi_select_fibheap": None}
    for k in EXTRACT_KS:
        out["extract_all"][str(k)] = round(extract_all_ratio(EXTRACT_N, k), 4)
        say(f"extract_all k={k}: {out['extract_all'][str(k)]}")
    for q in B_BOUND_QS:
        out["b_bound"][str(q)] = round(b_bound_ratio(B_BOUND_N, q), 4)
        say(f"b_bound q={q}: {out['b_bound'][str(q)]}")
    out["multi_select_fibheap"] = round(multi_select_ratio(), 4)
    say(f"multi_select_fibheap: {out['multi_select_fibheap']}")
    return out


def default_baseline_path() -> Path:
    return Path(str(resources.files("lazydict.bench").joinpath(BASELINE_NAME)))


def load_baseline(path=None) -> dict:
    path = Path(path) if path else default_baseline_path()
    with open(path) as f:
        return json.load(f)


def save_baseline(data, path=None) -> Path:
    path = Path(path) if path else default_baseline_path()
    with open(path, "w") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
    return path
