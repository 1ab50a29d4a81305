"""Workload files: one operation per line, ``OP arg ...``.

Lines starting with ``#`` are comments. A ref names an element by the index
of the INSERT op that created it (0-based over op lines); that index is
also the element's sequence number, so ties between equal keys break the
same way in every engine.
"""

from __future__ import annotations

import bisect
import heapq
import random
from dataclasses import dataclass, field

KINDS = ("uniform-pq", "range-cluster", "mixed-dict", "multi-select")

# op name -> argument arity (None = variable)
ARITY = {
    "INSERT": 1,
    "DELETE": 1,
    "CHANGEKEY": 2,
    "QUERYRANK": 1,
    "QUERYKEY": 1,
    "SPLIT": 1,
    "MERGE": 0,
    "EXTRACTK": 1,
    "SELECTK": 1,
    "DELETEMULTI": None,
}


class WorkloadError(ValueError):
    pass


@dataclass
class Workload:
    ops: list = field(default_factory=list)
    header: dict = field(default_factory=dict)

    def add(self, op, *args):
        self.ops.append((op, tuple(args)))
        return len(self.ops) - 1

    def dumps(self) -> str:
        lines = []
        if self.header:
            lines.append("# " + " ".join(f"{k}={v}" for k, v in self.header.items()))
        for op, args in self.ops:
            lines.append(" ".join([op, *map(str, args)]))
        return "\n".join(lines) + "\n"


def parse(text: str) -> Workload:
    w = Workload()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if not w.ops and not w.header:
                for tok in line[1:].split():
                    if "=" in tok:
                        k, v = tok.split("=", 1)
                        w.header[k] = v
            continue
        parts = line.split()
        op = parts[0].upper()
        if op not in ARITY:
            raise WorkloadError(f"line {lineno}: unknown op {parts[0]!r}")
        want = ARITY[op]
        if want is not None and len(parts) - 1 != want:
            raise WorkloadError(
                f"line {lineno}: {op} takes {want} argument(s), got {len(parts) - 1}"
            )
        try:
            args = tuple(int(a) for a in parts[1:])
        except ValueError:
            raise WorkloadError(f"line {lineno}: arguments must be integers") from None
        w.ops.append((op, args))
    check_refs(w)
    return w


def check_refs(w: Workload):
    """Every ref must name an earlier INSERT that is still live."""
    live = set()
    for i, (op, args) in enumerate(w.ops):
        if op == "INSERT":
            live.add(i)
        elif op in ("DELETE", "CHANGEKEY"):
            if args[0] not in live:
                raise WorkloadError(f"op {i}: ref {args[0]} is not a live element")
            if op == "DELETE":
                live.discard(args[0])
        elif op == "DELETEMULTI":
            if len(set(args)) != len(args) or not set(args) <= live:
                raise WorkloadError(f"op {i}: DELETEMULTI refs must be live and distinct")
            live -= set(args)
    # refs removed by EXTRACTK depend on keys and surface at replay time
    return True


def load(path) -> Workload:
    with open(path) as f:
        return parse(f.read())


# -- generators -----------------------------------------------------------------

class _Live:
    """Sorted multiset of (key, ref) used to keep generated refs valid."""

    def __init__(self):
        self.items = []

    def add(self, key, ref):
        bisect.insort(self.items, (key, ref))

    def remove(self, key, ref):
        i = bisect.bisect_left(self.items, (key, ref))
        del self.items[i]

    def __len__(self):
        return len(self.items)


def gen_uniform_pq(n, rng):
    """n inserts with extract-min steps (rank-1 query, then delete it) mixed in."""
    w = Workload()
    heap = []
    pending = n
    for _ in range(n):
        key = rng.randrange(1 << 31)
        ref = w.add("INSERT", key)
        heapq.heappush(heap, (key, ref))
        if rng.random() < 0.5:
            w.add("QUERYRANK", 1)
            w.add("DELETE", heapq.heappop(heap)[1])
            pending -= 1
    for _ in range(pending):
        w.add("QUERYRANK", 1)
        w.add("DELETE", heapq.heappop(heap)[1])
    return w


def gen_range_cluster(n, q, k, rng):
    """n uniform inserts with q key queries over k consecutive keys mixed in."""
    w = Workload()
    space = 10 * n
    lo = rng.randrange(max(space - k, 1))
    slots = sorted(rng.sample(range(n + q), q)) if q else []
    qi = 0
    for step in range(n + q):
        if qi < len(slots) and slots[qi] == step:
            w.add("QUERYKEY", lo + qi % max(k, 1))
            qi += 1
        else:
            w.add("INSERT", rng.randrange(space))
    return w


def gen_mixed_dict(n, q, rng):
    """n inserts mixed with q dictionary operations of every kind."""
    w = Workload()
    live = _Live()
    space = max(n, 2)
    inserts = 0
    others = 0
    kinds = ["DELETE", "CHANGEKEY", "QUERYRANK", "QUERYKEY", "SPLIT", "SELECTK",
             "EXTRACTK", "DELETEMULTI"]
    weights = [18, 14, 22, 22, 8, 6, 4, 6]
    while inserts < n or others < q:
        if others >= q or (inserts < n and rng.random() < n / (n + q)) or not len(live):
            # also taken past n inserts when the tree has drained
            key = rng.randrange(space)
            ref = w.add("INSERT", key)
            live.add(key, ref)
            inserts += 1
            continue
        others += 1
        op = rng.choices(kinds, weights)[0]
        size = len(live)
        if op == "DELETE":
            key, ref = live.items[rng.randrange(size)]
            w.add("DELETE", ref)
            live.remove(key, ref)
        elif op == "CHANGEKEY":
            key, ref = live.items[rng.randrange(size)]
            if rng.random() < 0.6:
                # small nudge, usually stays inside its gap
                new = max(0, key + rng.randint(-3, 3))
            else:
                new = rng.randrange(space)
            w.add("CHANGEKEY", ref, new)
            live.remove(key, ref)
            live.add(new, ref)
        elif op == "QUERYRANK":
            w.add("QUERYRANK", rng.randint(1, size))
        elif op == "QUERYKEY":
            w.add("QUERYKEY", rng.randint(-1, space))
        elif op == "SPLIT":
            w.add("SPLIT", rng.randint(0, size))
            w.add("MERGE")
        elif op == "SELECTK":
            w.add("SELECTK", rng.randint(1, size))
        elif op == "EXTRACTK":
            k = rng.randint(1, max(1, size // 8))
            w.add("EXTRACTK", k)
            del live.items[:k]
        else:
            m = rng.randint(1, min(size, 8))
            picked = rng.sample(live.items, m)
            w.add("DELETEMULTI", *[ref for _, ref in picked])
            for key, ref in picked:
                live.remove(key, ref)
    return w


def gen_multi_select(n, k, rng):
    """n inserts then repeated EXTRACTK(k) until empty."""
    w = Workload()
    for _ in range(n):
        w.add("INSERT", rng.randrange(1 << 31))
    for _ in range(-(-n // k)):
        w.add("EXTRACTK", k)
    return w


def generate(kind, n, q=None, k=None, seed=0) -> Workload:
    if kind not in KINDS:
        raise WorkloadError(f"unknown workload kind {kind!r}; choose from {', '.join(KINDS)}")
    if n <= 0 or (q is not None and q < 0) or (k is not None and k <= 0):
        raise WorkloadError("n and k must be positive and q non-negative")
    rng = random.Random(seed)
    q = n if q is None else q
    k = 64 if k is None else k
    if kind == "uniform-pq":
        w = gen_uniform_pq(n, rng)
    elif kind == "range-cluster":
        w = gen_range_cluster(n, q, k, rng)
    elif kind == "mixed-dict":
        w = gen_mixed_dict(n, q, rng)
    else:
        w = gen_multi_select(n, k, rng)
    w.header = {"kind": kind, "n": n, "q": q, "k": k, "seed": seed}
    return w
