"""Replay a workload on an engine, recording per-op comparison counts."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field

from .engines import Engine, make_engine

COLUMNS = ["op_index", "op", "comparisons", "cum_comparisons", "n", "gaps", "B"]


@dataclass
class Report:
    engine: str
    rows: list = field(default_factory=list)
    answers: list = field(default_factory=list)  # (op_index, text)
    total: int = 0
    wall: float = 0.0
    final_b: float | str = ""
    final_n: int = 0

    def write_csv(self, stream):
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(COLUMNS)
        w.writerows(self.rows)

    def summary(self) -> str:
        parts = [f"engine={self.engine}", f"ops={len(self.rows)}",
                 f"comparisons={self.total}", f"n={self.final_n}"]
        if self.final_b != "":
            b = self.final_b
            parts.append(f"B={b:.1f}")
            parts.append(f"per_B_plus_n={self.total / (b + self.final_n or 1):.3f}")
        parts.append(f"wall={self.wall:.2f}s")
        return " ".join(parts)


def _b_cell(b):
    return "" if b == "" else f"{b:.3f}"


def run(workload, engine: Engine | str, validate_every=0, on_op=None) -> Report:
    """Execute every op; ``validate_every`` > 0 audits the engine periodically.

    ``on_op(index, answer)`` may rewrite the answer (used for fault injection).
    """
    if isinstance(engine, str):
        engine = make_engine(engine)
    rep = Report(engine.name)
    counter = engine.counter
    cum = 0
    t0 = time.perf_counter()
    for i, (op, args) in enumerate(workload.ops):
        before = counter.count
        ans = engine.apply(i, op, args)
        if on_op is not None:
            ans = on_op(i, ans)
        cost = counter.count - before
        cum += cost
        if ans is not None:
            rep.answers.append((i, ans))
        rep.rows.append([i, op, cost, cum, engine.size(), engine.gaps(),
                         _b_cell(engine.b_value())])
        if validate_every and (i + 1) % validate_every == 0:
            bad = engine.validate()
            if bad:
                raise ValidationFailure(i, bad)
    rep.wall = time.perf_counter() - t0
    rep.total = cum
    rep.final_n = engine.size()
    rep.final_b = engine.b_value()
    if validate_every:
        bad = engine.validate()
        if bad:
            raise ValidationFailure(len(workload.ops) - 1, bad)
    return rep


class ValidationFailure(Exception):
    def __init__(self, index, violations):
        super().__init__(f"op {index}: {violations[0]} ({len(violations)} violation(s))")
        self.index = index
        self.violations = violations


@dataclass
class Verdict:
    ok: bool
    index: int | None = None
    message: str = ""


def verify(workload, fault=None, validate_every=256) -> Verdict:
    """Diff lst answers against the oracle engine; audit lst periodically.

    ``fault`` is an op index whose lst answer is deliberately corrupted, to
    check that the harness notices.
    """
    def inject(i, ans):
        if i == fault:
            return "<injected fault>" if ans is None else ans + " <injected fault>"
        return ans

    try:
        got = run(workload, "lst", validate_every=validate_every, on_op=inject)
    except ValidationFailure as exc:
        return Verdict(False, exc.index, f"validate failed at op {exc.index}: "
                       + "; ".join(exc.violations[:5]))
    want = run(workload, "oracle")
    a = dict(got.answers)
    b = dict(want.answers)
    for i in sorted(set(a) | set(b)):
        if a.get(i) != b.get(i):
            op, args = workload.ops[i]
            call = " ".join([op, *map(str, args)])
            return Verdict(False, i, f"mismatch at op {i} ({call}):\n"
                           f"  lst:    {a.get(i)}\n  oracle: {b.get(i)}")
    return Verdict(True)
