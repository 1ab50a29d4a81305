"""Command-line harness: ``lazydict-bench {gen,run,verify,calibrate}``.

Exit codes: 0 ok, 1 answer mismatch or audit failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .engines import ENGINES, Unsupported
from .measure import calibrate, save_baseline
from .runner import ValidationFailure, run, verify
from .workload import KINDS, WorkloadError, generate, load

log = logging.getLogger("lazydict.bench")

OK, MISMATCH, USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("LAZYDICT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise WorkloadError(f"LAZYDICT_SEED must be an integer, got {env!r}") from None


def _open_out(path):
    return open(path, "w") if path and path != "-" else sys.stdout


def cmd_gen(args):
    w = generate(args.kind, args.n, q=args.q, k=args.k, seed=_seed(args))
    out = _open_out(args.out)
    try:
        out.write(w.dumps())
    finally:
        if out is not sys.stdout:
            out.close()
    return OK


def cmd_run(args):
    w = load(args.workload)
    try:
        rep = run(w, args.engine, validate_every=args.validate_every)
    except Unsupported as exc:
        log.error("%s", exc)
        return USAGE
    except ValidationFailure as exc:
        log.error("%s", exc)
        return MISMATCH
    out = _open_out(args.out)
    try:
        rep.write_csv(out)
    finally:
        if out is not sys.stdout:
            out.close()
    if args.answers:
        with open(args.answers, "w") as f:
            for i, a in rep.answers:
                f.write(f"{i}\t{a}\n")
    log.info("%s", rep.summary())
    return OK


def cmd_verify(args):
    w = load(args.workload)
    verdict = verify(w, fault=args.inject_fault, validate_every=args.validate_every)
    if verdict.ok:
        log.info("ok: %d ops agree with the oracle", len(w.ops))
        return OK
    log.error("FAIL at op %s: %s", verdict.index, verdict.message)
    return MISMATCH


def cmd_calibrate(args):
    data = calibrate(progress=lambda m: log.info("%s", m))
    path = save_baseline(data, args.out)
    log.info("baseline written to %s", path)
    return OK


def build_parser():
    p = _Parser(prog="lazydict-bench", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a workload file")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("-n", type=int, default=1000, help="number of inserts")
    g.add_argument("-q", type=int, default=None, help="number of queries (default n)")
    g.add_argument("-k", type=int, default=64, help="batch or window size")
    g.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default $LAZYDICT_SEED, else 0)")
    g.add_argument("--out", default=None, help="output file (default stdout)")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="replay a workload, CSV to stdout")
    r.add_argument("workload")
    r.add_argument("--engine", choices=sorted(ENGINES), default="lst")
    r.add_argument("--out", default=None, help="CSV file (default stdout)")
    r.add_argument("--answers", default=None, help="write query answers here")
    r.add_argument("--validate-every", type=int, default=0, metavar="OPS")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="diff lst against the oracle engine")
    v.add_argument("workload")
    v.add_argument("--validate-every", type=int, default=256, metavar="OPS")
    v.add_argument("--inject-fault", type=int, default=None, metavar="OP",
                   help="corrupt the answer of this op (harness self-test)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("calibrate", help="measure bound constants into a baseline")
    c.add_argument("--out", default=None, help="baseline JSON (default: packaged)")
    c.set_defaults(func=cmd_calibrate)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return OK
    except (WorkloadError, ValueError, OSError) as exc:
        log.error("error: %s", exc)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
