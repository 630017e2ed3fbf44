"""Command-line entry point: ``pq run|fuzz|bench|sort``."""
from __future__ import annotations

import argparse
import sys

from . import harness
from .core import CorruptionError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _write_report(path, lines):
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_run(args):
    with open(args.trace, encoding="utf-8") as fh:
        ops = harness.parse_trace(fh.read())
    out, report = harness.replay(args.impl, ops, harness.profile_named(args.profile))
    for x in out:
        print(x)
    if args.report:
        _write_report(args.report, [report.to_json()])
    if args.verify:
        want, _ = harness.replay("binary", ops)
        if want != out:
            print("mismatch against the binary-heap oracle", file=sys.stderr)
            return EXIT_FAIL
    return EXIT_OK


def cmd_fuzz(args):
    res = harness.fuzz(
        args.impl, args.ops, args.seed, alphabet=args.alphabet,
        profile=harness.profile_named(args.profile),
        check_every=args.check_every, lockstep=args.lockstep,
    )
    print(res.summary())
    if not res.passed:
        if args.dump:
            with open(args.dump, "w", encoding="utf-8") as fh:
                fh.write(f"# seed {res.seed}: {res.message}\n")
                fh.write(harness.format_trace(res.trace))
        else:
            sys.stdout.write(harness.format_trace(res.trace))
        return EXIT_FAIL
    return EXIT_OK


def cmd_bench(args):
    sizes = harness.parse_sizes(args.sizes)
    profile = harness.profile_named(args.profile)
    lines = [
        harness.bench_one(args.impl, n, args.mix, args.seed, profile).to_json()
        for n in sizes
    ]
    _write_report(args.report, lines)
    return EXIT_OK


def cmd_sort(args):
    ok, report = harness.sort_demo(args.n, args.seed)
    _write_report(args.report, [report.to_json()])
    if not ok:
        print("output was not sorted", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="pq", description="Strictly implicit priority queues.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--impl", required=True, choices=harness.IMPLS)
        sp.add_argument("--profile", default="production", choices=sorted(harness.PROFILES),
                        help="geometry profile for amortized/identical")

    run = sub.add_parser("run", help="replay a trace file")
    common(run)
    run.add_argument("--trace", required=True)
    run.add_argument("--report")
    run.add_argument("--verify", action="store_true",
                     help="also compare outputs against the oracle")
    run.set_defaults(func=cmd_run)

    fz = sub.add_parser("fuzz", help="random trace against the oracle")
    common(fz)
    fz.add_argument("--ops", type=int, required=True)
    fz.add_argument("--seed", type=int, required=True)
    fz.add_argument("--alphabet", type=int, help="draw keys from 0..K-1 (identical only)")
    fz.add_argument("--check-every", type=int, default=None,
                    help="invariant check stride (default: $PQ_CHECK_EVERY or 1024)")
    fz.add_argument("--lockstep", type=int, default=10_000,
                    help="ops each rebuilt twin runs beside the original (0 disables)")
    fz.add_argument("--dump", help="write the minimized counterexample here")
    fz.set_defaults(func=cmd_fuzz)

    bn = sub.add_parser("bench", help="counter benchmark, one JSON line per size")
    common(bn)
    bn.add_argument("--sizes", required=True, help="e.g. 2^16,2^20")
    bn.add_argument("--mix", required=True, choices=sorted(harness.MIXES))
    bn.add_argument("--seed", type=int, default=0)
    bn.add_argument("--report", default="-")
    bn.set_defaults(func=cmd_bench)

    so = sub.add_parser("sort", help="sort random keys through the amortized queue")
    so.add_argument("--n", type=int, required=True)
    so.add_argument("--seed", type=int, default=0)
    so.add_argument("--report", default="-")
    so.set_defaults(func=cmd_sort)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (harness.TraceError, ValueError, OSError) as exc:
        print(f"pq: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorruptionError, AssertionError) as exc:
        print(f"pq: invariant failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
