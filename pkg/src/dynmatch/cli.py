"""Command line front end.

Subcommands:

* ``run``      -- drive one stream through an algorithm, optionally verified
* ``verify``   -- ``run`` with verification forced and no CSV output
* ``gen``      -- write a seeded workload stream
* ``scaling``  -- doubling-series comparison of the two algorithms

Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import bench
from .bench import LOOKAHEAD, RECOMPUTE, VerificationError
from .matcher import DEFAULT_THRESHOLD
from .stream import StreamParseError, WorkloadConfig, generate, parse_stream, serialize_stream

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the documented code is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dynmatch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a stream through one algorithm")
    _add_run_args(run)
    run.add_argument("--verify", action="store_true", help="check validity and maximality after every update")
    run.add_argument("--csv", metavar="PATH", help="append the bench record to this CSV file instead of stdout")
    run.set_defaults(fn=_cmd_run, force_verify=False)

    ver = sub.add_parser("verify", help="run with verification forced, no CSV")
    _add_run_args(ver)
    ver.set_defaults(fn=_cmd_run, force_verify=True, verify=True, csv=None)

    gen = sub.add_parser("gen", help="generate a seeded workload stream")
    gen.add_argument("--n", type=int, required=True, help="vertex count")
    gen.add_argument("--updates", type=int, required=True, help="number of update events")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--p-delete", type=float, default=0.0, help="probability an update deletes a present edge")
    gen.add_argument("--query-rate", type=float, default=0.0, help="expected queries per update")
    gen.add_argument("--allow-noop", action="store_true", help="inject idempotent no-op updates")
    gen.add_argument("--no-header", action="store_true", help="omit the 'n' header (sparse stream)")
    gen.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    gen.set_defaults(fn=_cmd_gen)

    sca = sub.add_parser("scaling", help="doubling-series amortized-cost comparison")
    sca.add_argument("--sizes", type=int, nargs="+", default=[2**k for k in range(10, 17)],
                     help="stream sizes (updates = m_max per stream)")
    sca.add_argument("--modes", nargs="+", choices=[LOOKAHEAD, RECOMPUTE], default=[LOOKAHEAD, RECOMPUTE])
    sca.add_argument("--indicator", choices=["matrix", "set"], default="matrix")
    sca.add_argument("--mate", choices=["dense", "map"], default="dense")
    sca.add_argument("--threshold", type=int, default=DEFAULT_THRESHOLD)
    sca.add_argument("--seed", type=int, default=1)
    sca.add_argument("--recompute-cap", type=int, default=None,
                     help="skip the recompute baseline above this size")
    sca.add_argument("--csv", metavar="PATH", help="append records to this CSV file instead of stdout")
    sca.set_defaults(fn=_cmd_scaling)

    return parser


def _add_run_args(p) -> None:
    p.add_argument("--stream", required=True, metavar="PATH", help="stream file ('-' for stdin)")
    p.add_argument("--mode", choices=[LOOKAHEAD, RECOMPUTE], default=LOOKAHEAD)
    p.add_argument("--indicator", choices=["matrix", "set"], default=None,
                   help="default: matrix when the stream declares n, else set")
    p.add_argument("--mate", choices=["dense", "map"], default=None,
                   help="default: dense when the stream declares n, else map")
    p.add_argument("--threshold", type=int, default=DEFAULT_THRESHOLD)
    p.add_argument("--phase-override", type=int, default=None, help="pin the batch length (replay knob)")
    p.add_argument("--echo-queries", action="store_true", help="print query answers to stdout")
    p.add_argument("--dump-state", action="store_true", help="print the final graph and matching")


def _read_stream(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit_csv(rows: list[str], csv_path: str | None) -> None:
    if csv_path is None:
        print(bench.CSV_FIELDS)
        for row in rows:
            print(row)
        return
    need_header = not os.path.exists(csv_path) or os.path.getsize(csv_path) == 0
    with open(csv_path, "a", encoding="utf-8") as fh:
        if need_header:
            fh.write(bench.CSV_FIELDS + "\n")
        for row in rows:
            fh.write(row + "\n")


def _cmd_run(args) -> int:
    text = _read_stream(args.stream)
    header_n, events = parse_stream(text)

    indicator = args.indicator or ("matrix" if header_n is not None else "set")
    mate = args.mate or ("dense" if header_n is not None else "map")
    if header_n is None and (indicator == "matrix" or mate == "dense"):
        print("dynmatch: error: matrix/dense strategies need a stream with an 'n' header",
              file=sys.stderr)
        return EXIT_USAGE

    stream_id = "<stdin>" if args.stream == "-" else os.path.basename(args.stream)
    result = bench.run_stream(
        events,
        header_n=header_n,
        mode=args.mode,
        indicator=indicator,
        mate=mate,
        threshold=args.threshold,
        phase_override=args.phase_override,
        verify=args.verify,
        stream_id=stream_id,
    )

    if args.echo_queries:
        for _, u, ans in result.answers:
            print(f"mate({u}) = {'null' if ans is None else ans}")
    if args.dump_state:
        for e in sorted(result.driver.snapshot_graph()):
            print(f"G {e[0]} {e[1]}")
        for e in sorted(result.driver.snapshot_matching()):
            print(f"M {e[0]} {e[1]}")
    if not args.force_verify:
        _emit_csv([result.record.csv_row()], args.csv)
    else:
        print(f"verified {result.record.updates} updates, m_max={result.record.m_max}")
    return EXIT_OK


def _cmd_gen(args) -> int:
    cfg = WorkloadConfig(
        n=args.n,
        updates=args.updates,
        seed=args.seed,
        p_delete=args.p_delete,
        query_rate=args.query_rate,
        allow_noop=args.allow_noop,
    )
    try:
        events = generate(cfg)
    except ValueError as exc:
        print(f"dynmatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = serialize_stream(None if args.no_header else args.n, events)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_scaling(args) -> int:
    records = bench.run_scaling(
        args.sizes,
        modes=tuple(args.modes),
        indicator=args.indicator,
        mate=args.mate,
        threshold=args.threshold,
        seed=args.seed,
        recompute_cap=args.recompute_cap,
    )
    _emit_csv([r.csv_row() for r in records], args.csv)
    for mode in args.modes:
        sub = [r for r in records if r.algorithm == mode]
        if len(sub) < 2:
            continue
        print(f"# {mode}: amortized counter work per update", file=sys.stderr)
        for r in sorted(sub, key=lambda r: r.m_max):
            print(f"#   m_max={r.m_max:>8}  work/update={r.work_per_update():.1f}", file=sys.stderr)
        for m_max, ratio in bench.doubling_ratios(sub):
            print(f"#   doubling to {m_max}: ratio {ratio:.3f}", file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except StreamParseError as exc:
        print(f"dynmatch: parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"dynmatch: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except VerificationError as exc:
        print(f"dynmatch: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    raise SystemExit(main())
