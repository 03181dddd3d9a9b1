"""Command-line entry point.

Exit status: 0 success, 1 verification failure, 2 usage, input or capacity error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager
from datetime import datetime, timezone
from math import comb

from . import bounds, census, verify
from .encoder import UnsupportedMatroid, decode, encode
from .formats import (
    RecordError,
    format_encoding,
    format_matroid,
    header,
    read_encodings,
    read_matroids,
)
from .johnson import elements_of, iter_bits, johnson
from .matroid import bits_to_hex

HEX_HELP = """\
Matroid records are 'n=<int> r=<int> bases=<hex>'.  Bit i is the r-set with
colex id i (colex order for r=2: 12,13,23,14,24,34,...).  Bits are packed
least-significant-bit first into bytes, bytes written in increasing order as
lowercase hex.  Example: 'n=4 r=2 bases=3e' has bits 1..5 set and bit 0 clear,
so {1,2} is the only non-basis.
"""


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """'5' or '4..16' (inclusive)."""
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use N or A..B") from None
    if a < 0 or b < a:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return list(range(a, b + 1))


def seed_type(text: str) -> int:
    s = int(text, 0)
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return s


def _pairs(ns: list[int], rs: list[int] | None, proper: bool = False) -> list[tuple[int, int]]:
    out = []
    for n in ns:
        for r in (rs if rs is not None else range(n + 1)):
            if r > n or (proper and not 0 < r < n):
                continue
            out.append((n, r))
    if not out:
        raise UsageError("the n/r ranges select nothing")
    return out


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        try:
            fh = open(path, "w", encoding="utf-8", newline="")
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc.strerror}") from None
        with fh:
            yield fh


def _read_lines(path: str) -> list[str]:
    try:
        if path == "-":
            return sys.stdin.readlines()
        with open(path, encoding="utf-8") as fh:
            return fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _header_lines(args, **fields) -> str:
    text = header(command=args.command, **fields, seed=args.seed) + "\n"
    if args.timestamp:
        stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        text += f"# timestamp={stamp}\n"
    return text


def _span(values) -> str:
    values = sorted(set(values))
    return str(values[0]) if len(values) == 1 else f"{values[0]}..{values[-1]}"


def _emit_table(fh, columns, rows, fmt: str) -> None:
    if fmt == "csv":
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
    elif fmt == "jsonl":
        for row in rows:
            fh.write(json.dumps(dict(zip(columns, row))) + "\n")
    else:
        widths = [max(len(str(c)), *(len(str(r[i])) for r in rows)) if rows else len(c)
                  for i, c in enumerate(columns)]
        fh.write("  ".join(c.rjust(w) for c, w in zip(columns, widths)) + "\n")
        for row in rows:
            fh.write("  ".join(str(v).rjust(w) for v, w in zip(row, widths)) + "\n")


# -- commands -----------------------------------------------------------------

def _census_unit(nr):
    n, r = nr
    recs = census.census_records(n, r)
    lines = [f"n={n} r={r} bases={bits_to_hex(rec.bases, comb(n, r))}" for rec in recs]
    return lines, [census.record_row(rec) for rec in recs]


def cmd_census(args) -> int:
    pairs = _pairs(args.n, args.r)
    for n, r in pairs:
        if comb(n, r) > args.cap:
            raise census.CapacityError(
                f"C({n},{r}) = {comb(n, r)} exceeds the census cap {args.cap}")
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_census_unit, pairs))
    else:
        results = [_census_unit(p) for p in pairs]
    head = _header_lines(args, n=_span(p[0] for p in pairs), r=_span(p[1] for p in pairs))
    with _output(args.out) as fh:
        fh.write(head)
        for lines, _ in results:
            for line in lines:
                fh.write(line + "\n")
    if args.stats:
        with _output(args.stats) as fh:
            fh.write(head)
            rows = [row for _, rows in results for row in rows]
            _emit_table(fh, census.RECORD_COLUMNS, rows, "csv")
    return 0


def cmd_encode(args) -> int:
    out = []
    for M in read_matroids(_read_lines(args.inp)):
        try:
            out.append(format_encoding(encode(M)))
        except UnsupportedMatroid as exc:
            raise UsageError(f"{format_matroid(M)}: {exc}") from None
    with _output(args.out) as fh:
        fh.write(_header_lines(args))
        for line in out:
            fh.write(line + "\n")
    return 0


def cmd_decode(args) -> int:
    out = [format_matroid(decode(enc)) for enc in read_encodings(_read_lines(args.inp))]
    with _output(args.out) as fh:
        if not args.bare:
            fh.write(_header_lines(args))
        for line in out:
            fh.write(line + "\n")
    return 0


def cmd_stats(args) -> int:
    reports = [census.stats_pipeline(n) for n in args.n]
    with _output(args.out) as fh:
        fh.write(_header_lines(args, n=_span(args.n)))
        if args.format == "jsonl":
            for rep in reports:
                fh.write(json.dumps(rep, sort_keys=True) + "\n")
            return 0
        cols = ("n", "r", "matroids", "sparse_paving", "loopless_coloopless", "u_zero",
                "mean_u", "mean_d", "in_N", "t_max", "minor_U12", "minor_U24", "minor_U36",
                "w_ge_digamma", "d_le_upsilon_plus_2_over_n")
        rows = []
        for rep in reports:
            for rk in rep["ranks"]:
                rk = dict(rk, n=rep["n"])
                rows.append([rk.get(c, "") for c in cols])
            tot = dict(rep["total"], n=rep["n"], r="all")
            rows.append([tot.get(c, "") for c in cols])
        _emit_table(fh, cols, rows, args.format)
    return 0


def cmd_bounds(args) -> int:
    pairs = _pairs(args.n, args.r, proper=True)
    if any(n < 2 for n, _ in pairs):
        raise UsageError("bounds need n >= 2")
    rows = [bounds.report_row(bounds.bounds_report(n, r)) for n, r in pairs]
    with _output(args.out) as fh:
        fh.write(_header_lines(args, n=_span(p[0] for p in pairs)))
        _emit_table(fh, bounds.CSV_COLUMNS, rows, args.format)
    return 0


def cmd_stable_count(args) -> int:
    pairs = _pairs(args.n, args.r)
    rows = []
    for n, r in pairs:
        if args.method == "scan":
            c = census.count_stable_sets_scan(n, r, args.max_size)
        else:
            c = census.count_stable_sets(n, r, args.max_size)
        rows.append([n, r, "" if args.max_size is None else args.max_size, c])
    with _output(args.out) as fh:
        fh.write(_header_lines(args))
        _emit_table(fh, ("n", "r", "max_size", "count"), rows, args.format)
    return 0


def cmd_gs(args) -> int:
    n, r, c = args.n, args.r, args.c
    if not 0 <= r <= n or not 0 <= c < max(n, 1):
        raise UsageError("need 0 <= r <= n and 0 <= c < n")
    G = johnson(n, r)
    cls = census.gs_class(n, r, c)
    sep = "" if n < 10 else ","
    rows = [[v, sep.join(str(e) for e in elements_of(G.masks[v]))] for v in iter_bits(cls)]
    with _output(args.out) as fh:
        fh.write(_header_lines(args, n=n, r=r, c=c, size=len(rows),
                               stable=int(G.is_stable(cls))))
        _emit_table(fh, ("id", "set"), rows, args.format)
    return 0


def cmd_sample(args) -> int:
    lines = [format_matroid(census.sample_sparse_paving(args.n, args.r, seed=args.seed + i))
             for i in range(args.count)]
    with _output(args.out) as fh:
        fh.write(_header_lines(args, n=args.n, r=args.r))
        for line in lines:
            fh.write(line + "\n")
    return 0


def cmd_verify(args) -> int:
    suites = list(dict.fromkeys(args.suite))
    reports = verify.run_suites(suites, max_n=args.max_n, jobs=args.jobs,
                                seed=args.seed, samples=args.samples)
    with _output(args.out) as fh:
        fh.write(_header_lines(args, max_n=args.max_n))
        fh.write(verify.report_text(reports))
    return 1 if any(rep.failures for rep in reports) else 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sparsematroids",
        description="Matroid census, encoding, container bounds and verification.",
        epilog=HEX_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=None):
        sp.add_argument("--seed", type=seed_type, default=0, help="64-bit seed (default 0)")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--timestamp", action="store_true",
                        help="add a timestamp comment line to the header")
        if fmt:
            sp.add_argument("--format", choices=("csv", "jsonl", "text"), default=fmt)

    sp = sub.add_parser("census", help="enumerate all matroids on [n]")
    sp.add_argument("--n", type=parse_range, required=True)
    sp.add_argument("--r", type=parse_range, default=None)
    sp.add_argument("--stats", default=None, help="stats sidecar CSV path")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--cap", type=int, default=census.MATROID_SCAN_CAP,
                    help="largest C(n,r) allowed for the full scan")
    common(sp)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("encode", help="encode matroid records")
    sp.add_argument("--in", dest="inp", required=True)
    common(sp)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="decode encoding records")
    sp.add_argument("--in", dest="inp", required=True)
    sp.add_argument("--bare", action="store_true", help="omit the header line")
    common(sp)
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("stats", help="census statistics")
    sp.add_argument("--n", type=parse_range, required=True)
    common(sp, "csv")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("bounds", help="bound evaluators for 0 < r < n")
    sp.add_argument("--n", type=parse_range, required=True)
    sp.add_argument("--r", type=parse_range, default=None)
    common(sp, "csv")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("stable-count", help="count stable sets of J(n,r)")
    sp.add_argument("--n", type=parse_range, required=True)
    sp.add_argument("--r", type=parse_range, required=True)
    sp.add_argument("--max-size", type=int, default=None)
    sp.add_argument("--method", choices=("bnb", "scan"), default="bnb")
    common(sp, "text")
    sp.set_defaults(func=cmd_stable_count)

    sp = sub.add_parser("gs", help="residue-class stable set")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--c", type=int, required=True)
    common(sp, "text")
    sp.set_defaults(func=cmd_gs)

    sp = sub.add_parser("sample", help="seeded random sparse paving matroids")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--count", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("verify", help="run verification suites")
    sp.add_argument("--suite", action="append", choices=verify.SUITES + ("all",),
                    required=True)
    sp.add_argument("--max-n", type=int, default=6)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--samples", type=int, default=1000,
                    help="sparse paving samples at (10,5) for roundtrip")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be >= 1")
        if getattr(args, "max_n", 1) < 1:
            raise UsageError("--max-n must be >= 1")
        if args.command in ("sample", "gs") and not 0 <= args.r <= args.n:
            raise UsageError("need 0 <= r <= n")
        return args.func(args)
    except RecordError as exc:
        print(f"error: malformed record: {exc}", file=sys.stderr)
    except census.CapacityError as exc:
        print(f"error: capacity: {exc}", file=sys.stderr)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
