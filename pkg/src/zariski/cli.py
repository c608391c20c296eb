"""Command line front end.

Exit codes: 0 success, 1 verification or domain failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from . import invariants
from .chambers import (
    ChamberCensus,
    NotAChamberError,
    NotAmpleError,
    chamber_representative,
    census,
    verify_tables,
)
from .delpezzo import ORDERS, intersection_matrix, parse_divisor
from .enumerator import EnumerationStats, count_posdef, enumerate_posdef
from .exactalg import MatrixFormatError, parse_matrix

FORMATS = ("text", "json", "csv")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _r_value(s: str) -> int:
    try:
        r = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"r must be an integer, got {s!r}") from None
    if not 1 <= r <= 8:
        raise argparse.ArgumentTypeError(f"r must be in 1..8, got {r}")
    return r


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zariski", description="Zariski chambers on Del Pezzo surfaces X_r (1 <= r <= 8).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("delpezzo", help="chamber census of X_r")
    d.add_argument("r", type=_r_value)
    d.add_argument("--per-cardinality", action="store_true", help="include counts by support size")
    d.add_argument("--format", choices=FORMATS, default="text")
    d.add_argument("--emit-supports", metavar="PATH", help="write every chamber support (curve labels) to PATH")
    d.add_argument("--order", choices=ORDERS, default="nested", help="curve (row) order of A_r")
    d.add_argument("--threads", type=int, default=1, help="worker processes for counting")

    e = sub.add_parser("enumerate", help="definite principal submatrices of a matrix file")
    e.add_argument("matrix_file")
    e.add_argument("--mode", choices=("posdef", "negdef"), default="posdef")
    e.add_argument("--count-only", action="store_true")
    e.add_argument("--format", choices=FORMATS, default="text")
    e.add_argument("--engine", choices=("incremental", "literal"), default="incremental")
    e.add_argument("--threads", type=int, default=1, help="worker processes (with --count-only)")

    m = sub.add_parser("matrix", help="dump the intersection matrix A_r")
    m.add_argument("r", type=_r_value)
    m.add_argument("--format", choices=FORMATS, default="text")
    m.add_argument("--order", choices=ORDERS, default="nested")
    m.add_argument("--sidecar", metavar="PATH", help="also write curve labels, one per row, to PATH")

    v = sub.add_parser("verify", help="recompute the published tables and run self-checks")
    v.add_argument("--max-r", type=_r_value, default=8)
    v.add_argument("--oracle-limit", type=int, default=16, help="largest N for brute-force comparisons")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--tables-only", action="store_true", help="skip the invariant suite")

    rp = sub.add_parser("rep", help="interior representative of a chamber")
    rp.add_argument("r", type=_r_value)
    rp.add_argument("--support", required=True, help="comma-separated curve labels, e.g. E1,C1_23")
    rp.add_argument("--ample", help="ample class, e.g. '4H - E1 - E2' or '3;1,1' (default -K)")
    rp.add_argument("--integral", action="store_true", help="also print the primitive integral multiple of P")
    rp.add_argument("--format", choices=("text", "json"), default="text")
    rp.add_argument("--order", choices=ORDERS, default="nested")
    return p


def _census_from_enumeration(r: int, order: str, sink) -> ChamberCensus:
    model = intersection_matrix(r, order)
    hist: dict[int, int] = {}
    labels = model.labels

    def visit(S):
        hist[len(S)] = hist.get(len(S), 0) + 1
        sink.write(" ".join(labels[i - 1] for i in S) + "\n")

    t0 = time.perf_counter()
    stats = enumerate_posdef(-model.matrix, visit)
    elapsed = (time.perf_counter() - t0) * 1000
    return ChamberCensus(
        r=r,
        negdef_count=stats.sets_emitted,
        z=stats.sets_emitted + 1,
        per_cardinality=dict(sorted(hist.items())),
        max_support=stats.max_cardinality,
        stats=stats,
        wall_time_ms=elapsed,
        order=order,
    )


def cmd_delpezzo(args) -> int:
    if args.emit_supports:
        with open(args.emit_supports, "w", buffering=1 << 20) as sink:
            c = _census_from_enumeration(args.r, args.order, sink)
    else:
        c = census(args.r, workers=args.threads, order=args.order)
    render = {"text": c.to_text, "json": c.to_json, "csv": c.to_csv}[args.format]
    sys.stdout.write(render(args.per_cardinality))
    return 0


def _stats_dict(stats: EnumerationStats) -> dict:
    return {
        "sets_emitted": stats.sets_emitted,
        "det_evaluations": stats.det_evaluations,
        "max_cardinality": stats.max_cardinality,
    }


def cmd_enumerate(args) -> int:
    try:
        text = Path(args.matrix_file).read_text()
    except OSError as exc:
        print(f"zariski enumerate: error: {exc}", file=sys.stderr)
        return 2
    try:
        A = parse_matrix(text)
    except MatrixFormatError as exc:
        print(f"zariski enumerate: error: {args.matrix_file}: {exc}", file=sys.stderr)
        return 2
    if args.mode == "negdef":
        A = -A
    out = sys.stdout

    if args.count_only:
        if args.engine == "literal":
            stats = enumerate_posdef(A, lambda S: None, engine="literal")
            count, parallel = stats.sets_emitted, False
        else:
            res = count_posdef(A, workers=args.threads)
            count, stats, parallel = res.count, res.stats, res.parallel
        info = _stats_dict(stats)
        if parallel:
            info["parallel"] = True
        if args.format == "json":
            out.write(json.dumps({"count": count, "stats": info}, indent=2) + "\n")
        elif args.format == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["count", *info])
            w.writerow([count, *info.values()])
        else:
            out.write(f"{count}\n")
            out.write("# " + " ".join(f"{k}={v}" for k, v in info.items()) + "\n")
        return 0

    if args.format == "json":
        sets: list[list[int]] = []
        stats = enumerate_posdef(A, lambda S: sets.append(list(S)), engine=args.engine)
        out.write(json.dumps({"sets": sets, "stats": _stats_dict(stats)}) + "\n")
        return 0
    sep = "," if args.format == "csv" else " "
    stats = enumerate_posdef(A, lambda S: out.write(sep.join(map(str, S)) + "\n"), engine=args.engine)
    if args.format == "text":
        out.write("# " + " ".join(f"{k}={v}" for k, v in _stats_dict(stats).items()) + "\n")
    return 0


def cmd_matrix(args) -> int:
    model = intersection_matrix(args.r, args.order)
    if args.sidecar:
        Path(args.sidecar).write_text(model.sidecar_text())
    if args.format == "json":
        doc = {"r": model.r, "n": model.n, "order": model.order, "labels": model.labels, "matrix": model.matrix.tolist()}
        sys.stdout.write(json.dumps(doc) + "\n")
    elif args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["curve", *model.labels])
        for lab, row in zip(model.labels, model.matrix.rows):
            w.writerow([lab, *row])
    else:
        sys.stdout.write(model.to_text())
    return 0


def cmd_verify(args, *, z_table=None) -> int:
    report = verify_tables(args.max_r, workers=args.threads, z_table=z_table)
    if not args.tables_only:
        report.extend(invariants.run_all(args.max_r, args.oracle_limit))
    if args.format == "json":
        sys.stdout.write(json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        sys.stdout.write(report.to_text())
    return 0 if report.ok else 1


def cmd_rep(args) -> int:
    model = intersection_matrix(args.r, args.order)
    try:
        support = model.support_from_labels([s for s in args.support.split(",") if s.strip()])
    except (KeyError, ValueError) as exc:
        print(f"zariski rep: error: {exc}", file=sys.stderr)
        return 2
    ample = None
    if args.ample:
        try:
            ample = parse_divisor(args.ample, args.r)
        except ValueError as exc:
            print(f"zariski rep: error: {exc}", file=sys.stderr)
            return 2
    try:
        rep = chamber_representative(args.r, support, ample, order=args.order)
    except NotAChamberError:
        print(f"not a Zariski chamber support: {', '.join(model.labels_of(support))}", file=sys.stderr)
        return 1
    except NotAmpleError as exc:
        print(f"zariski rep: ample class rejected: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        doc = rep.to_dict()
        if args.integral:
            doc["P_primitive"] = str(rep.primitive_P())
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
        return 0
    parts = [
        "support = " + ", ".join(rep.labels),
        "a = " + ", ".join(str(x) for x in rep.a),
        f"P = {rep.P}",
        f"k_scale = {rep.k_scale}",
        f"ample = {rep.ample}",
    ]
    if args.integral:
        parts.append(f"P_primitive = {rep.primitive_P()}")
    sys.stdout.write("; ".join(parts) + "\n")
    return 0


COMMANDS = {
    "delpezzo": cmd_delpezzo,
    "enumerate": cmd_enumerate,
    "matrix": cmd_matrix,
    "verify": cmd_verify,
    "rep": cmd_rep,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
