"""Command-line entry point: ``intsimplex <command> [flags]``.

Exit codes: 0 success, 1 a verification reported failures (``lemma``),
2 invalid input or flags, 3 a census budget was exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .bijection import (
    Partition,
    enumerate_partitions,
    lemma_check,
    sigma,
    threshold_scan,
)
from .census import (
    DEFAULT_NODE_BUDGET,
    DEFAULT_SECONDS_BUDGET,
    BudgetExceeded,
    CensusTask,
    Mode,
    census_table,
    default_jobs,
    enumerate_simplices,
)
from .embedding import build_coordinates, reduce_dimension
from .exact import as_rational, format_rational
from .formats import (
    FormatError,
    dumps_embedding,
    embedding_to_json,
    encode_rational,
    loads_matrix,
    matrix_to_json,
)
from .geometry import gram_oracle, menger_realizable, minimal_embedding_dimension

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


def _int_range(text: str) -> list[int]:
    """``"3"``, ``"3,5"`` or ``"3-6"`` (inclusive)."""
    out: list[int] = []
    for piece in text.split(","):
        piece = piece.strip()
        lo, sep, hi = piece.partition("-")
        try:
            if sep:
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(piece))
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer range: {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty range")
    return out


def _rational_list(text: str) -> list[Fraction]:
    try:
        return [as_rational(x) for x in text.split(",") if x.strip()]
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


# commands ------------------------------------------------------------------

def _cell_json(res, with_reps: bool) -> dict:
    out = {
        "dimension": res.task.dimension,
        "diameter": res.task.diameter,
        "count": res.count,
        "complete": res.complete,
        "nodes": res.stats.nodes,
        "seconds": round(res.seconds, 6),
        "stats": vars(res.stats),
    }
    if with_reps and res.representatives is not None:
        out["representatives"] = [matrix_to_json(r) for r in res.representatives]
    return out


def cmd_census(args) -> int:
    mode = Mode(args.mode)
    jobs = args.jobs if args.jobs is not None else default_jobs()
    dims, diams = args.dim, args.diameter
    if len(dims) == 1 and len(diams) == 1:
        task = CensusTask(dims[0], diams[0], mode, emit_representatives=args.emit is not None, jobs=jobs,
                          node_budget=args.budget_nodes, seconds_budget=args.budget_seconds)
        try:
            res = enumerate_simplices(task)
        except BudgetExceeded as exc:
            part = exc.partial
            print(f"budget exceeded: {exc.reason}; partial count {part.count}, "
                  f"{part.stats.nodes} nodes, {part.seconds:.2f} s", file=sys.stderr)
            print(json.dumps(vars(part.stats)), file=sys.stderr)
            return EXIT_BUDGET
        if args.emit is not None:
            Path(args.emit).write_text(json.dumps([matrix_to_json(r) for r in res.representatives], indent=1) + "\n")
        if args.format == "json":
            _emit({"mode": mode.value, "cells": [_cell_json(res, False)]})
        elif args.format == "csv":
            print("dimension,diameter,count,nodes,seconds")
            print(f"{res.task.dimension},{res.task.diameter},{res.count},{res.stats.nodes},{res.seconds:.3f}")
        else:
            print(f"d={res.task.dimension} diameter={res.task.diameter} mode={mode.value}: count {res.count}")
            print(f"nodes {res.stats.nodes}, pruned triangle {res.stats.pruned_triangle}, "
                  f"canonicity {res.stats.pruned_canonicity}, realizability {res.stats.pruned_realizability}; "
                  f"{res.seconds:.3f} s")
        return EXIT_OK

    if args.emit is not None:
        raise UsageError("--emit needs a single dimension and diameter")
    table = census_table(dims, diams, mode=mode, jobs=jobs,
                         node_budget=args.budget_nodes, seconds_budget=args.budget_seconds)
    if args.format == "json":
        _emit({"mode": mode.value, "cells": [_cell_json(table.cells[k], False) for k in sorted(table.cells)]})
    elif args.format == "csv":
        sys.stdout.write(table.to_csv())
    else:
        sys.stdout.write(table.to_text())
    return EXIT_BUDGET if table.over_budget else EXIT_OK


def cmd_partitions(args) -> int:
    parts = enumerate_partitions(args.n)
    if args.format == "count":
        print(len(parts))
    elif args.format == "json":
        _emit({"n": args.n, "count": len(parts), "partitions": [list(p.parts) for p in parts]})
    else:
        for p in parts:
            print(" ".join(map(str, p.parts)))
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        text = Path(args.matrix).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.matrix}: {exc}") from None
    a = loads_matrix(text)
    dim = args.dim if args.dim is not None else a.n - 1
    verdict = menger_realizable(a, dim)
    report = minimal_embedding_dimension(a)
    oracle = gram_oracle(a, dim, args.tolerance)
    nondeg = verdict.realizable and report.nondegenerate and dim >= a.n - 1
    if args.json:
        _emit({
            "dim": dim,
            "realizable": verdict.realizable,
            "nondegenerate": nondeg,
            "min_dim": report.realizable_in_dim,
            "witness": list(verdict.witness) if verdict.witness is not None else None,
            "gram_oracle": oracle,
        })
    else:
        if verdict:
            kind = "nondegenerate" if nondeg else f"degenerate (min dimension {report.realizable_in_dim})"
            print(f"realizable in dimension {dim}: yes, {kind}")
        else:
            print(f"realizable in dimension {dim}: no")
            print(f"witness subset: {list(verdict.witness)}")
        print(f"gram oracle (tol {args.tolerance:g}): {'agrees' if oracle == verdict.realizable else 'disagrees'}")
    return EXIT_OK


def cmd_embed(args) -> int:
    partition = Partition.of(args.partition)
    emb = build_coordinates(partition, args.lambda_sq)
    if args.reduce:
        emb = reduce_dimension(emb)
    text = dumps_embedding(emb)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {emb.n} points in {emb.ambient_dim} dimensions to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_lemma(args) -> int:
    grid = [q for chunk in args.lambda_sq for q in chunk] or [Fraction(4)]
    rows = []
    for n in range(1, args.max_n + 1):
        for p in enumerate_partitions(n):
            for lam in grid:
                rows.append(lemma_check(p, lam))
    ok = all(r.holds for r in rows)
    if args.format == "json":
        _emit({"all_hold": ok, "rows": [{
            "partition": list(r.partition.parts),
            "lambda_sq": encode_rational(r.lambda_sq),
            "det_a": encode_rational(r.det_a),
            "det_abar": encode_rational(r.det_abar),
            "expr1": encode_rational(r.expr1),
            "expr2": encode_rational(r.expr2),
            "holds": r.holds,
        } for r in rows]})
    else:
        print(f"{'partition':<24} {'lambda^2':>8} {'expr1':>14} {'expr2':>14}  holds")
        for r in rows:
            print(f"{str(r.partition):<24} {format_rational(r.lambda_sq):>8} {format_rational(r.expr1):>14} "
                  f"{format_rational(r.expr2):>14}  {'yes' if r.holds else 'NO'}")
        print(f"{sum(r.holds for r in rows)}/{len(rows)} rows hold")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_sigma(args) -> int:
    out: dict = {}
    lines = []
    if args.d is not None:
        s = sigma(args.d)
        out.update(d=s.d, value=s.value, inner_radicand=encode_rational(s.inner_radicand),
                   outer_rational=encode_rational(s.outer_rational),
                   outer_sqrt_coeff=encode_rational(s.outer_sqrt_coeff))
        lines.append(f"sigma({s.d},{s.d + 2}) = {s.value:.10f}")
    if args.scan:
        if args.dim is None or not args.grid:
            raise UsageError("--scan needs --dim and --grid")
        scan = threshold_scan(args.dim, args.grid)
        out["scan"] = [{
            "lambda_sq": encode_rational(r.lambda_sq),
            "realizable_count": r.realizable_count,
            "partition_count": r.partition_count,
            "bijection_holds": r.bijection_holds,
            "above_threshold": r.above_threshold,
            "witnesses": [list(w) for w in r.witnesses],
        } for r in scan]
        lines.append(f"{'lambda^2':>10} {'classes':>8} {'p(n)':>6} {'bijection':>10} {'>= threshold':>13}")
        for r in scan:
            lines.append(f"{format_rational(r.lambda_sq):>10} {r.realizable_count:>8} {r.partition_count:>6} "
                         f"{'holds' if r.bijection_holds else 'fails':>10} {'yes' if r.above_threshold else 'no':>13}")
    if not out:
        raise UsageError("give --d and/or --scan")
    if args.format == "json":
        _emit(out)
    else:
        print("\n".join(lines))
    return EXIT_OK


# parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="intsimplex", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="count nonisomorphic integral simplices")
    p.add_argument("--dim", type=_int_range, required=True, help="dimension(s): 3, 3,4 or 3-5")
    p.add_argument("--diameter", type=_int_range, required=True, help="diameter(s), same syntax")
    p.add_argument("--mode", choices=["exact", "upto"], default="exact")
    p.add_argument("--emit", metavar="FILE", help="write canonical representatives (JSON list of matrix files)")
    p.add_argument("--jobs", type=_positive_int, default=None, help="worker processes (default $INTSIMPLEX_JOBS or 1)")
    p.add_argument("--budget-nodes", type=_positive_int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--budget-seconds", type=_positive_float, default=DEFAULT_SECONDS_BUDGET)
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("partitions", help="list or count the partitions of n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=["list", "count", "json"], default="list")
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("check", help="realizability report for a matrix file")
    p.add_argument("--matrix", required=True)
    p.add_argument("--dim", type=int, default=None, help="target dimension (default n-1)")
    p.add_argument("--tolerance", type=_positive_float, default=1e-8, help="Gram oracle eigenvalue tolerance")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("embed", help="explicit coordinates for a partition's simplex")
    p.add_argument("--partition", type=_int_range, required=True, help="parts, e.g. 3,2,1")
    p.add_argument("--lambda-sq", type=_rational, default=Fraction(4))
    p.add_argument("--reduce", action="store_true", help="express in exactly d dimensions")
    p.add_argument("--out")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("lemma", help="verify the determinant inequalities for all partitions")
    p.add_argument("--max-n", type=_positive_int, required=True)
    p.add_argument("--lambda-sq", type=_rational_list, action="append", default=[],
                   help="comma-separated lambda^2 values; may repeat (default 4)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("sigma", help="threshold value and bijection scans")
    p.add_argument("--d", type=int)
    p.add_argument("--scan", action="store_true")
    p.add_argument("--dim", type=int)
    p.add_argument("--grid", type=_rational_list)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_sigma)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FormatError, ValueError) as exc:
        print(f"intsimplex {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
