"""Command-line interface: ``lacm {hall,dims,entropy,verify,trees}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import entropy, lie, series, trees, verify

FORMATS = ("text", "csv", "json")
DIM_LIMITS = {"free": 64, "lacm": 64, "trees": 18}


class UsageError(ValueError):
    pass


def _emit(table: str, columns: list[str], rows: list[dict], fmt: str, text: str | None = None) -> str:
    if fmt == "json":
        return json.dumps({"table": table, "rows": rows}) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    if text is not None:
        return text
    widths = [max(len(c), *(len(str(r[c])) for r in rows)) if rows else len(c) for c in columns]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    for r in rows:
        lines.append("  ".join(str(r[c]).rjust(w) for c, w in zip(columns, widths)))
    return "\n".join(lines) + "\n"


def _grid(rows: list[dict]) -> str:
    """Order-by-degree grid with blank cells for zero entries."""
    orders = sorted({r["order"] for r in rows})
    degrees = range(0, max((r["degree"] for r in rows), default=0) + 1)
    cell = {(r["order"], r["degree"]): r["dim"] for r in rows}
    width = max([len(str(v)) for v in cell.values()] + [3])
    head = "n\\deg".rjust(6) + "".join(str(d).rjust(width + 1) for d in degrees)
    lines = [head]
    for n in orders:
        lines.append(str(n).rjust(6) + "".join(str(cell.get((n, d), "")).rjust(width + 1) for d in degrees))
    return "\n".join(lines) + "\n"


def cmd_hall(args) -> tuple[str, int]:
    if not 1 <= args.max_order <= 14:
        raise UsageError("hall supports 1 <= --max-order <= 14")
    rows = [h.as_record() for h in lie.build_hall_set(args.max_order) if h.is_basis or not args.quotient]
    return _emit("hall_set", ["order", "degree", "expr", "class"], rows, args.format), 0


def cmd_dims(args) -> tuple[str, int]:
    limit = DIM_LIMITS[args.algebra]
    if args.max_order is None:
        args.max_order = min(20, limit)
    if not 1 <= args.max_order <= limit:
        raise UsageError(f"dims --algebra {args.algebra} supports 1 <= --max-order <= {limit}")
    N = args.max_order
    if args.bigraded:
        if args.algebra == "free":
            raise UsageError("the free Lie algebra has no degree grading; drop --bigraded")
        if args.algebra == "lacm":
            table, name = series.lacm_dims_bigraded(N), "lacm_bigraded"
        else:
            table, name = trees.tree_dims_bigraded(N), "trees_bigraded"
        rows = [{"order": n, "degree": m, "dim": d} for (n, m), d in sorted(table.items()) if d]
        text = _grid(rows) if args.format == "text" else None
        return _emit(name, ["order", "degree", "dim"], rows, args.format, text), 0
    dims = {"free": series.free_dims, "lacm": series.lacm_dims, "trees": trees.tree_dims}[args.algebra](N)
    rows = [{"order": n, "dim": dims[n]} for n in range(1, N + 1)]
    return _emit(f"{args.algebra}_dims", ["order", "dim"], rows, args.format), 0


def cmd_entropy(args) -> tuple[str, int]:
    if not 1 <= args.digits <= entropy.MAX_DIGITS:
        raise UsageError(f"--digits must be in 1..{entropy.MAX_DIGITS}")
    if args.constant in ("r", "alpha"):
        c = (entropy.radius_r if args.constant == "r" else entropy.entropy_alpha)(args.digits)
        record = {"constant": c.name, "digits": c.digits, "value": c.value, "reciprocal": c.reciprocal}
    elif args.constant == "abelian":
        record = {"constant": "abelian", "digits": args.digits, "value": entropy.abelian_entropy(args.digits)}
    else:
        est = entropy.eta_estimate(10_000)
        record = {"constant": "eta", "digits": 12, "value": str(est), "n_max": est.n_max}
    if args.format == "json":
        return json.dumps(record) + "\n", 0
    if args.format == "csv":
        return _emit("constants", list(record), [record], "csv"), 0
    lines = [record["value"]] + ([record["reciprocal"]] if "reciprocal" in record else [])
    return "\n".join(lines) + "\n", 0


def cmd_verify(args) -> tuple[str, int]:
    try:
        results = verify.run_suite(args.suite, args.max_order, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    passed = all(r.passed for r in results)
    if args.format == "json":
        out = json.dumps({"passed": passed, "suites": [r.as_record() for r in results]}) + "\n"
    else:
        rows = [
            {
                "suite": r.suite,
                "check": c.name,
                "cases": c.cases,
                "verdict": "PASS" if c.passed else "FAIL",
                "counterexample": json.dumps(c.counterexample) if c.counterexample else "",
                "detail": json.dumps(c.detail, sort_keys=True) if c.detail else "",
            }
            for r in results
            for c in r.checks
        ]
        if args.format == "csv":
            out = _emit("verify", list(rows[0]) if rows else ["suite"], rows, "csv")
        else:
            lines = [
                f"{row['verdict']}  {row['suite']}: {row['check']} ({row['cases']} cases)"
                + (f" {row['detail']}" if row["detail"] else "")
                for row in rows
            ]
            lines += [f"  counterexample: {row['counterexample']}" for row in rows if row["counterexample"]]
            lines.append("all checks passed" if passed else "some checks FAILED")
            out = "\n".join(lines) + "\n"
    return out, 0 if passed else 1


def cmd_trees(args) -> tuple[str, int]:
    if not 1 <= args.max_order <= DIM_LIMITS["trees"]:
        raise UsageError(f"trees supports 1 <= --max-order <= {DIM_LIMITS['trees']}")
    rows = [
        {"order": t.order, "degree": t.degree, "code": t.code}
        for _, group in sorted(trees.enumerate_trees(args.max_order).items())
        for t in sorted(group)
    ]
    return _emit("trees", ["order", "degree", "code"], rows, args.format), 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lacm",
        description="Lie algebra of classical mechanics: bases, dimensions, constants and checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_order: int | None):
        p.add_argument("--max-order", type=int, default=default_order)
        p.add_argument("--format", choices=FORMATS, default="text")

    p = sub.add_parser("hall", help="list the Hall set with basis/ideal classification")
    common(p, 6)
    p.add_argument("--quotient", action="store_true", help="omit ideal elements")
    p.set_defaults(func=cmd_hall)

    p = sub.add_parser("dims", help="dimension tables")
    common(p, None)  # 20, or the algebra's limit if lower
    p.add_argument("--algebra", choices=tuple(DIM_LIMITS), default="lacm")
    p.add_argument("--bigraded", action="store_true", help="split by degree as well as order")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("entropy", help="growth constants")
    p.add_argument("--constant", choices=("r", "alpha", "eta", "abelian"), default="alpha")
    p.add_argument("--digits", type=int, default=20)
    p.add_argument("--format", choices=FORMATS, default="text")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("verify", help="run verification suites")
    common(p, None)
    p.add_argument("--suite", choices=("all", *verify.SUITES), default="all")
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trees", help="list colored trees in canonical form")
    common(p, 6)
    p.set_defaults(func=cmd_trees)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, code = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
