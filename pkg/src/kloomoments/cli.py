"""Command-line front end.

Exit codes: 0 success, 1 verification mismatch, 2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .char_sums import (
    deligne_bound_holds,
    kloosterman,
    kloosterman_md_all,
    kloosterman_md_direct,
    value_range,
)
from .errors import (
    BudgetExceeded,
    DegreeMismatch,
    KloosError,
    NotPowerOfTwo,
    ReducibleModulus,
    UnsupportedDegree,
    ZeroInverse,
    ZeroParameter,
)
from .fiber_counts import CodeKind, delta_direct, delta_formula, sigma_direct, sigma_formula
from .finite_field import default_modulus_table, parse_field_spec
from .kloo_codes import (
    DP_BUDGET,
    CodeSpec,
    dual_weight_enumerator,
    injectivity_check,
    macwilliams_transform,
    weight_distribution,
)
from .moment_engine import MomentKind, oracle_sequence, recursive_moments
from .tuples import DEFAULT_BUDGET
from .verify import run_verify

SCHEMA_VERSION = 1

PRECONDITION_ERRORS = (
    BudgetExceeded, DegreeMismatch, NotPowerOfTwo, ReducibleModulus,
    UnsupportedDegree, ZeroInverse, ZeroParameter,
)


class Mismatch(Exception):
    """Raised after output is written when a compared pair disagrees."""


# -- output -----------------------------------------------------------------

def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    rows = doc.get("rows", [])
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _cell(v) for k, v in row.items()})
        return buf.getvalue()
    lines = [f"{k}: {_cell(v)}" for k, v in doc.items() if k != "rows" and not isinstance(v, list)]
    if rows:
        cols = list(rows[0])
        cells = [[_cell(r[c]) for c in cols] for r in rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
        lines.extend("  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells)
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return str(v)


def _doc(command: str, ctx, **payload) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "command": command}
    if ctx is not None:
        doc["field"] = ctx.describe()
    doc.update(payload)
    return doc


# -- commands ---------------------------------------------------------------

def _code_spec(args, ctx) -> CodeSpec:
    kind = args.kind
    if kind == "md":
        return CodeSpec(CodeKind.MD, args.n - 1, ctx,
                        allow_any_n=args.allow_any_n, allow_r2=args.allow_r2)
    if kind == "pow":
        return CodeSpec(CodeKind.POW, args.m, ctx, allow_r2=args.allow_r2)
    raise UnsupportedDegree(f"kind {kind!r} does not name a code")


def cmd_field(args) -> dict:
    if args.table:
        rows = [{"r": r, "modulus": format(m, "x")} for r, m in default_modulus_table().items()]
        return _doc("field", None, rows=rows)
    spec = args.spec or args.field
    return _doc("field", parse_field_spec(spec))


def _element(ctx, value: int, name: str) -> int:
    if not 0 <= value < ctx.q:
        raise ValueError(f"{name}={value} is not an element code of GF({ctx.q})")
    return value


def cmd_ksum(args) -> dict:
    ctx = parse_field_spec(args.field)
    _element(ctx, args.a, "a")
    _element(ctx, args.twist, "twist")
    if args.m == 1:
        value = kloosterman(ctx, args.a, args.twist)
    elif args.twist != 1:
        raise UnsupportedDegree("a twist is only supported for m = 1")
    elif args.direct:
        value = kloosterman_md_direct(ctx, args.m, args.a, args.budget)
    else:
        value = kloosterman_md_all(ctx, args.m)[args.a]
    return _doc("ksum", ctx, m=args.m, a=args.a, twist=args.twist, value=value,
                deligne_ok=deligne_bound_holds(value, args.m, ctx.q))


def cmd_ksum_table(args) -> dict:
    ctx = parse_field_spec(args.field)
    table = kloosterman_md_all(ctx, args.m)
    rows = [{"a": a, "value": v,
             "deligne_ok": deligne_bound_holds(v, args.m, ctx.q),
             "parity_ok": ((ctx.q - 1) ** args.m - v) % 2 == 0}
            for a, v in table.items()]
    return _doc("ksum-table", ctx, m=args.m, rows=rows)


def cmd_value_range(args) -> dict:
    ctx = parse_field_spec(args.field)
    rep = value_range(ctx)
    doc = _doc("value-range", ctx, predicted=rep.predicted, missing=rep.missing,
               unexpected=rep.unexpected, ok=rep.ok, rows=rep.rows())
    if not rep.ok:
        raise Mismatch(doc)
    return doc


def cmd_counts(args) -> dict:
    ctx = parse_field_spec(args.field)
    if args.kind == "md":
        param = args.n - 1
        if not args.allow_any_n and not (args.n & (args.n - 1) == 0 and args.n >= 2):
            raise NotPowerOfTwo(f"n = {args.n} is not a power of two (use --allow-any-n)")
        direct, formula = delta_direct(ctx, param, args.budget), delta_formula(ctx, param)
    elif args.kind == "pow":
        param = args.m
        direct, formula = sigma_direct(ctx, param, args.budget), sigma_formula(ctx, param)
    else:
        raise UnsupportedDegree("counts needs --kind md or pow")
    rows = [{"beta": b, "direct": direct[b], "formula": formula[b], "match": direct[b] == formula[b]}
            for b in range(ctx.q)]
    doc = _doc("counts", ctx, kind=args.kind, param=param, total=direct.total, rows=rows)
    if not all(r["match"] for r in rows):
        raise Mismatch(doc)
    return doc


def cmd_weights(args) -> dict:
    ctx = parse_field_spec(args.field)
    spec = _code_spec(args, ctx)
    dp = weight_distribution(spec.counts(), budget=args.dp_budget)
    inj = injectivity_check(spec, args.budget)
    dual = dual_weight_enumerator(spec, override=args.allow_r2 and not inj.injective)
    mw = macwilliams_transform(dual, spec.N)
    rows = [{"j": j, "dp": str(a), "macwilliams": str(b), "match": a == b}
            for j, (a, b) in enumerate(zip(dp.freq, mw.freq))]
    doc = _doc("weights", ctx, code=spec.label, N=spec.N,
               injective=inj.injective, inequality_holds=inj.inequality_holds,
               dual=dual.as_strings(), dp=dp.as_strings(), macwilliams=mw.as_strings(),
               rows=rows)
    if dp.freq != mw.freq:
        raise Mismatch(doc)
    return doc


def _moment_kind(args) -> MomentKind:
    if args.kind == "md":
        return MomentKind.md(args.n)
    if args.kind == "pow":
        return MomentKind.pow(args.m)
    return MomentKind.k2()


def cmd_moments(args) -> dict:
    ctx = parse_field_spec(args.field)
    kind = _moment_kind(args)
    rec = recursive_moments(ctx, kind, args.hmax)
    orc = oracle_sequence(ctx, kind, args.hmax)
    rows = [{"h": h, "recursive": str(rec[h]), "oracle": str(orc[h]), "match": rec[h] == orc[h]}
            for h in range(1, args.hmax + 1)]
    doc = _doc("moments", ctx, kind=str(kind), rows=rows)
    if not all(r["match"] for r in rows):
        raise Mismatch(doc)
    return doc


def cmd_verify(args) -> dict:
    ctx = parse_field_spec(args.field)
    report = run_verify(ctx, args.level, tamper_weight=args.tamper_weight)
    rows = [c.as_dict(timing=not args.no_timing) for c in report.checks]
    doc = _doc("verify", ctx, level=args.level, ok=not report.failed, rows=rows)
    if report.failed:
        raise Mismatch(doc)
    return doc


# -- parser -----------------------------------------------------------------

def _common(p: argparse.ArgumentParser, field_required: bool = True):
    p.add_argument("--field", required=field_required, metavar="r[:hex]",
                   help="field degree r, optionally with modulus in hex, e.g. 3 or 3:b")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="maximum number of tuples any enumeration may visit")


def _code_args(p: argparse.ArgumentParser, kinds=("md", "pow")):
    p.add_argument("--kind", choices=kinds, required=True)
    p.add_argument("--n", type=int, default=2, help="MD family: n, a power of two")
    p.add_argument("--m", type=int, default=1, help="POW family: m")
    p.add_argument("--allow-any-n", action="store_true",
                   help="permit n that is not a power of two (outside the theory)")
    p.add_argument("--allow-r2", action="store_true",
                   help="permit r = 2 for code experiments")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kloomoments",
        description="Power moments of Kloosterman sums over GF(2^r), two independent ways.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="summarize a field")
    p.add_argument("spec", nargs="?", help="r[:modulus_hex]")
    p.add_argument("--table", action="store_true", help="print the default modulus for each r")
    _common(p, field_required=False)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("ksum", help="one Kloosterman sum K_m(lambda; a)")
    _common(p)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--twist", type=int, default=1)
    p.add_argument("--direct", action="store_true", help="use m-fold enumeration")
    p.set_defaults(func=cmd_ksum)

    p = sub.add_parser("ksum-table", help="K_m(lambda; a) for every a")
    _common(p)
    p.add_argument("--m", type=int, default=1)
    p.set_defaults(func=cmd_ksum_table)

    p = sub.add_parser("value-range", help="observed vs predicted Kloosterman values")
    _common(p)
    p.set_defaults(func=cmd_value_range)

    p = sub.add_parser("counts", help="fiber counts, direct vs formula")
    _common(p)
    _code_args(p)
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("weights", help="weight distribution, DP vs MacWilliams")
    _common(p)
    _code_args(p)
    p.add_argument("--dp-budget", type=int, default=DP_BUDGET)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("moments", help="recursive moments vs brute-force oracle")
    _common(p)
    _code_args(p, kinds=("md", "pow", "k2"))
    p.add_argument("--hmax", type=int, default=6)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("verify", help="run the invariant suite")
    _common(p)
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--no-timing", action="store_true", help="omit elapsed times for byte comparison")
    p.add_argument("--tamper-weight", type=int, default=None, metavar="J",
                   help="fault injection: add one to the weight-J count before the Pless check")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "field" and not (args.spec or args.field or args.table):
        parser.error("field: a field spec is required")
    try:
        doc = args.func(args)
        code = 0
    except Mismatch as mm:
        doc, code = mm.args[0], 1
    except PRECONDITION_ERRORS as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 2
    except KloosError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    sys.stdout.write(_render(doc, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
