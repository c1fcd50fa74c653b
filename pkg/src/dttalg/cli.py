"""Command-line front end: verify, cost, apply and export plans.

Transform specs look like ``dct3``, ``dst4:poly``, ``dct4:inv``, ``idct3``,
``dct2:t``, ``dft``, ``dft3`` or ``dfta=-1``.  Sizes are integers or
inclusive ranges ``lo..hi``.
"""
from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction

import numpy as np

from . import planner as pl
from .formula import apply
from .rules import RuleError
from .sexpr import dumps
from .transforms import TransformId, matrix_to_csv

TOLERANCE = 1e-10

_NAME = re.compile(r"^(i?)(dct|dst)([1-8])$|^dft([2-4]?)$|^dfta=(-?\d+(?:/\d+)?)$")


class UsageError(ValueError):
    pass


def parse_spec(spec, n, r=None):
    """Parse ``<name>[:poly][:inv][:t]`` into a TransformId of size n."""
    name, *mods = spec.strip().lower().split(":")
    m = _NAME.match(name)
    if not m:
        raise UsageError(f"unknown transform {name!r}; expected dct1..dct8, dst1..dst8, "
                         "dft, dft2..dft4 or dfta=<a>")
    flags = {"poly": False, "inverse": False, "transposed": False}
    for mod in mods:
        key = {"poly": "poly", "inv": "inverse", "t": "transposed"}.get(mod)
        if key is None:
            raise UsageError(f"unknown modifier {mod!r}; expected poly, inv or t")
        flags[key] = True
    inv_prefix, fam, typ, dft_type, a = m.groups()
    try:
        if fam:
            if inv_prefix:
                flags["inverse"] = True
            return TransformId(fam.upper(), int(typ), n, r, **flags)
        if flags["poly"] or flags["inverse"]:
            raise UsageError("the DFT has no poly or inverse variant")
        if a is not None:
            if r is not None:
                raise UsageError("--r does not combine with dfta")
            return TransformId("DFT", 1, n, a=Fraction(a), transposed=flags["transposed"])
        return TransformId("DFT", int(dft_type or 1), n, r, transposed=flags["transposed"])
    except UsageError:
        raise
    except ValueError as e:
        raise UsageError(str(e)) from None


def parse_sizes(items):
    out = []
    for item in items:
        if ".." in item:
            lo, hi = item.split("..", 1)
            try:
                lo, hi = int(lo), int(hi)
            except ValueError:
                raise UsageError(f"bad size range {item!r}") from None
            out.extend(range(lo, hi + 1))
        else:
            try:
                out.append(int(item))
            except ValueError:
                raise UsageError(f"bad size {item!r}") from None
    if not out or min(out) < 1:
        raise UsageError("sizes must be positive integers")
    return out


def parse_r(text):
    if text is None:
        return None
    try:
        r = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--r expects a rational p/q, got {text!r}") from None
    return r


def _fmt(v):
    if isinstance(v, complex) or np.iscomplexobj(v):
        v = complex(v)
        return f"{v.real:.17g}{v.imag:+.17g}j"
    return f"{float(v):.17g}"


def _read_vector(path):
    text = sys.stdin.read() if path in (None, "-") else open(path).read()
    vals = []
    for tok in text.split():
        try:
            vals.append(complex(tok) if tok.endswith("j") else float(tok))
        except ValueError:
            raise UsageError(f"input value {tok!r} is not a number") from None
    return np.array(vals)


def _make_plan(args, n):
    t = parse_spec(args.spec, n, parse_r(args.r))
    return pl.plan(t, pl.parse_strategy(args.strategy))


def cmd_verify(args, out):
    sizes = parse_sizes(args.sizes)
    for n in sizes:
        p = _make_plan(args, n)
        err = pl.verify_plan(p, seed=args.seed)
        ok = err <= TOLERANCE
        print(f"{p.tid.label():<20} error {err:.3e}  {'ok' if ok else 'FAIL'}  {pl.compact_trace(p)}",
              file=out)
        if not ok:
            print(f"verification failed at n = {n}", file=out)
            return 1
    return 0


def cmd_cost(args, out):
    rows = [pl.cost_row(_make_plan(args, n)) for n in parse_sizes(args.sizes)]
    if args.csv:
        out.write(pl.report_csv(rows))
    else:
        out.write(pl.report_text(rows))
        bad = [r for r in rows if r["delta"] not in ("", 0)]
        for r in bad:
            print(f"mismatch: {r['transform']} n={r['n']} total {r['total']} vs closed form "
                  f"{r['closed-form total']}", file=out)
    return 0


def cmd_apply(args, out):
    p = _make_plan(args, args.size)
    x = _read_vector(args.input)
    if x.size != args.size:
        raise UsageError(f"input has {x.size} values, expected {args.size}")
    for v in apply(pl.resolve(p), x):
        print(_fmt(v), file=out)
    return 0


def cmd_export(args, out):
    p = _make_plan(args, args.size)
    if args.dense:
        text = matrix_to_csv(pl.plan_matrix(p))
    elif args.plan:
        text = pl.trace_tree(p) + "\n"
    else:
        text = dumps(pl.resolve(p)) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="dttalg", description="Plan, verify and cost fast DTT algorithms.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("spec", help="transform, e.g. dct3, dst4:poly, idct3, dct2:t, dft, dfta=-1")
        p.add_argument("--r", help="skew parameter p/q for T-group DTTs (DFT: twist u)")
        p.add_argument("--strategy", default="min-cost",
                       help="min-cost, fixed-radix:K, radix2-where-possible, rightmost-balanced, "
                            "priority, fact or rule:TAG")
        p.add_argument("--seed", type=int, default=0, help="seed for random verification vectors")

    p = sub.add_parser("verify", help="check plans against the reference matrices")
    common(p)
    p.add_argument("sizes", nargs="+", help="sizes or ranges lo..hi")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cost", help="plan costs next to the closed forms")
    common(p)
    p.add_argument("sizes", nargs="+")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of a text table")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("apply", help="apply a plan to a vector read from a file or stdin")
    common(p)
    p.add_argument("size", type=int)
    p.add_argument("--input", help="file with one number per line (default stdin)")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("export", help="write the plan as a formula, dense CSV or rule tree")
    common(p)
    p.add_argument("size", type=int)
    what = p.add_mutually_exclusive_group()
    what.add_argument("--formula", action="store_true", help="formula text (default)")
    what.add_argument("--dense", action="store_true", help="dense matrix as CSV")
    what.add_argument("--plan", action="store_true", help="rule-trace tree")
    p.add_argument("--output", help="output path (default stdout)")
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        args.strategy = str(pl.parse_strategy(args.strategy))
        return args.func(args, out)
    except (UsageError, RuleError, ValueError) as e:
        print(f"dttalg: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
