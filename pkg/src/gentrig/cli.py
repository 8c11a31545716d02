"""Command-line front end.

    gentrig [--format json|csv|pretty] [--precision DPS] [--config FILE] COMMAND ...

Commands: ``eval``, ``oracle``, ``coeffs``, ``zeros``, ``terminant``,
``verify``, ``table``.  Exit status: 0 success, 1 a verification failed,
2 usage or domain error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from mpmath import mp

from . import oracle
from ._numerics import ConvergenceError, DomainError, parse_complex, set_working_dps, working_dps
from .coeffs import CoefficientError, coefficient_table
from .expansions import EvalRequest, evaluate
from .terminant import TerminantQuery, all_bounds, best_bound, terminant_eval
from .verify import SUITES, ConfigError, GridConfig, parse_number, run_verify
from .zeros import ZeroIndexError, zero_refine, zero_seed

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialisation


def to_jsonable(x):
    """Plain JSON types: complex as ``{"re", "im"}``, rationals as strings."""
    if isinstance(x, dict):
        return {k: to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (str, int)):
        return x
    if isinstance(x, (complex, mp.mpc)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, (float, mp.mpf)):
        return float(x)
    if hasattr(x, "value"):  # enums
        return x.value
    return str(x)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return f"{v['re']:.17g}{v['im']:+.17g}j"
    if isinstance(v, float):
        return f"{v:.17g}"
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
        return " ".join(_fmt(x) for x in v)
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    return str(v)


def emit(rows: list[dict], fmt: str, out=None) -> None:
    out = out or sys.stdout
    rows = [to_jsonable(r) for r in rows]
    if fmt == "json":
        for r in rows:
            out.write(json.dumps(r) + "\n")
        return
    if not rows:
        return
    cols = list(rows[0].keys())
    for r in rows[1:]:
        cols += [k for k in r if k not in cols]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in cols])
        out.write(buf.getvalue())
        return
    cells = [[_fmt(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out.write("  ".join(c.ljust(wd) for c, wd in zip(cols, widths)).rstrip() + "\n")
    for row in cells:
        out.write("  ".join(x.ljust(wd) for x, wd in zip(row, widths)).rstrip() + "\n")


# ---------------------------------------------------------------------------
# commands


def _order(text: str):
    if text == "optimal":
        return "optimal"
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"--order must be an integer or 'optimal', got {text!r}")


def _z(text: str):
    try:
        return parse_complex(text)
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}")


def _num(z: complex):
    return z.real if z.imag == 0 else z


def cmd_eval(args) -> list[dict]:
    req = EvalRequest(parse_number(args.a), _num(_z(args.z)), _order(args.order), args.alpha)
    cv = evaluate(args.fn, req)
    row = {"fn": args.fn, "a": req.a, "z": req.z}
    row.update(cv.to_dict())
    return [row]


def cmd_oracle(args) -> list[dict]:
    a, z = parse_number(args.a), _num(_z(args.z))
    fn = args.fn
    if fn == "f":
        v = oracle.f_quadrature(a, z)
    elif fn == "g":
        v = oracle.g_quadrature(a, z)
    elif fn == "m2":
        v = oracle.m2(a, z)
    elif fn == "phi":
        v = oracle.phase(a, z)
    elif fn == "x":
        v = oracle.invert_phase(a, z)
    elif fn == "ti":
        v = oracle.ti(a, z, args.alpha)
    elif fn == "gamma":
        v = oracle.incomplete_gamma_upper(a, z)
    else:  # argparse restricts choices
        raise UsageError(fn)
    return [{"fn": fn, "a": a, "z": z, "value": v, "digits": working_dps()}]


def cmd_coeffs(args) -> list[dict]:
    if args.kind == "d" and args.k is None:
        raise UsageError("--kind d needs --k")
    poly = coefficient_table(args.kind, args.n, args.k)
    row = {"kind": args.kind, "n": args.n}
    if args.kind == "d":
        row["k"] = args.k
    row["degree"] = poly.degree
    row["coefficients"] = poly.to_strings()
    row["polynomial"] = str(poly)
    return [row]


def cmd_zeros(args) -> list[dict]:
    rows = []
    for k in range(args.k_from, args.k_to + 1):
        rec = zero_seed(args.a, args.alpha, k)
        if args.refine:
            rec = zero_refine(rec)
        rows.append(rec.to_dict())
    return rows


def _p(text: str) -> complex:
    try:
        parts = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse p {text!r}")
    return complex(parts[0], parts[1] if len(parts) > 1 else 0.0)


def cmd_terminant(args) -> list[dict]:
    q = TerminantQuery(_p(args.p), _z(args.z))
    row = {"p": _num(q.p), "z": q.z}
    if not args.bounds_only:
        row["value"] = terminant_eval(q)
    row["bounds"] = [b.to_dict() for b in all_bounds(q)]
    row["best"] = best_bound(q).to_dict()
    return [row]


def _config(args) -> GridConfig:
    cfg = GridConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = GridConfig.from_text(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}")
    for item in args.set or []:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        cfg.set(*(s.strip() for s in item.split("=", 1)))
    return cfg


def cmd_verify(args) -> tuple[list[dict], bool]:
    cfg = _config(args)
    suites = sorted(SUITES) if args.suite == "all" else [args.suite]
    reports = [run_verify(s, cfg) for s in suites]
    return [r.to_dict() for r in reports], all(r.passed for r in reports)


def _frange(lo: float, hi: float, step: float) -> list[float]:
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(n)]


def cmd_table(args) -> list[dict]:
    fn = args.fn
    if fn in ("coeffs-t", "coeffs-c"):
        kind = fn[-1]
        return [{"n": n, "coefficients": coefficient_table(kind, n).to_strings()}
                for n in range(args.n_max + 1)]
    if fn == "zeros":
        rows = []
        for k in range(args.k_from, args.k_to + 1):
            rec = zero_refine(zero_seed(args.a_value, args.alpha, k))
            rows.append({"k": k, "kappa": rec.kappa, "seed": rec.seed,
                         "seed_bound": rec.seed_bound, "refined": rec.refined})
        return rows
    rows = []
    for z in _frange(args.z_from, args.z_to, args.z_step):
        cv = evaluate(fn, EvalRequest(args.a_value, z, _order(args.order), args.alpha))
        rows.append({"a": args.a_value, "z": z, "value": cv.value,
                     "error_bound": cv.error_bound, "terms_used": cv.terms_used})
    return rows


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_flags(p, suppress: bool):
    # accepted before or after the command; SUPPRESS keeps a later default
    # from overwriting an earlier explicit value
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=("json", "csv", "pretty"),
                   default=d if suppress else "json")
    p.add_argument("--precision", type=int, default=d, help="working decimal digits")
    p.add_argument("--config", default=d, help="key=value grid file for verify")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gentrig", description=__doc__.split("\n\n")[0])
    _global_flags(parser, False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, **kw):
        p = sub.add_parser(name, **kw)
        _global_flags(p, True)
        return p

    p = add("eval", help="certified asymptotic evaluation")
    p.add_argument("--fn", required=True,
                   choices=("f", "g", "m2", "phi", "x", "ti", "si", "ci", "fresnelS", "fresnelC"))
    p.add_argument("--a", default="0")
    p.add_argument("--z", required=True, help="RE, RE,IM, MOD:ARG, MOD:ARGdeg or MOD:<k>pi")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--order", default="optimal")

    p = add("oracle", help="quadrature reference value")
    p.add_argument("--fn", required=True, choices=("f", "g", "m2", "phi", "x", "ti", "gamma"))
    p.add_argument("--a", default="0")
    p.add_argument("--z", required=True)
    p.add_argument("--alpha", type=float, default=0.0)

    p = add("coeffs", help="exact coefficient polynomials")
    p.add_argument("--kind", required=True, choices=("t", "c", "d"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)

    p = add("zeros", help="positive real zeros of ti")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--k-from", type=int, required=True)
    p.add_argument("--k-to", type=int, required=True)
    p.add_argument("--refine", action="store_true")

    p = add("terminant", help="basic terminant value and bounds")
    p.add_argument("--p", required=True, help="RE or RE,IM")
    p.add_argument("--z", required=True)
    p.add_argument("--bounds-only", action="store_true")

    p = add("verify", help="run verification suites against the oracle")
    p.add_argument("--suite", default="all", choices=sorted(SUITES) + ["all"])
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override one grid entry (repeatable)")

    p = add("table", help="tabulate a function on a grid")
    p.add_argument("--fn", required=True,
                   choices=("f", "g", "m2", "phi", "x", "ti", "si", "ci", "coeffs-t", "coeffs-c", "zeros"))
    p.add_argument("--a", dest="a_value", type=float, default=0.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--z-from", type=float, default=5.0)
    p.add_argument("--z-to", type=float, default=50.0)
    p.add_argument("--z-step", type=float, default=5.0)
    p.add_argument("--order", default="optimal")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--k-from", type=int, default=0)
    p.add_argument("--k-to", type=int, default=10)
    return parser


_COMMANDS = {
    "eval": cmd_eval,
    "oracle": cmd_oracle,
    "coeffs": cmd_coeffs,
    "zeros": cmd_zeros,
    "terminant": cmd_terminant,
    "table": cmd_table,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.precision is not None:
            set_working_dps(args.precision)
        if args.command == "verify":
            rows, ok = cmd_verify(args)
            emit(rows, args.format)
            return EXIT_OK if ok else EXIT_FAIL
        emit(_COMMANDS[args.command](args), args.format)
        return EXIT_OK
    except (UsageError, ConfigError, DomainError, ZeroIndexError, ValueError) as exc:
        print(f"gentrig: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, CoefficientError) as exc:
        print(f"gentrig: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    finally:
        set_working_dps(None)


if __name__ == "__main__":
    sys.exit(main())
