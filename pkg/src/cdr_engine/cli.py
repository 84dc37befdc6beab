"""Command line front end: ``cdr-engine {char,ope,transform,monoid,selftest}``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .character import compare
from .coordinates import ConstraintViolation, CoordTransform1, verify_tilde_ope, verify_virasoro_invariance
from .modes import StateParseError, format_state, parse_state, state_to_json
from .monoid import (
    MonoidHom,
    NotPointed,
    etale_check,
    groupify,
    is_saturated,
    membership,
    parse_monoid,
    smoothness_check,
)
from .selftest import DEFAULT_SEED, run_all
from .series import TruncatedSeries1
from .vertex import ope_singular

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """The options shared by all subcommands, after validation."""

    command: str
    N: Optional[int] = None
    r_max: Optional[int] = None
    order: Optional[int] = None
    cutoff: Optional[int] = None
    format: str = "text"
    out: Optional[str] = None
    seed: int = DEFAULT_SEED

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        cfg = cls(args.command, getattr(args, "N", None), getattr(args, "r_max", None),
                  getattr(args, "order", None), getattr(args, "cutoff", None),
                  args.format, args.out, args.seed)
        for name in ("N", "r_max", "order"):
            v = getattr(cfg, name)
            if v is not None and v < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be at least 1")
        return cfg


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = argparse.ArgumentParser(prog="cdr-engine", description="Exact chiral de Rham computations.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("char", parents=[common], help="length formula versus generator oracle")
    c.add_argument("--N", type=int, required=True)
    c.add_argument("--r-max", type=int, default=3)
    c.add_argument("--cutoff", type=_positive, default=None, help="starting gamma_0 cutoff (default N+2)")

    o = sub.add_parser("ope", parents=[common], help="singular part of the OPE of two states")
    o.add_argument("a")
    o.add_argument("b")
    o.add_argument("--cutoff", type=_nonneg, default=None)

    t = sub.add_parser("transform", parents=[common], help="verify a one-variable coordinate change")
    t.add_argument("--f", required=True, help="polynomial in g, e.g. 'g+g^2'")
    t.add_argument("--order", type=_positive, default=8)
    t.add_argument("--cutoff", type=_positive, default=8)
    t.add_argument("--margin", type=_nonneg, default=4)
    t.add_argument("--variant", choices=["log", "plain"], default="log")

    m = sub.add_parser("monoid", parents=[common], help="monoid verdicts")
    m.add_argument("action", choices=["etale", "smooth", "saturated", "groupify", "member"])
    m.add_argument("--gens", required=True, help="e.g. '(3,0);(0,3);(1,1)', 'N2' or 'A3'")
    m.add_argument("--into", help="target monoid for etale")
    m.add_argument("--matrix", help="rows separated by ';', e.g. '1,0;0,1' (default identity)")
    m.add_argument("--char", type=_nonneg, default=0)
    m.add_argument("--vector", help="vector for member, e.g. '(4,1)'")

    s = sub.add_parser("selftest", parents=[common], help="run the seeded invariant suite")
    s.add_argument("--debug-corrupt-relation", action="store_true",
                   help="flip one expected bracket (negative control)")

    return p


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def parse_polynomial(text: str, order: int) -> TruncatedSeries1:
    """Parse a polynomial in ``g`` with rational coefficients."""
    import sympy

    g = sympy.Symbol("g")
    try:
        expr = sympy.parse_expr(text.replace("^", "**"), local_dict={"g": g}, evaluate=True)
        poly = sympy.Poly(sympy.expand(expr), g)
    except Exception as exc:  # sympy raises a zoo of exception types
        raise UsageError(f"cannot read {text!r} as a polynomial in g: {exc}") from None
    coeffs = {}
    for (k,), c in poly.terms():
        c = sympy.Rational(c)
        if k <= order:
            coeffs[k] = Fraction(int(c.p), int(c.q))
    return TruncatedSeries1(coeffs, order)


def _parse_vector(text: str):
    m = re.fullmatch(r"\s*\(?\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)?\s*", text or "")
    if not m:
        raise UsageError(f"bad vector {text!r}")
    return tuple(int(x) for x in m.group(1).split(","))


def _parse_matrix(text: str):
    return [list(_parse_vector(row)) for row in text.split(";") if row.strip()]


# -- subcommands -----------------------------------------------------------------------

def cmd_char(args) -> int:
    if args.N < 2:
        raise UsageError("--N must be at least 2")
    if args.r_max < 1:
        raise UsageError("--r-max must be at least 1")
    report = compare(args.N, args.r_max, args.cutoff)
    text = {"json": lambda: report.dumps() + "\n", "csv": report.to_csv, "text": report.to_text}[args.format]()
    _emit(text, args.out)
    return OK if report.stable else FAILED


def cmd_ope(args) -> int:
    try:
        a, b = parse_state(args.a), parse_state(args.b)
    except StateParseError as exc:
        raise UsageError(str(exc)) from None
    ope = ope_singular(a, b, args.cutoff)
    poles = ope.nonzero()
    if args.format == "json":
        text = _json({"a": state_to_json(a), "b": state_to_json(b), "poles": ope.to_json()})
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pole_order", "state"])
        for n, v in poles.items():
            w.writerow([n + 1, format_state(v)])
        text = buf.getvalue()
    else:
        lines = [f"(z-w)^-{n + 1}: {format_state(v)}" for n, v in poles.items()]
        text = "\n".join(lines or ["regular (no singular terms)"]) + "\n"
    _emit(text, args.out)
    return OK


def cmd_transform(args) -> int:
    if args.format == "csv":
        raise UsageError("transform reports are json or text")
    f = parse_polynomial(args.f, args.order)
    try:
        t = CoordTransform1(f)
    except ConstraintViolation as exc:
        raise UsageError(f"rejected: {exc}") from None
    ope = verify_tilde_ope(t, args.cutoff, args.margin, args.variant)
    vir = verify_virasoro_invariance(t, args.cutoff, args.margin, args.variant)
    passed = ope.passed and vir.passed and vir.qg_passed
    if args.format == "json":
        text = _json({"f": args.f, "order": args.order, "variant": args.variant, "passed": passed,
                      "tilde_ope": ope.to_json(), "virasoro": vir.to_json()})
    else:
        lines = [f"f = {args.f}  (order {args.order}, gamma_0 cutoff {args.cutoff}, {args.variant} fields)"]
        for c in ope.checks:
            lines.append(f"  {'ok  ' if c.ok else 'FAIL'} {c.pair[0]}~ x {c.pair[1]}~")
            lines += [f"       pole {n + 1}: {d}" for n, d in c.mismatches]
        lines.append(f"  {'ok  ' if vir.passed else 'FAIL'} L~ = L")
        lines.append(f"  {'ok  ' if vir.qg_passed else 'FAIL'} Q~_(0) G~ = L")
        lines.append("PASS" if passed else "FAIL")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return OK if passed else FAILED


def cmd_monoid(args) -> int:
    if args.format == "csv":
        raise UsageError("monoid verdicts are json or text")
    try:
        Q = parse_monoid(args.gens)
        if args.action == "etale":
            target = parse_monoid(args.into) if args.into else Q
            d_s, d_t = Q.rank_ambient, target.rank_ambient
            M = _parse_matrix(args.matrix) if args.matrix else [[int(i == j) for j in range(d_s)] for i in range(d_t)]
            verdict = etale_check(MonoidHom(Q, target, M), args.char)
            data, summary = verdict.to_json(), (
                f"{'etale' if verdict.etale else 'not etale'}: kernel {verdict.kernel}, cokernel {verdict.cokernel}")
        elif args.action == "smooth":
            verdict = smoothness_check(Q, args.char)
            data, summary = verdict.to_json(), (
                f"{'smooth' if verdict.smooth else 'not smooth'}: Q^gp = {verdict.group}, char {args.char}")
        elif args.action == "saturated":
            verdict = is_saturated(Q)
            data = verdict.to_json()
            summary = "saturated" if verdict.saturated else \
                f"not saturated: {verdict.counterexample} not in Q but {verdict.multiple} times it is"
        elif args.action == "groupify":
            gp = groupify(Q)
            data, summary = gp.to_json(), f"Q^gp = {gp.group}, basis {gp.basis}, Z^d/Q^gp = {gp.cokernel}"
        else:
            v = _parse_vector(args.vector)
            ok, wit = membership(Q, v)
            data = {"vector": list(v), "member": ok, "witness": list(wit) if wit else None,
                    "generators": [list(g) for g in Q.generators]}
            summary = f"{v} {'in' if ok else 'not in'} Q" + (f", counts {wit}" if ok else "")
    except (ValueError, NotPointed) as exc:
        raise UsageError(str(exc)) from None
    _emit(_json(data) if args.format == "json" else summary + "\n", args.out)
    return OK


def cmd_selftest(args) -> int:
    results = run_all(args.seed, args.debug_corrupt_relation)
    ok = all(r.passed for r in results)
    if args.format == "json":
        text = _json({"seed": args.seed, "passed": ok,
                      "checks": [{"name": r.name, "passed": r.passed, "cases": r.cases, "detail": r.detail}
                                 for r in results]})
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "passed", "cases"])
        for r in results:
            w.writerow([r.name, r.passed, r.cases])
        text = buf.getvalue()
    else:
        text = "\n".join([f"seed {args.seed}"] + [r.line() for r in results] + ["PASS" if ok else "FAIL"]) + "\n"
    _emit(text, args.out)
    return OK if ok else FAILED


COMMANDS = {"char": cmd_char, "ope": cmd_ope, "transform": cmd_transform,
            "monoid": cmd_monoid, "selftest": cmd_selftest}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        RunConfig.from_args(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"cdr-engine {args.command}: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
