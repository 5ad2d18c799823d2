"""Command-line front end.

Every command prints one JSON document (or a CSV table of the per-index
values) that embeds the parsed run parameters, so a report can be
reproduced from its own header.  Exit codes: 0 success, 2 bad input,
3 budget exceeded, 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from datetime import datetime, timezone
from fractions import Fraction
from typing import List, Optional

from . import __version__
from .cyclotomic import CycElem, GaloisAuto, SubfieldSpec, degree
from .dynamics import CycPoly, diagonal_fixedness, equivariance_holds, iterate, orbit_degree_analysis
from .errors import BudgetExceeded, DegPeriodError, DetectionError, ReconstructionError
from .expsum import (
    MultiPoly,
    exp_sum_tally,
    kloosterman_degree_formula,
    kloosterman_tally,
    tally_to_elem,
    weil_bound_holds,
)
from .finitefield import irreducibles, is_prime
from .lrs import (
    berlekamp_massey,
    certify_zero_set_order_le2,
    generating_function,
    lfunction_from_sums,
    zero_set_empirical,
)
from .periodicity import (
    analysis_report,
    detect_virtual_period,
    fixedness_profile,
    minpoly_sequence,
    power_sequence_analysis,
)

EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4

_TERM = re.compile(r"([+-]?)([^+-]+)")


class InputError(DegPeriodError, ValueError):
    pass


def parse_elem(text: str, m: int) -> CycElem:
    """Parse ``"1 + 2*zeta - zeta^3/2"``-style expressions, or a serialized JSON element."""
    s = text.strip()
    if s.startswith("{"):
        e = CycElem.from_json(json.loads(s))
        if e.m != m:
            raise InputError(f"element has m={e.m}, expected {m}")
        return e
    s = s.replace(" ", "")
    if not s:
        raise InputError("empty element")
    acc = CycElem(m, [])
    pos = 0
    for match in _TERM.finditer(s):
        if match.start() != pos:
            raise InputError(f"cannot parse {text!r}")
        pos = match.end()
        sign = -1 if match.group(1) == "-" else 1
        body = match.group(2)
        try:
            if "zeta" in body:
                coef, _, rest = body.partition("zeta")
                coef = coef.rstrip("*")
                div = Fraction(1)
                if "/" in rest:
                    rest, _, d = rest.partition("/")
                    div = Fraction(d)
                e = int(rest[1:]) if rest.startswith("^") else 1
                if rest and not rest.startswith("^"):
                    raise ValueError(rest)
                c = Fraction(coef) if coef else Fraction(1)
                acc = acc + CycElem.zeta(m, e) * (sign * c / div)
            else:
                acc = acc + sign * Fraction(body)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse {text!r}: {exc}") from None
    if pos != len(s):
        raise InputError(f"cannot parse {text!r}")
    return acc


def parse_elem_list(text: str, m: int) -> List[CycElem]:
    return [parse_elem(t, m) for t in text.split(",")]


def parse_subfield(text: Optional[str], m: int) -> SubfieldSpec:
    if not text:
        return SubfieldSpec.rationals(m)
    gens = tuple(int(x) for x in text.split(","))
    for g in gens:
        if math.gcd(g, m) != 1:
            raise InputError(f"subgroup generator {g} is not a unit mod {m}")
    return SubfieldSpec(m, gens)


def _elem_json(e, m: int = 1) -> dict:
    return e.to_json() if isinstance(e, CycElem) else CycElem(m, [Fraction(e)]).to_json()


def _elem_row(e: CycElem) -> dict:
    return {f"c{i}": f"{c.numerator}/{c.denominator}" for i, c in enumerate(e.coeffs)}


def _rational_json(rf, m: int = 1) -> dict:
    return {
        "num": [_elem_json(c, m) for c in rf.num],
        "den": [_elem_json(c, m) for c in rf.den],
        "confirmed": rf.confirmed,
    }


def _rec_json(rec, m: int = 1) -> dict:
    return {
        "order": rec.order,
        "coeffs": [_elem_json(c, m) for c in rec.coeffs],
        "initial": [_elem_json(c, m) for c in rec.initial],
        "confirmed": rec.confirmed,
    }


# -- commands ---------------------------------------------------------------------


def cmd_expsum(args) -> dict:
    f = MultiPoly.parse(args.f)
    p = args.p
    ks = [args.k] if args.k else list(range(1, args.kmax + 1))
    K = SubfieldSpec.rationals(p)
    sums, table = [], []
    for k in ks:
        modulus = None
        if args.modulus:
            modulus = [int(x) for x in args.modulus.split(",")]
        elif args.modulus_rank:
            gen = irreducibles(p, k)
            for _ in range(args.modulus_rank):
                next(gen)
            modulus = next(gen)
        tally = exp_sum_tally(f, p, k, budget=args.budget, workers=args.threads, modulus=modulus)
        s = tally_to_elem(tally, p)
        sums.append(s)
        row = {"k": k, "degree": degree(s, K)}
        row.update(_elem_row(s))
        table.append(row)
    degrees = [r["degree"] for r in table]
    report = {"sums": [s.to_json() for s in sums], "table": table}
    if len(degrees) >= 6 and not args.k:
        try:
            cert = detect_virtual_period(degrees)
            report.update(analysis_report(degrees, cert, fixedness_profile(sums, K), start=1))
        except DetectionError as exc:
            report["degrees"] = degrees
            report["certificate"] = None
            report["note"] = str(exc)
    else:
        report["degrees"] = degrees
    if len(sums) >= 2 and not args.k:
        report["recurrence"] = _rec_json(berlekamp_massey(sums), p)
        try:
            report["lfunction"] = _rational_json(lfunction_from_sums(sums), p)
        except ReconstructionError as exc:
            report["lfunction"] = None
            report["lfunction_note"] = str(exc)
    if f.n == 1 and f.terms and p > 2 and f.degree() % p:
        d = f.degree()
        report["weil_bound_ok"] = all(weil_bound_holds(s, d, p, k) for s, k in zip(sums, ks))
    return report


def cmd_kloosterman(args) -> dict:
    p, n, a = args.p, args.n, args.a
    if a % p == 0:
        raise InputError("a must be nonzero mod p")
    K = SubfieldSpec.rationals(p)
    formula = kloosterman_degree_formula(p, n)
    sums, table = [], []
    for k in range(1, args.kmax + 1):
        s = tally_to_elem(kloosterman_tally(n, a, p, k, budget=args.budget, workers=args.threads), p)
        sums.append(s)
        d = degree(s, K)
        applicable = k % p != 0
        row = {
            "k": k,
            "degree": d,
            "formula": formula,
            "formula_applicable": applicable,
            "agrees": (d == formula) if applicable else None,
        }
        row.update(_elem_row(s))
        table.append(row)
    return {"sums": [s.to_json() for s in sums], "table": table, "degrees": [r["degree"] for r in table]}


def cmd_power_seq(args) -> dict:
    m = args.m
    alpha = parse_elem(args.alpha, m)
    K = parse_subfield(args.subgroup, m)
    rep = power_sequence_analysis(alpha, K, args.horizon)
    out = analysis_report(rep.degrees, rep.cert, rep.profile, start=0)
    out["ratio_orders"] = {str(t): e for t, e in rep.orders.items()}
    out["table"] = [{"n": n, "degree": d} for n, d in enumerate(rep.degrees)]
    return out


def cmd_lrs(args) -> dict:
    m = args.m
    terms = parse_elem_list(args.terms, m)
    rec = berlekamp_massey(terms)
    out = {"recurrence": _rec_json(rec, m), "genfun": _rational_json(generating_function(rec), m)}
    if len(terms) >= 8:
        out["zero_set"] = zero_set_empirical(terms).to_json()
    if rec.order <= 2:
        try:
            out["zero_set_certified"] = certify_zero_set_order_le2(rec).to_json()
        except DegPeriodError as exc:
            out["zero_set_certified"] = None
            out["zero_set_note"] = str(exc)
    out["table"] = [dict(n=n, **_elem_row(t)) for n, t in enumerate(terms)]
    return out


def cmd_iterate(args) -> dict:
    m = args.m
    f = CycPoly(m, tuple(parse_elem_list(args.f, m)))
    a = parse_elem(args.a, m)
    K = parse_subfield(args.subgroup, m)
    rec = iterate(f, a, args.nmax, args.size_budget)
    out = {"orbit": rec.to_json()}
    degrees, cert = orbit_degree_analysis(rec, K)
    out.update(analysis_report(degrees, cert, None, start=0))
    if args.sigma:
        sigma = GaloisAuto(m, args.sigma)
        diag = diagonal_fixedness(f, a, sigma, len(rec.points) - 1, args.size_budget)
        out["diagonal"] = {
            "sigma": args.sigma,
            "pattern": "".join("1" if b else "0" for b in diag.pattern),
            "certificate": diag.cert.to_json() if diag.cert else None,
        }
        out["equivariance_ok"] = equivariance_holds(f, a, sigma, rec)
    out["table"] = [dict(n=n, degree=d, **_elem_row(x)) for n, (d, x) in enumerate(zip(degrees, rec.points))]
    return out


def cmd_minpoly_seq(args) -> dict:
    m = args.m
    if args.terms:
        terms = parse_elem_list(args.terms, m)
    elif args.alpha:
        alpha = parse_elem(args.alpha, m)
        terms = [alpha**n for n in range(args.count)]
    else:
        raise InputError("give --terms or --alpha")
    K = parse_subfield(args.subgroup, m)
    rep = minpoly_sequence(terms, K)
    def coeff(c):
        return [_elem_json(x, m) for x in c.recurrence.coeffs]

    return {
        "certificate": rep.cert.to_json(),
        "minpolys": [
            {"n": r.index, "stabilizer": r.stabilizer, "poly": [c.to_json() for c in r.poly]} for r in rep.records
        ],
        "classes": [
            {"residue": c.residue, "coefficient": c.coefficient, "order": c.order, "confirmed": c.confirmed,
             "coeffs": coeff(c)}
            for c in rep.classes
        ],
        "charpoly": [
            {"coefficient": c.coefficient, "order": c.order, "confirmed": c.confirmed, "coeffs": coeff(c)}
            for c in rep.charpoly
        ],
        "table": [{"n": r.index, "degree": r.degree} for r in rep.records],
    }


# -- plumbing -------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    default_budget = int(os.environ.get("DEGPERIOD_BUDGET", 10**8))
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--output", "-o", help="write here instead of standard output")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp for byte-stable output")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--budget", type=int, default=default_budget, help="enumeration budget (elements)")

    parser = _Parser(prog="degperiod", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("expsum", parents=[common], help="S_k(f) for k = 1..kmax")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--f", required=True, help='terms "c:e1,...,en" separated by ";", e.g. "1:3"')
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--k", type=int, help="compute a single k only")
    p.add_argument("--modulus", help="explicit field modulus c0,...,ck (needs --k)")
    p.add_argument("--modulus-rank", type=int, default=0, help="use the n-th irreducible instead of the first")
    p.set_defaults(func=cmd_expsum)

    p = sub.add_parser("kloosterman", parents=[common], help="Kl_k(n, a) for k = 1..kmax")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--kmax", type=int, default=6)
    p.set_defaults(func=cmd_kloosterman)

    p = sub.add_parser("power-seq", parents=[common], help="exact analysis of alpha^n")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--subgroup", help="generators of H_K (default: K = Q)")
    p.add_argument("--horizon", type=int)
    p.set_defaults(func=cmd_power_seq)

    p = sub.add_parser("lrs", parents=[common], help="infer a recurrence from terms")
    p.add_argument("--terms", required=True)
    p.add_argument("--m", type=int, default=1, help="terms live in Q(zeta_m); 1 means Q")
    p.set_defaults(func=cmd_lrs)

    p = sub.add_parser("iterate", parents=[common], help="orbit of a polynomial map")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--f", required=True, help="coefficients, constant term first")
    p.add_argument("--a", required=True)
    p.add_argument("--nmax", "--n-max", type=int, default=12)
    p.add_argument("--size-budget", type=int, default=10**6)
    p.add_argument("--sigma", type=int)
    p.add_argument("--subgroup")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("minpoly-seq", parents=[common], help="minimal-polynomial sequence")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--terms")
    p.add_argument("--alpha")
    p.add_argument("--count", type=int, default=16)
    p.add_argument("--subgroup")
    p.set_defaults(func=cmd_minpoly_seq)
    return parser


def _validate(args):
    if args.command == "expsum":
        if args.modulus and not args.k:
            raise InputError("--modulus needs --k")
        MultiPoly.parse(args.f)
    if getattr(args, "m", None) is not None and args.m < 1:
        raise InputError("--m must be positive")
    for name in ("kmax", "threads", "budget"):
        if getattr(args, name, 1) is not None and getattr(args, name, 1) < 1:
            raise InputError(f"--{name} must be positive")
    if args.command in ("expsum", "kloosterman") and not is_prime(args.p):
        raise InputError(f"p = {args.p} is not prime")
    if args.command == "kloosterman" and args.a % args.p == 0:
        raise InputError("a must be nonzero mod p")


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    rows = report.get("table", [])
    buf = io.StringIO()
    if rows:
        fields = list(dict.fromkeys(k for r in rows for k in r))
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
    return buf.getvalue()


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        report = args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # noqa: BLE001 - exit-code contract
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    run = {k: v for k, v in vars(args).items() if k != "func"}
    report = {"run": run, **report}
    if not args.no_timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    text = render(report, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
