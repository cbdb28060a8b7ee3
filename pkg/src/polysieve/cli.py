"""Command-line front end.

    polysieve pm --m 5 --n -1
    polysieve density --m 11 --a 1,1,2,4 --p 5,7 --n 0:20 --oracle
    polysieve sieve-bound --m 11 --a 1,1,2,4 --n 400 --z 11
    polysieve tables --kind omega
    polysieve verify --grid small --seed 0 --out report.txt

Exit codes: 0 ok, 1 usage or domain error, 2 verification failure,
3 degenerate local density.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from . import arith, eisenstein, localdensity, polygonal, sieve, verify

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_DEGENERATE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _range(text: str) -> list[int]:
    """'7', '0:20' (inclusive) or '1,5,9'."""
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return list(range(int(lo), int(hi) + 1))
        return list(_ints(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")


def _real(text: str):
    """An integer, a fraction 'p/q', a float, or a power 'b^e'."""
    try:
        if "^" in text:
            b, e = text.split("^")
            return _real(b) ** int(e)
        if "/" in text:
            return Fraction(text)
        return int(text)
    except ValueError:
        try:
            return float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad number {text!r}")


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _qjson(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def _log10json(x: float) -> dict:
    return {"log10": x}


def _lg(x) -> str:
    x = float(x)
    return f"{math.log10(x):.9f}" if x > 0 else "-inf"


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# --- commands ------------------------------------------------------------------


def cmd_factor(args) -> int:
    f = arith.factorize(args.n)
    body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in f.factors) or "1"
    _emit(args, f"{args.n} = {'-' if f.sign < 0 else ''}{body}\n")
    return EXIT_OK


def cmd_pm(args) -> int:
    _emit(args, f"{polygonal.pm(args.m, args.n)}\n")
    return EXIT_OK


def cmd_represent(args) -> int:
    a = args.a
    d = args.d or (1,) * len(a)
    rows = []
    for n in args.n:
        prob = polygonal.PolygonalProblem(args.m, a, n)
        if args.list:
            for x in polygonal.enumerate_representations(prob, polygonal.SolutionConstraint(d=d)):
                rows.append([n, " ".join(map(str, x))])
        else:
            rows.append([n, polygonal.count_with_divisibility(prob, d)])
    _emit(args, _csv(["n", "solution" if args.list else "count"], rows))
    return EXIT_OK


def cmd_density(args) -> int:
    a = args.a
    d = args.d or (1,) * len(a)
    Hs = args.H if args.H else [polygonal.scaled_H(args.m, a, n) for n in args.n]
    header = ["m", "a", "d", "p", "H", "r", "density"] + (["oracle", "oracle_k"] if args.oracle else [])
    rows = []
    for p in args.p:
        for H in Hs:
            P = localdensity.local_params(args.m, a, d, p, H)
            val = localdensity.density_general(args.m, a, d, p, H)
            row = [args.m, " ".join(map(str, a)), " ".join(map(str, d)), p, H, P.r, _q(val)]
            if args.oracle:
                o = localdensity.density_oracle(args.m, a, d, p, H)
                row += [_q(o.value), o.k if o.stable else f"{o.k}?"]
            rows.append(row)
    _emit(args, _csv(header, rows))
    return EXIT_OK


def cmd_eisenstein(args) -> int:
    a = args.a
    d = args.d or (1,) * len(a)
    ctx = eisenstein.eisenstein_context(args.m, a, d)
    rows = []
    for n in args.n:
        H = polygonal.scaled_H(args.m, a, n)
        h = Fraction(H, 4)
        aE = eisenstein.eisenstein_coefficient(ctx, h)
        r = polygonal.count_with_divisibility(polygonal.PolygonalProblem(args.m, a, n), d)
        res = r - aE
        rows.append(
            [
                n,
                _q(h),
                r,
                _lg(aE.a),
                _lg(aE.b),
                1 if res.a > 0 else -1 if res.b < 0 else 0,
                _lg(max(abs(res.a), abs(res.b))),
                f"{eisenstein.cusp_bound(args.m, h, eisenstein.minimal_sieve_level(d)):.6f}",
            ]
        )
    header = ["n", "h", "count", "aE_lo_log10", "aE_hi_log10", "residual_sign", "residual_abs_log10", "cusp_bound_log10"]
    _emit(args, _csv(header, rows))
    return EXIT_OK


def cmd_sieve_bound(args) -> int:
    m, a, z = args.m, args.a, args.z
    if args.n is not None:
        H = polygonal.scaled_H(m, a, args.n)
    elif args.h is not None:
        H = 4 * Fraction(args.h)
        if H.denominator != 1:
            raise arith.DomainError("h must lie in (1/4)Z")
        H = int(H)
    else:
        raise arith.DomainError("one of --n or --h is required")
    D = args.D if args.D is not None else z**27
    cfg = sieve.SieveConfig(D, args.beta, z)
    h = Fraction(H, 4)
    sums = {
        "sumDz": _qjson(sieve.sum_Dz(cfg, m, a, H)),
        "sumPrime": _qjson(sieve.sum_prime(cfg, m, a, H)),
        "sumMT": _qjson(sieve.sum_MT(cfg, m, a, H)),
    }
    try:
        lb = sieve.S_lower_bound(m, a, h, z, D)
        bound = {
            "mainTerm": _log10json(lb.log10_main),
            "cuspTerm": _log10json(lb.log10_cusp),
            "Slower": {"sign": 1 if lb.positive else -1, "log10": lb.log10_abs},
        }
    except arith.DomainError as exc:
        bound = {k: {"error": str(exc)} for k in ("mainTerm", "cuspTerm", "Slower")}
    try:
        C = _log10json(math.log10(sieve.C_beta(cfg)))
    except arith.DomainError as exc:
        C = {"error": str(exc)}
    out = {
        "m": m,
        "a": list(a),
        "H": H,
        "z": z if isinstance(z, int) else str(z),
        "D_log10": sieve._log(D) / math.log(10),
        "beta": args.beta,
        **sums,
        "Cbeta": C,
        "mainTerm": bound["mainTerm"],
        "cuspTerm": bound["cuspTerm"],
        "Sexact": sieve.S_exact(m, a, args.n, z) if args.n is not None else None,
        "Slower": bound["Slower"],
    }
    _emit(args, json.dumps(out, indent=2, sort_keys=False) + "\n")
    return EXIT_OK


def cmd_tables(args) -> int:
    if args.kind == "omega":
        rows = [
            [
                r.case,
                r.row,
                r.p,
                str(r.claimed),
                "" if r.computed_max is None else _q(r.computed_max),
                "" if r.computed_max is None else f"{float(r.computed_max):.6f}",
                r.samples,
                r.degenerate,
                "ok" if r.ok else "VIOLATED",
            ]
            for r in localdensity.omega_bound_tables()
        ]
        _emit(args, _csv(["case", "R", "p", "claimed", "max", "max_decimal", "samples", "degenerate", "status"], rows))
        return EXIT_OK if all(r[-1] == "ok" for r in rows) else EXIT_VERIFY
    n, bad = localdensity.closed_form_discrepancies()
    rows = [[x.source, x.label, x.m, " ".join(map(str, x.a)), " ".join(map(str, x.d)), x.p, x.H, _q(x.claimed), _q(x.general)] for x in bad]
    text = f"# {n} comparisons, {len(bad)} discrepancies\n" + _csv(["source", "label", "m", "a", "d", "p", "H", "claimed", "general"], rows)
    _emit(args, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_suite(args.grid, args.seed)
    lines = [f"# polysieve verify --grid {args.grid} --seed {args.seed}"]
    # timings vary run to run, so they go to stderr only
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
        print(f"  {r.seconds:7.1f}s  {r.name}", file=sys.stderr)
    ok = all(r.passed for r in results)
    lines.append(f"# {sum(r.passed for r in results)}/{len(results)} checks passed")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_universality(args) -> int:
    S = set(args.S) if args.S else None
    flags = polygonal.universality_scan(args.m, args.a, args.N, args.L, S)
    rows = [[n, int(f)] for n, f in enumerate(flags)]
    missing = [n for n, f in enumerate(flags) if not f]
    text = _csv(["n", "represented"], rows)
    text += f"# first failure: {missing[0] if missing else 'none'}\n"
    _emit(args, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="polysieve", description="Polygonal sums with almost-prime inputs.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--out", help="write to this file instead of stdout")
        return p

    p = add("factor", cmd_factor, "factor an integer")
    p.add_argument("--n", type=int, required=True)

    p = add("pm", cmd_pm, "the generalized m-gonal number p_m(n)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("represent", cmd_represent, "count or list representations")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=_ints, required=True)
    p.add_argument("--n", type=_range, required=True)
    p.add_argument("--d", type=_ints)
    p.add_argument("--list", action="store_true")

    p = add("density", cmd_density, "local densities as exact rationals (CSV)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=_ints, required=True)
    p.add_argument("--d", type=_ints)
    p.add_argument("--p", type=_ints, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=_range)
    g.add_argument("--H", type=_range, help="scaled targets H = 4h directly")
    p.add_argument("--oracle", action="store_true", help="add the counting-oracle column")

    p = add("eisenstein", cmd_eisenstein, "Eisenstein coefficients next to exact counts (CSV)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=_ints, required=True)
    p.add_argument("--d", type=_ints)
    p.add_argument("--n", type=_range, required=True)

    p = add("sieve-bound", cmd_sieve_bound, "sieve sums and the S(A,z) lower bound (JSON)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=_ints, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--h", type=_real)
    p.add_argument("--z", type=_real, required=True)
    p.add_argument("--D", type=_real, help="sieve level (default z^27)")
    p.add_argument("--beta", type=_real, default=10)

    p = add("tables", cmd_tables, "Omega(p)/p bound tables or the closed-form discrepancy report (CSV)")
    p.add_argument("--kind", choices=("omega", "localden"), default="omega")

    p = add("verify", cmd_verify, "run the invariant suite")
    p.add_argument("--grid", choices=("small", "full"), default="small")
    p.add_argument("--seed", type=int, default=0)

    p = add("universality-scan", cmd_universality, "which n <= N have P_{L,S} representations (CSV)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=_ints, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--L", type=int)
    p.add_argument("--S", type=_ints)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except localdensity.DegenerateDensity as exc:
        print(f"polysieve: degenerate local density: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except arith.DomainError as exc:
        print(f"polysieve: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
