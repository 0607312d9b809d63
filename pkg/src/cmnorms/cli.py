"""Command line front end.

Exit status: 0 success or match, 1 mismatch, 2 invalid input,
3 precision or resource failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .arith import DiscPair, is_fundamental
from .errors import DomainError, PrecisionError, ResourceError, RootError
from .modfunc import PrecisionContext, evaluate

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3
ENV_BITS = "CMNORMS_PREC_BITS"


def _bits(args) -> int | None:
    if getattr(args, "prec_bits", None) is not None:
        return args.prec_bits
    env = os.environ.get(ENV_BITS)
    if env:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"{ENV_BITS} must be an integer, got {env!r}")
    return None


def _ctx(bits):
    return PrecisionContext(bits=bits) if bits is not None else None


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


# --------------------------------------------------------------------------
# forms


def cmd_forms(args) -> int:
    from .quadforms import class_reps

    d = args.disc
    forms = class_reps(d, primitive_only=not args.all)
    h = len(class_reps(d))
    w = {-3: 6, -4: 4}.get(d, 2)
    kind = "fundamental" if is_fundamental(d) else "non-fundamental"
    print(f"discriminant {d} ({kind}): h = {h}, w = {w}")
    for f in forms:
        tag = "" if f.primitive else "  (imprimitive)"
        print(f"  [{f.a}, {f.b}, {f.c}]{tag}")
    return EXIT_OK


# --------------------------------------------------------------------------
# norm / table


def _load_cache(path):
    if path and Path(path).exists():
        return json.loads(Path(path).read_text())
    return {}


def _report_text(rep) -> str:
    p = rep.pair
    lines = [f"{rep.function}: (d1, d2) = ({p.d1}, {p.d2}), D = {p.D}, "
             f"h = ({p.h1}, {p.h2}), w = ({p.w1}, {p.w2})"]
    if rep.formula_raw is not None:
        if rep.formula_norm is not None:
            lines.append(f"  formula : {rep.formula_norm}")
        else:
            lines.append(f"  formula : raw product {rep.formula_raw} (no exact root)")
    if rep.numeric_rounded is not None:
        lines.append(f"  numeric : {rep.numeric_rounded}  (log2 {rep.numeric_log2:.6f}, "
                     f"residual {float(rep.relative_residual):.3e}, {rep.precision_bits} bits)")
    if rep.match is not None:
        lines.append(f"  match   : {'yes' if rep.match else 'NO'}")
    return "\n".join(lines)


def _payload_text(payload) -> str:
    """Text rendering built only from the JSON payload, so cache hits print the same."""
    lines = [f"{payload['function']}: (d1, d2) = ({payload['d1']}, {payload['d2']}), "
             f"D = {payload['D']}, h = ({payload['h1']}, {payload['h2']}), "
             f"w = ({payload['w1']}, {payload['w2']})"]
    form = payload["formula"]
    if form is not None:
        body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in form["factors"]) or "1"
        lines.append(f"  formula : {'-' if form['sign'] < 0 else ''}{body}")
    num = payload["numeric"]
    if num is not None:
        lines.append(f"  numeric : {num['rounded']}  (log2 {num['log2_abs']:.6f}, residual "
                     f"{num['relative_residual']}, {payload['precision_bits']} bits)")
    if payload["match"] is not None:
        lines.append(f"  match   : {'yes' if payload['match'] else 'NO'}")
    if payload["elapsed_ms"] is not None:
        lines.append(f"  time    : {payload['elapsed_ms']} ms")
    return "\n".join(lines)


def _norm_payload(f, pair, bits, method, timing):
    from .norms import compare

    rep = compare(f, pair, _ctx(bits), method)
    return rep, rep.to_json(timing=timing)


def cmd_norm(args) -> int:
    pair = DiscPair(args.d1, args.d2)
    bits = _bits(args)
    key = f"{args.f}|{pair.d1}|{pair.d2}|{bits or 'auto'}|{args.method}"
    cache = _load_cache(args.cache)
    if key in cache:
        t0 = time.perf_counter()
        payload = cache[key]
        if not args.no_timing:
            payload = dict(payload, elapsed_ms=round(1000 * (time.perf_counter() - t0)))
        print(_dump(payload) if args.json else _payload_text(payload))
        return EXIT_OK if payload["match"] in (True, None) else EXIT_MISMATCH
    rep, payload = _norm_payload(args.f, pair, bits, args.method, not args.no_timing)
    if args.cache:
        cache[key] = rep.to_json(timing=False)
        Path(args.cache).write_text(json.dumps(cache, indent=1))
    print(_dump(payload) if args.json else _payload_text(payload))
    return EXIT_MISMATCH if rep.match is False else EXIT_OK


def cmd_table(args) -> int:
    from .norms import REFERENCE_NORMS, TABLE_FUNCTIONS, TABLE_PAIRS, compare

    ok = True
    out = []
    bits = _bits(args)
    for d1, d2 in TABLE_PAIRS:
        pair = DiscPair(d1, d2)
        for f in TABLE_FUNCTIONS:
            rep = compare(f, pair, _ctx(bits))
            expected = REFERENCE_NORMS[(d1, d2)][f]
            agrees = rep.match and rep.formula_norm.factors == expected
            ok &= bool(agrees)
            if args.json:
                out.append(rep.to_json(timing=not args.no_timing))
            else:
                print(_report_text(rep))
                print(f"  table   : {'reproduced' if agrees else 'NOT reproduced'}")
    if args.json:
        print(_dump(out))
    return EXIT_OK if ok else EXIT_MISMATCH


# --------------------------------------------------------------------------
# counting


def cmd_rho(args) -> int:
    from .counting import rho_invariant

    pair = DiscPair(args.d1, args.d2)
    print(rho_invariant(pair, args.f, args.n))
    return EXIT_OK


def cmd_count(args) -> int:
    from .counting import PairCondition, brute_count_S, prop_count, rho_invariant, squares_mod

    pair = DiscPair(args.d1, args.d2)
    if args.level == "gamma3":
        formula = rho_invariant(pair, "gamma2", args.n)
        cond = PairCondition.gamma_cube()
        label = "Gamma^3 with 3 | b"
    else:
        N = int(args.level)
        if not squares_mod(pair, 4 * N):
            raise DomainError(f"d1, d2 must be squares modulo {4 * N} for the level-{N} count")
        formula = prop_count(pair, N, args.n)
        cond = PairCondition.level(N)
        label = f"Gamma0({N}) with {N} | a" if N > 1 else "PSL2(Z)"
    line = f"{label}, n = {args.n}: formula {formula}"
    if args.oracle:
        oracle = brute_count_S(pair, args.n, cond)
        match = oracle == formula
        print(f"{line}, oracle {oracle}, {'match' if match else 'MISMATCH'}")
        return EXIT_OK if match else EXIT_MISMATCH
    print(line)
    return EXIT_OK


# --------------------------------------------------------------------------
# eval


def cmd_eval(args) -> int:
    from .quadforms import HeegnerPoint

    bits = _bits(args) or 256
    ctx = PrecisionContext(bits=bits)
    if args.disc is not None:
        if args.a is None or args.b is None:
            raise DomainError("--disc needs --a and --b")
        tau = HeegnerPoint(args.a, args.b, args.disc)
    elif args.re is not None and args.im is not None:
        tau = ctx.mp.mpc(ctx.mp.mpf(args.re), ctx.mp.mpf(args.im))
    else:
        raise DomainError("give either --a --b --disc or --re --im")
    val = evaluate(args.f, tau, ctx)
    digits = max(15, int(bits * 0.30103) - 2)
    print(ctx.mp.nstr(val, digits))
    return EXIT_OK


# --------------------------------------------------------------------------
# analytic


def cmd_analytic(args) -> int:
    from . import analytic as an

    ok = True
    if args.check == "prop15":
        cases = [(args.disc, args.s)] if args.disc is not None else [(-4, 2.0), (-16, 2.0), (-15, 1.5)]
        for D, s in cases:
            r = an.prop15_check(D, s if s is not None else 2.0, args.cutoff)
            good = r.residual < args.tol
            ok &= good
            print(f"Delta={D} s={s}: lhs {r.lhs:.10f} rhs {r.rhs:.10f} residual {r.residual:.2e} "
                  f"{'ok' if good else 'FAIL'}")
    elif args.check == "q":
        ts = [args.t] if args.t is not None else [1.1, 2.0, 10.0]
        for t in ts:
            for k in (0, 1):
                v = an.legendre_Q(k + 1, t)
                ref = an.legendre_Q_closed(k, t)
                good = abs(v - ref) < 1e-12
                ok &= good
                print(f"Q_{k}({t}) = {v:.15f} closed {ref:.15f} {'ok' if good else 'FAIL'}")
    elif args.check == "phi":
        groups = [args.group] if args.group else list(an.GROUPS)
        for g in groups:
            bad = [c for c in range(1, args.cmax + 1) if an.phi_count(g, c) != an.phi_closed(g, c)]
            ok &= not bad
            print(f"{g}: c <= {args.cmax} {'ok' if not bad else 'FAIL at ' + str(bad)}")
    elif args.check == "subgroup":
        cases = [("gammacube", 2j, 2.0), ("gamma0_2", 1 + 2j, 2.0)]
        for g, z, s in cases:
            r = an.subgroup_eisenstein_check(g, z, s, args.cutoff)
            good = r.residual < args.tol
            ok &= good
            print(f"{g} at {z}, s={s}: direct {r.direct:.10f} predicted {r.predicted:.10f} "
                  f"residual {r.residual:.2e} {'ok' if good else 'FAIL'}")
    return EXIT_OK if ok else EXIT_MISMATCH


# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cmnorms", description="Norms of differences of singular moduli.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("forms", help="reduced forms of a discriminant")
    s.add_argument("--disc", type=int, required=True)
    s.add_argument("--all", action="store_true", help="include imprimitive forms")
    s.set_defaults(func=cmd_forms)

    s = sub.add_parser("norm", help="norm of f(a1) - f(a2)")
    s.add_argument("--f", required=True, choices=["j", "gamma2", "gamma3", "omega", "omega2"])
    s.add_argument("--d1", type=int, required=True)
    s.add_argument("--d2", type=int, required=True)
    s.add_argument("--method", choices=["formula", "numeric", "both"], default="both")
    s.add_argument("--prec-bits", type=int)
    s.add_argument("--json", action="store_true")
    s.add_argument("--no-timing", action="store_true")
    s.add_argument("--cache", help="JSON file caching reports")
    s.set_defaults(func=cmd_norm)

    s = sub.add_parser("table", help="reconcile the reference factorization table")
    s.add_argument("--json", action="store_true")
    s.add_argument("--no-timing", action="store_true")
    s.add_argument("--prec-bits", type=int)
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("rho", help="divisor-sum counting function")
    s.add_argument("--f", required=True, choices=["gamma2", "omega", "omega2"])
    s.add_argument("--d1", type=int, required=True)
    s.add_argument("--d2", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_rho)

    s = sub.add_parser("count", help="orbit count by formula and brute force")
    s.add_argument("--d1", type=int, required=True)
    s.add_argument("--d2", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--level", choices=["1", "2", "3", "4", "gamma3"], default="1")
    s.add_argument("--oracle", action="store_true")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("eval", help="evaluate a modular function at a point")
    s.add_argument("--f", required=True,
                   choices=["eta", "j", "gamma2", "gamma3", "omega", "omega1", "omega2"])
    s.add_argument("--a", type=int)
    s.add_argument("--b", type=int)
    s.add_argument("--disc", type=int)
    s.add_argument("--re", type=str)
    s.add_argument("--im", type=str)
    s.add_argument("--prec-bits", type=int)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("analytic", help="numerical checks of the analytic identities")
    s.add_argument("--check", required=True, choices=["prop15", "q", "phi", "subgroup"])
    s.add_argument("--disc", type=int)
    s.add_argument("--s", type=float)
    s.add_argument("--t", type=float)
    s.add_argument("--group", choices=["full", "gammacube", "gamma0_2"])
    s.add_argument("--cmax", type=int, default=60)
    s.add_argument("--cutoff", type=int, default=2000)
    s.add_argument("--tol", type=float, default=1e-4)
    s.set_defaults(func=cmd_analytic)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except (PrecisionError, ResourceError, RootError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
