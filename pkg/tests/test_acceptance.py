"""End-to-end acceptance checks, one per criterion.

Each test prints a single ``PASS``/``FAIL criterion k: ...`` line. Run the
file directly (``python tests/test_acceptance.py``) for the summary alone.
"""

import random
import sys
import time
from fractions import Fraction
from math import isqrt, sqrt

import pytest

from cmnorms.analytic import (
    legendre_Q, legendre_Q_closed, phi_closed, phi_count, prop15_check, subgroup_eisenstein_check,
)
from cmnorms.arith import DiscPair, F_closed, F_product, epsilon
from cmnorms.counting import (
    PairCondition, admissible_n, brute_count_S, lemma17_check, prop_count, rho_invariant,
)
from cmnorms.modfunc import PrecisionContext, gamma2_value, gamma3_value, j_value, weber
from cmnorms.norms import (
    MATCH_RESIDUAL, REFERENCE_NORMS, compare, conjugate_values, norm_formula, norm_numeric,
    unit_norm,
)


def report(k, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    print(line, flush=True)
    return ok


def _table_column(pair):
    conjugate_values.cache_clear()
    t0 = time.perf_counter()
    bad = []
    worst = Fraction(0)
    for f, want in REFERENCE_NORMS[pair].items():
        rep = compare(f, DiscPair(*pair))
        worst = max(worst, rep.relative_residual)
        if not (rep.match and rep.formula_norm.factors == want
                and rep.relative_residual < MATCH_RESIDUAL):
            bad.append(f)
    return bad, float(worst), time.perf_counter() - t0


def check_1():
    bad, worst, dt = _table_column((-7, -55))
    ok = not bad and dt < 30
    return report(1, ok, f"(-7,-55) four norms, worst residual {worst:.1e}, {dt:.1f} s"
                  + (f", mismatches {bad}" if bad else ""))


def check_2():
    bad, worst, dt = _table_column((-31, -151))
    ok = not bad and dt < 300
    return report(2, ok, f"(-31,-151) four norms, worst residual {worst:.1e}, {dt:.1f} s"
                  + (f", mismatches {bad}" if bad else ""))


def check_3():
    a, b = DiscPair(-4, -7), DiscPair(-7, -11)
    checks = [
        norm_numeric("j", a).value == 5103 == 3**6 * 7,
        norm_formula("j", a).norm.value == 5103,
        norm_numeric("gamma2", a).value == 27 == abs(12 - (-15)),
        norm_formula("gamma2", a).norm.value == 27,
        norm_numeric("gamma3", b).value == norm_numeric("j", b).value ** 2,
        norm_formula("gamma3", b).norm.value == norm_formula("j", b).norm.value ** 2,
        norm_numeric("gamma3", a).value == norm_numeric("j", a).value,
        norm_formula("gamma3", a).norm.value == norm_formula("j", a).norm.value,
    ]
    return report(3, all(checks), f"small cases {sum(checks)}/{len(checks)} exact")


F_PAIRS = ((-7, -55), (-4, -7), (-31, -151))


def check_4():
    tested = 0
    bad = []
    for pr in F_PAIRS:
        p = DiscPair(*pr)
        for m in range(1, 5001):
            if epsilon(p, m) == -1:
                tested += 1
                if F_product(p, m) != F_closed(p, m).value:
                    bad.append((pr, m))
    return report(4, not bad and tested > 0, f"F product vs closed form at {tested} values"
                  + (f", first mismatch {bad[0]}" if bad else ""))


def check_5():
    p = DiscPair(-7, -55)
    lo, hi = sqrt(p.D), 3 * sqrt(p.D)
    bad = []
    n_values = [n for n in range(isqrt(p.D), int(hi) + 1) if lo < n <= hi]
    for n in n_values:
        pairs = [
            (brute_count_S(p, n), prop_count(p, 1, n)),
            (brute_count_S(p, n, PairCondition.level(2)), prop_count(p, 2, n)),
            (brute_count_S(p, n, PairCondition.gamma_cube()), rho_invariant(p, "gamma2", n)),
            (brute_count_S(p, n, PairCondition.level(2)), rho_invariant(p, "omega", n)),
            (brute_count_S(p, n, PairCondition.leading(2, 1, 1, 2)), rho_invariant(p, "omega2", n)),
        ]
        if any(x != y for x, y in pairs):
            bad.append(n)
    lemma = 0
    for pr in ((-7, -55), (-7, -15)):
        q = DiscPair(*pr)
        for n in admissible_n(q, 3 * isqrt(q.D) + 3):
            lemma += 1
            if not lemma17_check(q, n).ok:
                bad.append((pr, n))
    return report(5, not bad, f"orbit counts at {len(n_values)} n, level 2/4 identities at "
                  f"{lemma} n" + (f", failures {bad[:5]}" if bad else ""))


def check_6(points=100, bits=256, seed=20261015):
    ctx = PrecisionContext(bits=bits)
    mp = ctx.mp
    tol = mp.ldexp(1, 16 - bits)
    rng = random.Random(seed)
    worst = mp.mpf(0)
    for _ in range(points):
        tau = mp.mpc(rng.uniform(-1, 1), rng.uniform(0.3, 2.5))
        j = j_value(tau, ctx)
        scale = max(1, abs(j))
        g2, g3 = gamma2_value(tau, ctx), gamma3_value(tau, ctx)
        errs = [abs(g2**3 - j) / scale, abs(g3**2 - (j - 1728)) / scale]
        w = [weber(v, tau, ctx) for v in ("omega", "omega1", "omega2")]
        e1 = w[0] + w[1] + w[2]
        e2 = w[0] * w[1] + w[0] * w[2] + w[1] * w[2]
        e3 = w[0] * w[1] * w[2]
        # (X+16)^3 - jX = X^3 + 48 X^2 + (768 - j) X + 4096
        errs += [abs(-e1 - 48) / scale, abs(e2 - (768 - j)) / scale, abs(-e3 - 4096) / scale]
        worst = max([worst] + errs)
    ok = worst < tol
    return report(6, ok, f"{points} points at {bits} bits, worst relative error "
                  f"2^{float(mp.log(worst, 2)) if worst else float('-inf'):.1f} (bound 2^{16 - bits})")


def check_7():
    ctx = PrecisionContext(bits=256)
    mp = ctx.mp
    tol = mp.ldexp(1, -64)
    worst = mp.mpf(0)
    for d, h in ((-7, 1), (-15, 2), (-23, 3)):
        conjugate_values.cache_clear()
        worst = max(worst, abs(unit_norm("omega2", d, ctx) - 1),
                    abs(unit_norm("omega", d, ctx) / mp.mpf(2) ** (12 * h) - 1))
    return report(7, worst < tol, f"unit norms for d in (-7,-15,-23), worst relative error "
                  f"{float(worst):.1e}")


def check_8():
    notes = []
    ok = True
    for D, s in ((-4, 2.0), (-16, 2.0), (-15, 1.5)):
        r = prop15_check(D, s, cutoff=2000)
        ok &= r.residual < 1e-4
        notes.append(f"{r.residual:.0e}")
    q_err = max(abs(legendre_Q(k + 1, t) - legendre_Q_closed(k, t))
                for k in (0, 1) for t in (1.1, 2.0, 10.0))
    ok &= q_err < 1e-12
    phi_bad = [(g, c) for g in ("full", "gammacube", "gamma0_2") for c in range(1, 61)
               if phi_count(g, c) != phi_closed(g, c)]
    ok &= not phi_bad
    sub = [subgroup_eisenstein_check(g, complex(0.1, 1.3), 2.0, cutoff=2000)
           for g in ("gammacube", "gamma0_2")]
    ok &= all(r.residual <= max(r.tail_bound, 1e-9) for r in sub)
    return report(8, ok, f"lattice identity residuals {', '.join(notes)}; Q error {q_err:.0e}; "
                  f"phi mismatches {len(phi_bad)}; subgroup residuals "
                  f"{', '.join(f'{r.residual:.0e}' for r in sub)}")


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8]


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{k}" for k in range(1, 9)])
def test_criterion(check, capsys):
    with capsys.disabled():
        ok = check()
    assert ok


if __name__ == "__main__":
    results = [c() for c in CHECKS]
    sys.exit(0 if all(results) else 1)
