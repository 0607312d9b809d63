"""Compare the divisor-sum counts with the orbit oracle over a range of n."""

import argparse
from math import isqrt

from cmnorms.arith import DiscPair
from cmnorms.counting import (
    PairCondition, admissible_n, brute_count_S, lemma17_check, prop_count, rho_invariant,
    squares_mod,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d1", type=int, default=-7)
    ap.add_argument("--d2", type=int, default=-55)
    ap.add_argument("--factor", type=int, default=3, help="sweep n up to factor * sqrt(D)")
    args = ap.parse_args()
    p = DiscPair(args.d1, args.d2)
    top = args.factor * isqrt(p.D) + args.factor
    weber_ok = all(d % 8 == 1 for d in (p.d1, p.d2))
    bad = 0
    print(" n   level1  oracle  gamma2  oracle" + ("  omega  oracle  omega2  oracle" if weber_ok else ""))
    for n in range(isqrt(p.D) + 1, top + 1):
        row = [prop_count(p, 1, n), brute_count_S(p, n)]
        if all(d % 3 == 2 for d in (p.d1, p.d2)):
            row += [rho_invariant(p, "gamma2", n), brute_count_S(p, n, PairCondition.gamma_cube())]
        else:
            row += ["-", "-"]
        if weber_ok:
            row += [rho_invariant(p, "omega", n), brute_count_S(p, n, PairCondition.level(2)),
                    rho_invariant(p, "omega2", n),
                    brute_count_S(p, n, PairCondition.leading(2, 1, 1, 2))]
        bad += sum(row[i] != row[i + 1] for i in range(0, len(row), 2))
        if any(row[::2]) or any(row[1::2]):
            print(f"{n:3d} " + " ".join(f"{x!s:>7}" for x in row))
    if weber_ok and squares_mod(p, 16):
        failures = [n for n in admissible_n(p, top) if not lemma17_check(p, n).ok]
        print(f"level 2/4 identities: {'all hold' if not failures else failures}")
        bad += len(failures)
    print("mismatches:", bad)
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
