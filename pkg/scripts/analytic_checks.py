"""Lattice-sum identities, Legendre Q accuracy and the phi coefficient counts."""

import argparse

from cmnorms.analytic import (
    legendre_Q, legendre_Q_closed, phi_closed, phi_count, prop15_check, subgroup_eisenstein_check,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cutoff", type=int, default=2000)
    args = ap.parse_args()
    for D, s in ((-3, 2.0), (-4, 2.0), (-16, 2.0), (-15, 1.5), (-20, 2.0), (-23, 1.5)):
        r = prop15_check(D, s, cutoff=args.cutoff)
        print(f"Delta {D:4d} s {s}: lhs {r.lhs:.10f} rhs {r.rhs:.10f} "
              f"residual {r.residual:.1e} (tail bound {r.tail_bound:.1e})")
    for k in (0, 1):
        for t in (1.1, 2.0, 10.0):
            print(f"Q_{k}({t}) error {abs(legendre_Q(k + 1, t) - legendre_Q_closed(k, t)):.1e}")
    for g in ("full", "gammacube", "gamma0_2"):
        bad = [c for c in range(1, 61) if phi_count(g, c) != phi_closed(g, c)]
        print(f"phi {g}: {'closed form holds for c <= 60' if not bad else bad}")
    for g in ("gammacube", "gamma0_2"):
        r = subgroup_eisenstein_check(g, complex(0.1, 1.3), 2.0, cutoff=args.cutoff)
        print(f"{g}: direct {r.direct:.10f} predicted {r.predicted:.10f} residual {r.residual:.1e}")


if __name__ == "__main__":
    main()
