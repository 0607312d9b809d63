"""Products of the Weber conjugates: 1 for omega2 and 2^(12h) for omega."""

import argparse

from cmnorms.modfunc import PrecisionContext
from cmnorms.norms import conjugate_values, unit_norm
from cmnorms.quadforms import class_number


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bits", type=int, default=256)
    ap.add_argument("discs", nargs="*", type=int, default=[-7, -15, -23, -31, -39, -47, -55])
    args = ap.parse_args()
    ctx = PrecisionContext(bits=args.bits)
    mp = ctx.mp
    for d in args.discs:
        h = class_number(d)
        e2 = abs(unit_norm("omega2", d, ctx) - 1)
        e1 = abs(unit_norm("omega", d, ctx) / mp.mpf(2) ** (12 * h) - 1)
        print(f"d = {d:4d}  h = {h}  conjugates {len(conjugate_values('omega', d, ctx)):3d}  "
              f"omega2 error {mp.nstr(e2, 3):>9}  omega error {mp.nstr(e1, 3):>9}")


if __name__ == "__main__":
    main()
