"""Reconcile the reference factorization table by both routes and print timings."""

import argparse
import time

from cmnorms.modfunc import PrecisionContext
from cmnorms.norms import REFERENCE_NORMS, paper_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prec-bits", type=int, help="fixed starting precision (default: automatic)")
    args = ap.parse_args()
    ctx = PrecisionContext(bits=args.prec_bits) if args.prec_bits else None
    t0 = time.perf_counter()
    ok = True
    for rep in paper_table(ctx):
        p = rep.pair
        want = REFERENCE_NORMS[(p.d1, p.d2)][rep.function]
        agrees = rep.match and rep.formula_norm.factors == want
        ok &= agrees
        print(f"{rep.function:7s} ({p.d1:4d},{p.d2:5d})  {str(rep.formula_norm):60s} "
              f"{rep.precision_bits:6d} bits  {rep.elapsed_ms:6d} ms  {'ok' if agrees else 'MISMATCH'}")
    print(f"total {time.perf_counter() - t0:.1f} s, {'all reproduced' if ok else 'FAILED'}")
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
