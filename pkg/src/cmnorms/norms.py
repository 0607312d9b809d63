"""Norms of differences of singular moduli, by closed formula and numerically.

For a pair of coprime negative fundamental discriminants and a modular
function f in {j, gamma2, gamma3, omega, omega2} this module computes

* the exact factored value predicted by the divisor-product formulas
  (built from :func:`cmnorms.arith.F_value`), and
* the product of |v1 - v2| over all pairs of conjugates, evaluated with
  q-series at increasing precision until it is recognisably an integer.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Optional

from .arith import DiscPair, F_value, FactoredInteger, product
from .errors import DomainError, PrecisionError, RootError
from .modfunc import PrecisionContext, gamma2_value, gamma3_value, j_value, weber
from .quadforms import (
    class_reps, gamma2_conjugate_points, omega2_conjugate_points,
    omega_conjugate_points,
)

FUNCTIONS = ("j", "gamma2", "gamma3", "omega", "omega2")
TABLE_FUNCTIONS = ("j", "gamma2", "omega", "omega2")
TABLE_PAIRS = ((-7, -55), (-31, -151))

MAX_BITS = 1 << 20
MATCH_RESIDUAL = Fraction(1, 1 << 48)
ACCEPT_RESIDUAL = Fraction(1, 1 << 32)


def _check_function(f: str):
    if f not in FUNCTIONS:
        raise DomainError(f"unknown function {f!r}; expected one of {FUNCTIONS}")


def check_congruences(f: str, d: int):
    """Raise DomainError unless d lies in the class the formula for f needs."""
    _check_function(f)
    if f == "gamma2" and d % 3 != 2:
        raise DomainError(f"gamma2 needs d ≡ 2 mod 3, got {d}")
    if f in ("omega", "omega2") and d % 8 != 1:
        raise DomainError(f"{f} needs d ≡ 1 mod 8, got {d}")


# --------------------------------------------------------------------------
# Conjugates


@lru_cache(maxsize=256)
def conjugate_values(f: str, d: int, ctx: PrecisionContext) -> tuple:
    """Complete list of conjugates of f at the standard CM point of discriminant d."""
    check_congruences(f, d)
    if f == "j":
        return tuple(j_value(g, ctx) for g in class_reps(d))
    if f == "gamma2":
        return tuple(gamma2_value(p, ctx) for p in gamma2_conjugate_points(d))
    if f == "gamma3":
        if d == -4:
            return (ctx.mp.mpc(0),)
        vals = [gamma3_value(g, ctx) for g in class_reps(d)]
        return tuple(vals + [-v for v in vals])
    if f == "omega":
        return tuple(weber("omega2", p, ctx) for p in omega_conjugate_points(d))
    return tuple(weber("omega2", p, ctx) for p in omega2_conjugate_points(d))


# --------------------------------------------------------------------------
# Numeric route


@dataclass(frozen=True)
class NumericNorm:
    value: int
    log2_abs: float
    relative_residual: Fraction
    abs_distance: Fraction
    precision_bits: int

    @property
    def converged(self) -> bool:
        return self.relative_residual < MATCH_RESIDUAL and self.abs_distance < Fraction(1, 4)


def start_bits(pair: DiscPair) -> int:
    """Initial precision from a bound on log2 of the conjugate product."""
    estimate = (math.pi * math.sqrt(pair.D) / math.log(2) + 16) * pair.h1 * pair.h2
    return max(256, 4 * math.ceil(estimate))


def _canonical(pair: DiscPair) -> DiscPair:
    # fixed orientation makes the accumulation order independent of input order
    return pair if pair.d1 >= pair.d2 else pair.swapped()


def _to_fraction(mp, x) -> Fraction:
    m, e = mp.mpf(x).man_exp
    return Fraction(int(m)) * (Fraction(2) ** int(e))


def numeric_product(f: str, pair: DiscPair, ctx: PrecisionContext) -> NumericNorm:
    """Product of |v1 - v2| over conjugates at one fixed precision."""
    pair = _canonical(pair)
    for d in (pair.d1, pair.d2):
        check_congruences(f, d)
    mp = ctx.mp
    v1 = conjugate_values(f, pair.d1, ctx)
    v2 = conjugate_values(f, pair.d2, ctx)
    prod = mp.mpf(1)
    for x in v1:
        for y in v2:
            prod *= abs(x - y)
    if prod == 0:
        raise DomainError("conjugate sets intersect; the norm is zero")
    nearest = int(mp.nint(prod))
    diff = abs(_to_fraction(mp, prod) - nearest)
    resid = diff / _to_fraction(mp, prod)
    return NumericNorm(nearest, float(mp.log(prod, 2)), resid, diff, ctx.bits)


def norm_numeric(f: str, pair: DiscPair, ctx: Optional[PrecisionContext] = None,
                 max_bits: int = MAX_BITS) -> NumericNorm:
    """Numeric norm, doubling precision until the product is clearly integral."""
    _check_function(f)
    bits = ctx.bits if ctx is not None else start_bits(pair)
    base = ctx if ctx is not None else PrecisionContext()
    while True:
        result = numeric_product(f, pair, base.with_bits(bits))
        if result.converged:
            return result
        if bits >= max_bits:
            if result.relative_residual >= ACCEPT_RESIDUAL:
                raise PrecisionError(
                    f"residual {float(result.relative_residual):.3e} at the {max_bits}-bit cap")
            return result
        bits = min(2 * bits, max_bits)


# --------------------------------------------------------------------------
# Formula route


@dataclass(frozen=True)
class FormulaNorm:
    raw: FactoredInteger
    norm: Optional[FactoredInteger]
    exponent: Fraction  # raw = norm ** exponent


def _x_range(D: int, positive_only: bool):
    top = isqrt(D - 1)  # x^2 < D
    return range(1, top + 1) if positive_only else range(-top, top + 1)


def _product_F(pair: DiscPair, modulus: int, positive_only: bool = False) -> FactoredInteger:
    return product(F_value(pair, Fraction(pair.D - x * x, modulus))
                   for x in _x_range(pair.D, positive_only))


def formula_raw(f: str, pair: DiscPair) -> FactoredInteger:
    """Right-hand product of the norm formula for f, including any prefactor."""
    _check_function(f)
    for d in (pair.d1, pair.d2):
        check_congruences(f, d)
    if f in ("j", "gamma3"):
        return _product_F(pair, 4)
    if f == "gamma2":
        e = 6 * pair.h1p * pair.h2p
        pre = FactoredInteger(1, ((3, int(e)),)) if e else FactoredInteger.one()
        assert e.denominator == 1
        return pre * _product_F(pair, 36)
    if f == "omega":
        pre = FactoredInteger(1, ((2, 12 * pair.h1 * pair.h2),))
        return pre * _product_F(pair, 8)
    return _product_F(pair, 16, positive_only=True)


def _exponent(f: str, pair: DiscPair) -> Fraction:
    """raw = norm ** exponent."""
    if f in ("j", "gamma2", "gamma3"):
        return Fraction(8, pair.w1 * pair.w2)
    return Fraction(1)


def gamma3_power(pair: DiscPair) -> int:
    return 1 if -4 in (pair.d1, pair.d2) else 2


def norm_formula(f: str, pair: DiscPair) -> FormulaNorm:
    raw = formula_raw(f, pair)
    k = _exponent(f, pair)
    try:
        norm = raw ** (1 / k)
    except RootError:
        norm = None
    if f == "gamma3":
        e = gamma3_power(pair)
        return FormulaNorm(raw**e, None if norm is None else norm**e, k)
    return FormulaNorm(raw, norm, k)


# --------------------------------------------------------------------------
# Reports


@dataclass
class NormReport:
    function: str
    pair: DiscPair
    formula_raw: Optional[FactoredInteger] = None
    formula_norm: Optional[FactoredInteger] = None
    numeric_log2: Optional[float] = None
    numeric_rounded: Optional[str] = None
    relative_residual: Optional[Fraction] = None
    match: Optional[bool] = None
    precision_bits: Optional[int] = None
    elapsed_ms: Optional[int] = None
    notes: list = field(default_factory=list)

    def to_json(self, timing: bool = True) -> dict:
        """Plain dict in the fixed key order used for machine-readable output."""
        p = self.pair
        formula = None
        shown = self.formula_norm or self.formula_raw
        if shown is not None:
            formula = {"sign": shown.sign, "factors": [[q, e] for q, e in shown.factors]}
        numeric = None
        if self.numeric_rounded is not None:
            numeric = {
                "log2_abs": round(self.numeric_log2, 9),
                "rounded": self.numeric_rounded,
                "relative_residual": f"{float(self.relative_residual):.3e}",
            }
        return {
            "function": self.function,
            "d1": p.d1, "d2": p.d2, "D": p.D,
            "h1": p.h1, "h2": p.h2, "w1": p.w1, "w2": p.w2,
            "formula": formula,
            "numeric": numeric,
            "match": self.match,
            "precision_bits": self.precision_bits,
            "elapsed_ms": self.elapsed_ms if timing else None,
        }


def compare(f: str, pair: DiscPair, ctx: Optional[PrecisionContext] = None,
            method: str = "both") -> NormReport:
    """Run the requested routes and reconcile them."""
    if method not in ("formula", "numeric", "both"):
        raise DomainError(f"unknown method {method!r}")
    t0 = time.perf_counter()
    rep = NormReport(f, pair)
    if method in ("formula", "both"):
        fn = norm_formula(f, pair)
        rep.formula_raw, rep.formula_norm = fn.raw, fn.norm
        if fn.norm is None:
            rep.notes.append(f"no exact root of exponent {fn.exponent} in the raw product")
    if method in ("numeric", "both"):
        num = norm_numeric(f, pair, ctx)
        rep.numeric_log2 = num.log2_abs
        rep.numeric_rounded = str(num.value)
        rep.relative_residual = num.relative_residual
        rep.precision_bits = num.precision_bits
    if method == "both":
        target = rep.formula_norm
        rep.match = (target is not None and num.converged
                     and abs(target.value) == num.value)
    rep.elapsed_ms = round(1000 * (time.perf_counter() - t0))
    return rep


def unit_norm(f: str, d: int, ctx: PrecisionContext):
    """Product of |v| over the conjugates of omega or omega2 at discriminant d."""
    if f not in ("omega", "omega2"):
        raise DomainError("unit norms are defined for omega and omega2")
    mp = ctx.mp
    out = mp.mpf(1)
    for v in conjugate_values(f, d, ctx):
        out *= abs(v)
    return out


def paper_table(ctx: Optional[PrecisionContext] = None, pairs=TABLE_PAIRS) -> list:
    """Both routes for j, gamma2, omega, omega2 on the two reference pairs."""
    out = []
    for d1, d2 in pairs:
        pair = DiscPair(d1, d2)
        for f in TABLE_FUNCTIONS:
            out.append(compare(f, pair, ctx))
    return out


def _fi(*pairs) -> tuple:
    return tuple(pairs)


# Published factorizations for the two reference pairs, as (prime, exponent).
REFERENCE_NORMS = {
    (-7, -55): {
        "j": _fi((3, 26), (5, 6), (19, 3), (47, 2)),
        "gamma2": _fi((3, 14), (5, 2)),
        "omega": _fi((2, 48), (3, 34), (5, 8), (19, 4), (47, 2)),
        "omega2": _fi((3, 8), (5, 2), (19, 1)),
    },
    (-31, -151): {
        "j": _fi((3, 140), (13, 21), (23, 11), (53, 6), (61, 2), (73, 5), (79, 4), (83, 4),
                 (89, 2), (179, 2), (449, 2), (557, 2)),
        "gamma2": _fi((3, 77), (13, 7), (23, 5), (61, 2)),
        "omega": _fi((2, 252), (3, 190), (13, 28), (23, 12), (53, 8), (61, 2), (73, 8), (79, 4),
                     (83, 6), (89, 2), (179, 2), (449, 2), (557, 2)),
        "omega2": _fi((3, 50), (13, 7), (23, 1), (53, 2), (73, 3), (83, 2)),
    },
}
