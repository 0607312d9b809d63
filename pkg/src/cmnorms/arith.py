"""Exact arithmetic kernel: Kronecker symbol, factorization, genus character, F.

Everything here works on Python integers and ``fractions.Fraction``; there is
no floating point anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Optional

import sympy

from .errors import DomainError, ResourceError, RootError

DEFAULT_DIGIT_CAP = 120


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for arbitrary integers a, n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = (n & -n).bit_length() - 1
    n >>= v
    if v % 2 == 1 and a % 8 in (3, 5):
        result = -result
    # n is now odd and positive: Jacobi symbol with a possibly negative
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    return all(e == 1 for e in sympy.factorint(n).values())


def is_fundamental(d: int) -> bool:
    """True iff d is a negative fundamental discriminant."""
    if d >= 0:
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


# --------------------------------------------------------------------------
# Factored integers


@dataclass(frozen=True)
class FactoredInteger:
    """Signed integer kept as ``sign * prod(p**e)``."""

    sign: int
    factors: tuple = ()

    def __post_init__(self):
        factors = tuple((int(p), int(e)) for p, e in self.factors)
        object.__setattr__(self, "factors", factors)
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign}")
        if self.sign == 0 and factors:
            raise ValueError("zero carries no prime factors")
        last = 1
        for p, e in factors:
            if p <= last or e <= 0 or not sympy.isprime(p):
                raise ValueError(f"malformed factor list {factors}")
            last = p

    @classmethod
    def one(cls) -> "FactoredInteger":
        return cls(1, ())

    @classmethod
    def from_dict(cls, sign: int, exps: dict) -> "FactoredInteger":
        return cls(sign, tuple(sorted((p, e) for p, e in exps.items() if e)))

    @property
    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p**e
        return v

    def as_dict(self) -> dict:
        return dict(self.factors)

    def primes(self) -> list:
        return [p for p, _ in self.factors]

    def __int__(self):
        return self.value

    def __mul__(self, other: "FactoredInteger") -> "FactoredInteger":
        if not isinstance(other, FactoredInteger):
            return NotImplemented
        if self.sign == 0 or other.sign == 0:
            return FactoredInteger(0)
        exps = self.as_dict()
        for p, e in other.factors:
            exps[p] = exps.get(p, 0) + e
        return FactoredInteger.from_dict(self.sign * other.sign, exps)

    def __pow__(self, k) -> "FactoredInteger":
        """Raise to a nonnegative rational power; RootError if not exact."""
        k = Fraction(k)
        if k < 0:
            raise DomainError("negative powers leave the integers")
        if self.sign == 0:
            return FactoredInteger(0) if k else FactoredInteger.one()
        exps = {}
        for p, e in self.factors:
            new = e * k
            if new.denominator != 1:
                raise RootError(f"{self} has no exact power {k}")
            exps[p] = int(new)
        sign = self.sign
        if sign < 0:
            if k.denominator % 2 == 0:
                raise RootError("even root of a negative number")
            if k.numerator % 2 == 0:
                sign = 1
        return FactoredInteger.from_dict(sign, exps)

    def __str__(self):
        if self.sign == 0:
            return "0"
        body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)
        if not body:
            body = "1"
        return ("-" if self.sign < 0 else "") + body


def product(items: Iterable[FactoredInteger]) -> FactoredInteger:
    out = FactoredInteger.one()
    for x in items:
        out = out * x
    return out


def factorize(n: int, digit_cap: int = DEFAULT_DIGIT_CAP) -> FactoredInteger:
    """Exact factorization of a nonzero integer."""
    if n == 0:
        raise DomainError("cannot factor 0")
    sign = 1 if n > 0 else -1
    n = abs(n)
    if n == 1:
        return FactoredInteger(sign)
    if len(str(n)) > digit_cap:
        # small factors are still cheap; only the cofactor is capped
        exps = sympy.factorint(n, limit=10**6)
        rest = [p for p in exps if not sympy.isprime(p)]
        if rest:
            raise ResourceError(f"{len(str(n))}-digit input exceeds the {digit_cap}-digit cap")
        return FactoredInteger.from_dict(sign, exps)
    return FactoredInteger.from_dict(sign, sympy.factorint(n))


def divisors(n: int) -> list:
    return sorted(sympy.divisors(n))


# --------------------------------------------------------------------------
# Discriminant pairs and the genus character


@dataclass(frozen=True)
class DiscPair:
    """Coprime pair of negative fundamental discriminants."""

    d1: int
    d2: int
    D: int = field(init=False)
    w1: int = field(init=False)
    w2: int = field(init=False)
    h1: int = field(init=False)
    h2: int = field(init=False)
    h1p: Fraction = field(init=False)
    h2p: Fraction = field(init=False)

    def __post_init__(self):
        from .quadforms import class_number, unit_count

        for d in (self.d1, self.d2):
            if not is_fundamental(d):
                raise DomainError(f"{d} is not a negative fundamental discriminant")
        if gcd(self.d1, self.d2) != 1:
            raise DomainError(f"discriminants {self.d1}, {self.d2} are not coprime")
        w1, w2 = unit_count(self.d1), unit_count(self.d2)
        h1, h2 = class_number(self.d1), class_number(self.d2)
        for name, val in (("D", self.d1 * self.d2), ("w1", w1), ("w2", w2), ("h1", h1),
                          ("h2", h2), ("h1p", Fraction(2 * h1, w1)), ("h2p", Fraction(2 * h2, w2))):
            object.__setattr__(self, name, val)

    def swapped(self) -> "DiscPair":
        return DiscPair(self.d2, self.d1)


def epsilon_prime(pair: DiscPair, p: int) -> int:
    """Genus character on a prime p with (D/p) != -1."""
    if kronecker(pair.D, p) == -1:
        raise DomainError(f"epsilon undefined at {p}: (D/p) = -1 for D = {pair.D}")
    e1 = kronecker(pair.d1, p) if gcd(p, pair.d1) == 1 else None
    e2 = kronecker(pair.d2, p) if gcd(p, pair.d2) == 1 else None
    if e1 is not None and e2 is not None:
        assert e1 == e2, (pair, p, e1, e2)
    return e1 if e1 is not None else e2


def epsilon(pair: DiscPair, m: int) -> Optional[int]:
    """Multiplicative extension of the genus character; None off its domain."""
    if m <= 0:
        return None
    val = 1
    for p, a in factorize(m).factors:
        if kronecker(pair.D, p) == -1:
            return None
        if a % 2:
            val *= epsilon_prime(pair, p)
    return val


def _as_positive_integer(m) -> Optional[int]:
    m = Fraction(m)
    if m.denominator != 1 or m <= 0:
        return None
    return m.numerator


def F_product(pair: DiscPair, m) -> Fraction:
    """F(m) straight from the divisor-pair product, as an exact rational."""
    n = _as_positive_integer(m)
    if n is None or epsilon(pair, n) is None:
        return Fraction(1)
    out = Fraction(1)
    for k in divisors(n):
        e = epsilon(pair, n // k)
        out *= Fraction(k) ** e
    if epsilon(pair, n) == -1:
        assert out.denominator == 1, (pair, n, out)
    return out


def F_closed(pair: DiscPair, m: int) -> FactoredInteger:
    """Prime-power closed form of F(m), valid when epsilon(m) = -1."""
    n = _as_positive_integer(m)
    if n is None or epsilon(pair, n) != -1:
        raise DomainError(f"closed form needs epsilon(m) = -1, m = {m}")
    odd_inert = []
    split_exponent = 1
    for p, e in factorize(n).factors:
        if epsilon_prime(pair, p) == 1:
            split_exponent *= e + 1
        elif e % 2:
            odd_inert.append((p, e))
    if len(odd_inert) != 1:
        return FactoredInteger.one()
    (p, e), = odd_inert
    return FactoredInteger(1, ((p, (e + 1) // 2 * split_exponent),))


def F_value(pair: DiscPair, m) -> FactoredInteger:
    """F(m) for the norm products: closed form when epsilon(m) = -1, else 1.

    On every argument the norm formulas use, an integral m has epsilon(m) = -1;
    anything else is rejected loudly rather than silently mapped to 1.
    """
    n = _as_positive_integer(m)
    if n is None:
        return FactoredInteger.one()
    eps = epsilon(pair, n)
    if eps is None:
        return FactoredInteger.one()
    if eps != -1:
        raise AssertionError(f"epsilon({n}) = +1 inside a norm product for {pair}")
    return F_closed(pair, n)


def epsilon_divisor_sum(pair: DiscPair, m: int) -> int:
    """Sum of epsilon(d) over the positive divisors d of m (multiplicative)."""
    if m <= 0:
        raise DomainError("divisor sums need m > 0")
    total = 1
    for p, a in factorize(m).factors:
        e = epsilon_prime(pair, p)
        total *= sum(e**k for k in range(a + 1))
    return total


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return int(sympy.totient(n))


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n
