"""Positive definite binary quadratic forms and their Heegner points.

Forms are stored as ``(a, b, c)`` meaning ``a x^2 + b x y + c y^2`` and are
identified with the root ``tau = (-b + sqrt(d)) / (2a)`` in the upper half
plane.  A matrix ``M = (x y; z w)`` acts on points by Moebius transformation;
:func:`apply_map` returns the form whose root is ``M tau``.

The Galois-conjugate constructions below are written for class
representatives handed over in stored orientation ``(a, b, c)``.  The
classical formulas are phrased for forms written ``[a, -b, c]``, so each of
them substitutes ``b -> -b`` once, internally; every function that does so
says it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

from .arith import is_fundamental
from .errors import DomainError


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.disc >= 0:
            raise DomainError(f"{tuple(self)} is not positive definite")

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    @property
    def point(self) -> "HeegnerPoint":
        return HeegnerPoint(self.a, self.b, self.disc)

    def __repr__(self):
        return f"QuadForm({self.a}, {self.b}, {self.c})"


@dataclass(frozen=True, order=True)
class HeegnerPoint:
    """The point ``(-b + sqrt(d)) / (2a)``."""

    a: int
    b: int
    d: int

    def __post_init__(self):
        if self.a <= 0 or self.d >= 0:
            raise DomainError(f"bad Heegner point data {(self.a, self.b, self.d)}")
        if (self.b * self.b - self.d) % (4 * self.a):
            raise DomainError(f"b^2 != d mod 4a for {(self.a, self.b, self.d)}")

    @property
    def c(self) -> int:
        return (self.b * self.b - self.d) // (4 * self.a)

    @property
    def form(self) -> QuadForm:
        return QuadForm(self.a, self.b, self.c)

    def __complex__(self):
        return complex(-self.b, abs(self.d) ** 0.5) / (2 * self.a)

    def __repr__(self):
        return f"HeegnerPoint(({-self.b}+sqrt({self.d}))/{2 * self.a})"


@dataclass(frozen=True)
class UnimodularMap:
    """Element of PSL2(Z); equality is projective."""

    x: int
    y: int
    z: int
    w: int

    def __post_init__(self):
        if self.x * self.w - self.y * self.z != 1:
            raise DomainError(f"determinant of {self.entries} is not 1")

    @property
    def entries(self) -> tuple:
        return (self.x, self.y, self.z, self.w)

    def canonical(self) -> tuple:
        e = self.entries
        first = next(v for v in e if v)
        return e if first > 0 else tuple(-v for v in e)

    def __eq__(self, other):
        return isinstance(other, UnimodularMap) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __matmul__(self, other: "UnimodularMap") -> "UnimodularMap":
        x, y, z, w = self.entries
        p, q, r, s = other.entries
        return UnimodularMap(x * p + y * r, x * q + y * s, z * p + w * r, z * q + w * s)

    def inverse(self) -> "UnimodularMap":
        return UnimodularMap(self.w, -self.y, -self.z, self.x)

    def __call__(self, tau):
        return (self.x * tau + self.y) / (self.z * tau + self.w)

    def __pow__(self, k: int) -> "UnimodularMap":
        base = self if k >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(k)):
            out = out @ base
        return out

    def __repr__(self):
        return f"UnimodularMap{self.entries}"


IDENTITY = UnimodularMap(1, 0, 0, 1)
S = UnimodularMap(0, -1, 1, 0)
T = UnimodularMap(1, 1, 0, 1)


def translation(k: int) -> UnimodularMap:
    return UnimodularMap(1, k, 0, 1)


def apply_map(f: QuadForm, M: UnimodularMap) -> QuadForm:
    """Form of ``M tau_f``."""
    a, b, c = f
    x, y, z, w = M.entries
    return QuadForm(
        a * w * w - b * w * z + c * z * z,
        b - 2 * (a * w * y - b * y * z + c * x * z),
        a * y * y - b * y * x + c * x * x,
    )


def is_reduced(f: QuadForm) -> bool:
    a, b, c = f
    if not (abs(b) <= a <= c):
        return False
    if b < 0 and (-b == a or a == c):
        return False
    return True


def reduce_word(f: QuadForm) -> tuple:
    """Like :func:`reduce`, also returning the net T exponent and the S count."""
    M = IDENTITY
    t_net = s_count = 0
    a, b, c = f
    while True:
        # translate so that -a < b <= a
        k = -((a - b) // (2 * a))
        if k:
            a, b, c = a, b - 2 * a * k, a * k * k - b * k + c
            M = translation(k) @ M
            t_net += k
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            M = S @ M
            s_count += 1
            continue
        break
    g = QuadForm(a, b, c)
    assert is_reduced(g), g
    return g, M, t_net, s_count


def reduce(f: QuadForm) -> tuple:
    """Reduced form g and M with ``apply_map(f, M) == g``."""
    g, M, _, _ = reduce_word(f)
    return g, M


def _check_disc(d: int):
    if d >= 0 or d % 4 not in (0, 1):
        raise DomainError(f"{d} is not a negative discriminant")


@lru_cache(maxsize=None)
def _class_reps(d: int, primitive_only: bool) -> tuple:
    _check_disc(d)
    out = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b - d) % 2:
                continue
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            f = QuadForm(a, b, c)
            if primitive_only and not f.primitive:
                continue
            out.append(f)
        a += 1
    return tuple(sorted(out))


def class_reps(d: int, primitive_only: bool = True) -> list:
    """All reduced forms of discriminant d, sorted lexicographically."""
    return list(_class_reps(d, primitive_only))


def _check_fundamental(d: int):
    if not is_fundamental(d):
        raise DomainError(f"{d} is not a negative fundamental discriminant")


def unit_count(d: int) -> int:
    _check_fundamental(d)
    return {-3: 6, -4: 4}.get(d, 2)


def class_number(d: int) -> int:
    _check_fundamental(d)
    return len(_class_reps(d, True))


def B_value(f1: QuadForm, f2: QuadForm) -> int:
    """The integer ``2 a1 c2 + 2 a2 c1 - b1 b2``."""
    return 2 * f1.a * f2.c + 2 * f2.a * f1.c - f1.b * f2.b


# --------------------------------------------------------------------------
# Automorphs and subgroups


def automorphs(f: QuadForm) -> list:
    """Projective stabilizer of tau_f in PSL2(Z), identity first."""
    g = gcd(gcd(f.a, f.b), f.c)
    a, b, c = f.a // g, f.b // g, f.c // g
    d = b * b - 4 * a * c
    seen = []
    # t^2 - d u^2 = 4 has solutions only with |u| <= 2/sqrt(-d)
    umax = isqrt(4 // -d) if -d <= 4 else 0
    for u in range(-umax, umax + 1):
        t2 = 4 + d * u * u
        if t2 < 0:
            continue
        t = isqrt(t2)
        if t * t != t2:
            continue
        for tt in {t, -t}:
            if (tt - b * u) % 2:
                continue
            M = UnimodularMap((tt - b * u) // 2, -c * u, a * u, (tt + b * u) // 2)
            if M not in seen:
                seen.append(M)
    seen.sort(key=lambda m: m != IDENTITY)
    return seen


@dataclass(frozen=True)
class GroupSpec:
    """PSL2(Z), Gamma0(N) or the index-3 subgroup Gamma^3."""

    kind: str = "full"
    level: int = 1

    def __post_init__(self):
        if self.kind not in ("full", "gamma0", "gammacube"):
            raise DomainError(f"unknown group kind {self.kind!r}")
        if self.kind == "gamma0" and self.level < 1:
            raise DomainError("level must be positive")

    @classmethod
    def full(cls) -> "GroupSpec":
        return cls("full", 1)

    @classmethod
    def gamma0(cls, N: int) -> "GroupSpec":
        return cls("full", 1) if N == 1 else cls("gamma0", N)

    @classmethod
    def gamma_cube(cls) -> "GroupSpec":
        return cls("gammacube", 3)

    def contains(self, M: UnimodularMap) -> bool:
        x, y, z, w = M.entries
        if self.kind == "full":
            return True
        if self.kind == "gamma0":
            return z % self.level == 0
        return (x * y + z * w) % 3 == 0

    @property
    def index(self) -> int:
        if self.kind == "full":
            return 1
        if self.kind == "gammacube":
            return 3
        N = self.level
        idx = N
        for p in range(2, N + 1):
            if N % p == 0 and all(p % q for q in range(2, p)):
                idx = idx * (p + 1) // p
        return idx

    def coset_reps(self) -> list:
        return list(_coset_reps(self))

    def __str__(self):
        return {"full": "PSL2(Z)", "gammacube": "Gamma^3"}.get(self.kind, f"Gamma0({self.level})")


@lru_cache(maxsize=None)
def _coset_reps(group: GroupSpec) -> tuple:
    """Right coset representatives: PSL2(Z) is the disjoint union of group * M."""
    reps = [IDENTITY]
    queue = deque([IDENTITY])
    gens = (S, T, T.inverse())
    while queue and len(reps) < group.index:
        M = queue.popleft()
        for g in gens:
            cand = M @ g
            if any(group.contains(cand @ R.inverse()) for R in reps):
                continue
            reps.append(cand)
            queue.append(cand)
    assert len(reps) == group.index, (group, reps)
    return tuple(reps)


def stabilizer_order(group: GroupSpec, p: HeegnerPoint) -> int:
    """Order of the stabilizer of p inside the projective group."""
    return sum(1 for M in automorphs(p.form) if group.contains(M))


def equivalent(f: QuadForm, g: QuadForm, group: GroupSpec = GroupSpec.full()) -> bool:
    """Whether some element of ``group`` carries tau_f to tau_g."""
    if f.disc != g.disc:
        return False
    rf, Mf = reduce(f)
    rg, Mg = reduce(g)
    if rf != rg:
        return False
    return any(group.contains(Mg.inverse() @ sigma @ Mf) for sigma in automorphs(rf))


@dataclass(frozen=True)
class Congruence:
    """Condition ``coeff ≡ residue (mod modulus)`` on one form coefficient."""

    coeff: str
    residue: int
    modulus: int

    def holds(self, f: QuadForm) -> bool:
        return (getattr(f, self.coeff) - self.residue) % self.modulus == 0

    def __str__(self):
        return f"{self.coeff}≡{self.residue % self.modulus} mod {self.modulus}"


def orbit_reps(d: int, group: GroupSpec, conditions: tuple = (), primitive_only: bool = True) -> list:
    """Representatives of group-orbits on the forms of discriminant d.

    Built as M * g over reduced forms g and right coset representatives M,
    keeping those satisfying ``conditions`` (which must be group-invariant).
    """
    out = []
    for g in class_reps(d, primitive_only):
        stab = automorphs(g)
        kept = []
        for M in group.coset_reps():
            if any(group.contains(K @ sigma @ M.inverse()) for K in kept for sigma in stab):
                continue
            kept.append(M)
        for M in kept:
            f = apply_map(g, M)
            if all(cond.holds(f) for cond in conditions):
                out.append(f)
    return out


# --------------------------------------------------------------------------
# Representatives adapted to a level and the conjugate-point formulas


def rep_with_leading_coprime(g: QuadForm, m: int) -> QuadForm:
    """Equivalent form with gcd(a, m) = 1: g, then S g, then the shear image."""
    shear = UnimodularMap(1, 0, 1, 1)
    for cand in (g, apply_map(g, S), apply_map(g, shear)):
        if gcd(cand.a, m) == 1:
            return cand
    raise DomainError(f"no representative of {g} with leading coefficient prime to {m}")


def _require(d: int, modulus: int, residue: int):
    _check_fundamental(d)
    if d % modulus != residue:
        raise DomainError(f"need d ≡ {residue} mod {modulus}, got d = {d}")


def gamma2_reps(d: int) -> list:
    """One form per class with 3 | b, obtained by translating reduced forms."""
    _require(d, 3, 2)
    out = []
    for g in class_reps(d):
        k = next(k for k in range(3) if (g.b - 2 * g.a * k) % 3 == 0)
        out.append(apply_map(g, translation(k)))
    return out


def gamma2_conjugate_points(d: int) -> list:
    """Points ``(-b(1+2a^2) + sqrt d)/(2a)`` over class reps [a, -b, c].

    Stored rep (a, b_s, c) is read as [a, -b, c] with b = -b_s.
    """
    _require(d, 3, 2)
    out = []
    for g in class_reps(d):
        a, bs, _ = rep_with_leading_coprime(g, 3)
        b = -bs
        out.append(HeegnerPoint(a, b * (1 + 2 * a * a), d))
    return out


def omega2_reps(d: int) -> list:
    """One form per class with odd leading coefficient."""
    _require(d, 8, 1)
    return [rep_with_leading_coprime(g, 2) for g in class_reps(d)]


def omega2_conjugate_points(d: int) -> list:
    """Points ``(-b + sqrt d)/(2a)`` over odd-a reps [a, -b, c] (b = -b_s)."""
    out = []
    for a, bs, _ in omega2_reps(d):
        b = -bs
        out.append(HeegnerPoint(a, b, d))
    return out


def omega_conjugate_points(d: int, labelled: bool = False) -> list:
    """The 2h points ``(b-2a+sqrt d)/(2(c-b+a))`` and ``(b+sqrt d)/(2c)``.

    Computed for each odd-a rep [a, -b, c] (b = -b_s).  With ``labelled`` the
    result is a list of ``(point, k)`` with k = b_tau mod 4 of the point's own
    form, which splits the 2h points into two sets of h.
    """
    out = []
    for a, bs, c in omega2_reps(d):
        b = -bs
        p1 = HeegnerPoint(c - b + a, -(b - 2 * a), d)
        p2 = HeegnerPoint(c, -b, d)
        out.extend([p1, p2])
    if labelled:
        return [(p, p.b % 4) for p in out]
    return out
