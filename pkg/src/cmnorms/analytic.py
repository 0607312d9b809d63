"""Numerical checks of the real-analytic side: Legendre Q, the pair kernel,
non-holomorphic Eisenstein series and their subgroup variants.

Special functions (Gamma, digamma, zeta, Hurwitz zeta, quadrature) come from
mpmath; lattice sums are vectorized with numpy in float64, which is ample for
the 1e-4 level at which truncated lattice sums can be trusted anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd

import numpy as np
import sympy

from .arith import euler_phi, kronecker
from .errors import DomainError, PrecisionError
from .modfunc import PrecisionContext
from .quadforms import GroupSpec, HeegnerPoint, QuadForm, UnimodularMap, automorphs, class_reps

DEFAULT_CTX = PrecisionContext(bits=128)
COPRIME_DENSITY = 6 / math.pi**2
TAIL_SAFETY = 10


# --------------------------------------------------------------------------
# Legendre function of the second kind


def _hyp_direct(mp, s, z, cap):
    # sum (s)_n^2 / ((2s)_n n!) z^n
    total = term = mp.mpf(1)
    eps = mp.eps
    for n in range(cap):
        term *= (s + n) ** 2 / ((2 * s + n) * (n + 1)) * z
        total += term
        if abs(term) < eps * abs(total):
            return total
    raise PrecisionError(f"hypergeometric series did not converge in {cap} terms")


def _hyp_log(mp, s, z, cap):
    # c = a + b continuation around z = 1 with the logarithmic term
    w = 1 - z
    lw = mp.log(w)
    total = mp.mpf(0)
    coef = mp.mpf(1)  # (s)_n^2 / n!^2
    wn = mp.mpf(1)
    eps = mp.eps
    for n in range(cap):
        term = coef * wn * (2 * mp.digamma(n + 1) - 2 * mp.digamma(s + n) - lw)
        total += term
        if n > 2 and abs(term) < eps * abs(total):
            return mp.gamma(2 * s) / mp.gamma(s) ** 2 * total
        coef *= ((s + n) / (n + 1)) ** 2
        wn *= w
    raise PrecisionError(f"logarithmic hypergeometric series did not converge in {cap} terms")


def legendre_Q(s, t, ctx: PrecisionContext = DEFAULT_CTX, cap: int = 100_000) -> float:
    """Q_{s-1}(t) from its hypergeometric representation."""
    if not s >= 1:
        raise DomainError("need s >= 1")
    if not t > 1:
        raise DomainError("need t > 1")
    mp = ctx.mp
    s = mp.mpf(s)
    t = mp.mpf(t)
    z = 2 / (1 + t)
    F = _hyp_direct(mp, s, z, cap) if z <= 0.5 else _hyp_log(mp, s, z, cap)
    val = mp.gamma(s) ** 2 / (2 * mp.gamma(2 * s)) * z**s * F
    return float(val)


def legendre_Q_integral(s, t, ctx: PrecisionContext = DEFAULT_CTX) -> float:
    """Q_{s-1}(t) as the integral of (t + sqrt(t^2-1) cosh u)^(-s) over u > 0."""
    mp = ctx.mp
    s, t = mp.mpf(s), mp.mpf(t)
    r = mp.sqrt(t * t - 1)
    return float(mp.quad(lambda u: (t + r * mp.cosh(u)) ** (-s), [0, 1, 4, mp.inf]))


def legendre_Q_closed(k: int, t: float) -> float:
    """Q_0 and Q_1 in elementary terms."""
    L = 0.5 * math.log((t + 1) / (t - 1))
    if k == 0:
        return L
    if k == 1:
        return t * L - 1
    raise DomainError("closed forms only for Q_0 and Q_1")


# --------------------------------------------------------------------------
# Pair kernel


def _as_complex(z) -> complex:
    if isinstance(z, QuadForm):
        z = z.point
    return complex(z)


def cosh_distance(z1, z2) -> float:
    z1, z2 = _as_complex(z1), _as_complex(z2)
    return 1 + abs(z1 - z2) ** 2 / (2 * z1.imag * z2.imag)


def green_pair(s, z1, z2, ctx: PrecisionContext = DEFAULT_CTX) -> float:
    """-2 Q_{s-1}(cosh of the hyperbolic distance between z1 and z2)."""
    z1c, z2c = _as_complex(z1), _as_complex(z2)
    if z1c.imag <= 0 or z2c.imag <= 0:
        raise DomainError("points must lie in the upper half plane")
    if isinstance(z1, (HeegnerPoint, QuadForm)) and isinstance(z2, (HeegnerPoint, QuadForm)):
        # exact: 1 + |z1 - z2|^2 / (2 y1 y2) = B / sqrt(D)
        from .quadforms import B_value

        f1 = z1 if isinstance(z1, QuadForm) else z1.form
        f2 = z2 if isinstance(z2, QuadForm) else z2.form
        mp = ctx.mp
        t = mp.mpf(B_value(f1, f2)) / mp.sqrt(f1.disc * f2.disc)
    else:
        t = cosh_distance(z1c, z2c)
    if t <= 1:
        raise DomainError("points coincide")
    return -2 * legendre_Q(s, t, ctx)


# --------------------------------------------------------------------------
# Lattice sums


@dataclass(frozen=True)
class LatticeSum:
    value: float
    tail_bound: float
    correction: float


def _direction_integral(z: complex, s: float, n: int = 4096) -> float:
    """Integral over theta in [0, 2 pi) of |z sin(theta) + cos(theta)|^(-2s)."""
    th = np.arange(n) * (2 * np.pi / n)
    q = (z.real * np.sin(th) + np.cos(th)) ** 2 + (z.imag * np.sin(th)) ** 2
    return float(np.mean(q ** (-s)) * 2 * np.pi)


def _lattice_terms(z: complex, s: float, cutoff: int, weight=None, chunk: int = 256) -> float:
    """Sum over c >= 1, gcd(c, d) = 1, c^2 + d^2 <= cutoff^2 of w(c,d) y^s / |cz+d|^2s."""
    x, y = z.real, z.imag
    R2 = cutoff * cutoff
    d = np.arange(-cutoff, cutoff + 1, dtype=np.int64)
    parts = []
    for c0 in range(1, cutoff + 1, chunk):
        c = np.arange(c0, min(c0 + chunk, cutoff + 1), dtype=np.int64)[:, None]
        mask = (c * c + d * d <= R2) & (np.gcd(c, d) == 1)
        if weight is not None:
            w = weight(np.broadcast_to(c, mask.shape), np.broadcast_to(d, mask.shape))
            mask &= w != 0
        cc = np.broadcast_to(c, mask.shape)[mask].astype(float)
        dd = np.broadcast_to(d, mask.shape)[mask].astype(float)
        terms = ((cc * x + dd) ** 2 + (cc * y) ** 2) ** (-s)
        if weight is not None:
            terms = terms * w[mask]
        parts.append(np.sum(terms))
    return float(math.fsum(parts)) * y**s


def _tail(z: complex, s: float, cutoff: int, density: float) -> float:
    # continuum estimate of the coprime pairs beyond the disk (half plane c > 0)
    return 0.5 * density * z.imag**s * cutoff ** (2 - 2 * s) / (2 * s - 2) * _direction_integral(z, s)


def eisenstein_real(z, s: float, cutoff: int = 2000, tail_correction: bool = True) -> LatticeSum:
    """E(z, s) = y^s + sum over coprime (c, d), c >= 1, of y^s / |cz + d|^(2s)."""
    if not s > 1:
        raise DomainError("need s > 1")
    z = _as_complex(z)
    if z.imag <= 0:
        raise DomainError("z must lie in the upper half plane")
    body = z.imag**s + _lattice_terms(z, s, cutoff)
    tail = _tail(z, s, cutoff, COPRIME_DENSITY)
    value = body + tail if tail_correction else body
    return LatticeSum(value, TAIL_SAFETY * tail, tail if tail_correction else 0.0)


def eisenstein_gamma0_2(z, s: float, cutoff: int = 2000, tail_correction: bool = True) -> LatticeSum:
    """Eisenstein series of Gamma0(2) at the cusp infinity: c restricted to even values."""
    z = _as_complex(z)
    body = z.imag**s + _lattice_terms(z, s, cutoff, weight=lambda c, d: (c % 2 == 0).astype(float))
    tail = _tail(z, s, cutoff, COPRIME_DENSITY / 3)
    value = body + tail if tail_correction else body
    return LatticeSum(value, TAIL_SAFETY * tail, tail if tail_correction else 0.0)


def _completion(c: int, d: int):
    """(a, b) with a d - b c = 1, for c >= 1 coprime to d (or c = 0, d = 1)."""
    if c == 0:
        return 1, 0
    a = pow(d, -1, c) if c > 1 else 0
    return a, (a * d - 1) // c


def _cube_lifts(c: int, d: int) -> int:
    a0, b0 = _completion(c, d)
    return sum(1 for k in range(3) if ((a0 + k * c) * (b0 + k * d) + c * d) % 3 == 0)


def eisenstein_gamma_cube(z, s: float, cutoff: int = 2000, tail_correction: bool = True) -> LatticeSum:
    """Eisenstein series of Gamma^3 with the cusp scaled by diag(sqrt 3, 1/sqrt 3).

    Each bottom row (c, d) contributes once per admissible top row modulo
    the width-3 translations; the scaling contributes Im(z/3)^s.
    """
    z = _as_complex(z)
    x, y = z.real, z.imag
    # the bottom-row weight is periodic in (c, d) mod 3, so tabulate it there
    table = np.zeros((3, 3))
    for cr in range(3):
        for dr in range(3):
            for c in range(cr or 3, 40, 3):
                dd = next((d for d in range(dr, 200, 3) if gcd(c, d) == 1), None)
                if dd is not None:
                    table[cr, dr] = _cube_lifts(c, dd)
                    break
    top = _cube_lifts(0, 1) * y**s  # identity coset c = 0
    body = top + _lattice_terms(z, s, cutoff, weight=lambda c, d: table[c % 3, d % 3])
    scale = 3.0 ** (-s)
    tail = _tail(z, s, cutoff, COPRIME_DENSITY) * float(np.mean(table[table > 0]))
    value = scale * (body + tail if tail_correction else body)
    return LatticeSum(value, TAIL_SAFETY * scale * tail, scale * tail if tail_correction else 0.0)


# --------------------------------------------------------------------------
# Dirichlet series


def riemann_zeta(s, ctx: PrecisionContext = DEFAULT_CTX) -> float:
    return float(ctx.mp.zeta(s))


def dirichlet_L(s, d: int, ctx: PrecisionContext = DEFAULT_CTX) -> float:
    """L(s, (d/.)) through Hurwitz zeta values over one period."""
    if not s > 0.5:
        raise DomainError("need s > 1/2")
    mp = ctx.mp
    k = abs(d)
    if s == 1:
        # the Hurwitz poles cancel; use the digamma form instead
        return float(-sum(kronecker(d, r) * mp.digamma(mp.mpf(r) / k)
                          for r in range(1, k + 1)) / k)
    s = mp.mpf(s)
    total = mp.mpf(0)
    for r in range(1, k + 1):
        chi = kronecker(d, r)
        if chi:
            total += chi * mp.zeta(s, mp.mpf(r) / k)
    return float(total * mp.mpf(k) ** (-s))


def _fundamental_part(Delta: int):
    """(d, f) with Delta = d f^2 and d fundamental."""
    from .arith import is_fundamental

    for f in range(math.isqrt(-Delta), 0, -1):
        if Delta % (f * f) == 0 and is_fundamental(Delta // (f * f)):
            return Delta // (f * f), f
    raise DomainError(f"{Delta} is not a discriminant")


def _sigma(a: float, n: int) -> float:
    return sum(m**a for m in sympy.divisors(n))


def lattice_identity_rhs(Delta: int, s: float, ctx: PrecisionContext = DEFAULT_CTX) -> float:
    """Closed form of the sum of E(tau, s) over all forms of discriminant Delta."""
    d, f = _fundamental_part(Delta)
    w = {-3: 6, -4: 4}.get(d, 2)
    factor = 0.0
    for m in sympy.divisors(f):
        mu = int(sympy.mobius(m))
        if mu:
            factor += mu * kronecker(d, m) * m ** (-s) * _sigma(1 - 2 * s, f // m)
    return (w / 2) * (abs(Delta) / 4) ** (s / 2) * riemann_zeta(s, ctx) / riemann_zeta(2 * s, ctx) \
        * dirichlet_L(s, d, ctx) * factor


@dataclass(frozen=True)
class LatticeIdentityResult:
    lhs: float
    rhs: float
    residual: float
    tail_bound: float


def prop15_check(Delta: int, s: float, cutoff: int = 2000, ctx: PrecisionContext = DEFAULT_CTX,
                 tail_correction: bool = True) -> LatticeIdentityResult:
    """Lattice sum over every reduced form of discriminant Delta against the closed form.

    Each form is weighted by w / w_Q, where w counts the roots of unity of the
    field and w_Q = 2 |stabilizer of tau_Q|; the weight is 1 unless an
    imprimitive form sits at i or at a cube root of unity.
    """
    if Delta >= 0 or Delta % 4 not in (0, 1):
        raise DomainError(f"{Delta} is not a negative discriminant")
    d, _ = _fundamental_part(Delta)
    w = {-3: 6, -4: 4}.get(d, 2)
    lhs = 0.0
    bound = 0.0
    for g in class_reps(Delta, primitive_only=False):
        # orbifold weight: a point with extra automorphs counts fractionally
        weight = w / (2 * len(automorphs(g)))
        r = eisenstein_real(g, s, cutoff, tail_correction)
        lhs += weight * r.value
        bound += weight * r.tail_bound
    rhs = lattice_identity_rhs(Delta, s, ctx)
    return LatticeIdentityResult(lhs, rhs, abs(lhs - rhs), bound)


@dataclass(frozen=True)
class SubgroupResult:
    direct: float
    predicted: float
    residual: float
    tail_bound: float


def subgroup_eisenstein_check(group: str, z, s: float, cutoff: int = 2000) -> SubgroupResult:
    """Direct subgroup lattice sum against the combination of full-level sums."""
    z = _as_complex(z)
    if group == "gammacube":
        direct = eisenstein_gamma_cube(z, s, cutoff)
        full = eisenstein_real(z, s, cutoff)
        predicted = 3.0 ** (-s) * full.value
        bound = direct.tail_bound + 3.0 ** (-s) * full.tail_bound
    elif group == "gamma0_2":
        direct = eisenstein_gamma0_2(z, s, cutoff)
        e1 = eisenstein_real(z, s, cutoff)
        e2 = eisenstein_real(2 * z, s, cutoff)
        k = 2.0**s / (2.0 ** (2 * s) - 1)
        predicted = k * (e2.value - 2.0 ** (-s) * e1.value)
        bound = direct.tail_bound + k * (e2.tail_bound + e1.tail_bound)
    else:
        raise DomainError(f"unknown subgroup {group!r}")
    return SubgroupResult(direct.value, predicted, abs(direct.value - predicted), bound)


# --------------------------------------------------------------------------
# Dirichlet coefficients phi


GROUPS = {"full": GroupSpec.full(), "gammacube": GroupSpec.gamma_cube(), "gamma0_2": GroupSpec.gamma0(2)}


def phi_count(group: str, c: int) -> int:
    """#{d mod c : some (* *; c d) lies in the cusp-scaled group}, by brute force."""
    if c < 1:
        raise DomainError("c must be positive")
    spec = GROUPS[group]
    if group == "gammacube":
        # conjugating by diag(sqrt 3, 1/sqrt 3) turns lower-left 3c' into c'
        if c % 3:
            return 0
        cp = c // 3
    else:
        cp = c
    count = 0
    for d in range(c):
        if gcd(cp, d) != 1:
            continue
        a0, b0 = _completion(cp, d)
        for k in range(3):
            M = UnimodularMap(a0 + k * cp, b0 + k * d, cp, d)
            if spec.contains(M):
                count += 1
                break
    return count


def phi_closed(group: str, c: int) -> int:
    if group == "full":
        return euler_phi(c)
    if group == "gammacube":
        return 3 * euler_phi(c // 3) if c % 3 == 0 else 0
    if group == "gamma0_2":
        return euler_phi(c) if c % 2 == 0 else 0
    raise DomainError(f"unknown group {group!r}")
