"""q-series evaluation of eta, E4, E6, Delta, j and the level 2/3 functions.

Values are mpmath ``mpc`` numbers living in a private mpmath context sized
by a :class:`PrecisionContext`; no global mpmath state is touched.

Arguments may be plain complex numbers (anything ``mpc`` accepts) or exact
:class:`~cmnorms.quadforms.HeegnerPoint` / ``QuadForm`` objects.  Exact points
are moved into the standard fundamental domain with integer arithmetic before
any series is summed; the weight factor ``(c tau + d)^k`` and the characters
of T and S on gamma2, gamma3 are applied exactly.  :func:`eta` itself is
always summed at the given point.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from math import ceil, log, log2, pi

import mpmath

from .errors import DomainError, PrecisionError
from .quadforms import HeegnerPoint, QuadForm, reduce_word

LN2 = log(2)


@dataclass(frozen=True)
class PrecisionContext:
    bits: int = 256
    guard: int = 64
    max_terms: int = 1_000_000

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("bits must be at least 64")
        if self.guard < 32:
            raise ValueError("guard must be at least 32")

    @property
    def working_bits(self) -> int:
        return self.bits + self.guard

    @property
    def mp(self):
        return _mp_context(self.working_bits)

    def with_bits(self, bits: int) -> "PrecisionContext":
        return replace(self, bits=bits)

    def tolerance(self, slack: int = 16):
        """Relative tolerance ``2^(slack - bits)`` as an mpf."""
        return self.mp.ldexp(1, slack - self.bits)


@lru_cache(maxsize=None)
def _mp_context(prec: int):
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


# --------------------------------------------------------------------------
# Points


def to_complex(ctx: PrecisionContext, tau):
    mp = ctx.mp
    if isinstance(tau, QuadForm):
        tau = tau.point
    if isinstance(tau, HeegnerPoint):
        return mp.mpc(-tau.b, mp.sqrt(-tau.d)) / (2 * tau.a)
    return mp.mpc(tau)


def _check_upper(mp, z):
    if not mp.im(z) > 0:
        raise DomainError(f"point {z} is not in the upper half plane")


@dataclass(frozen=True)
class _Reduced:
    tau: object       # reduced point as mpc
    automorphy: object  # c tau + d at the original point
    t_net: int
    s_count: int


def _reduce(ctx: PrecisionContext, tau) -> _Reduced:
    """Move tau into the fundamental domain, remembering the word used."""
    mp = ctx.mp
    if isinstance(tau, QuadForm):
        tau = tau.point
    if isinstance(tau, HeegnerPoint):
        g, M, t_net, s_count = reduce_word(tau.form)
        z0 = to_complex(ctx, tau)
        return _Reduced(to_complex(ctx, g.point), M.z * z0 + M.w, t_net, s_count)
    z0 = mp.mpc(tau)
    _check_upper(mp, z0)
    one = mp.mpf(1) - mp.ldexp(1, -ctx.bits // 2)
    x, y, c, d = 1, 0, 0, 1
    t_net = s_count = 0
    z = z0
    for _ in range(100_000):
        n = int(mp.nint(mp.re(z)))
        if n:
            z -= n
            t_net -= n
            x, y = x - n * c, y - n * d
        if abs(z) < one:
            z = -1 / z
            s_count += 1
            x, y, c, d = -c, -d, x, y
            continue
        break
    else:
        raise PrecisionError("reduction did not terminate")
    z = (x * z0 + y) / (c * z0 + d)
    return _Reduced(z, c * z0 + d, t_net, s_count)


# --------------------------------------------------------------------------
# Series engine


def _nome(mp, z):
    return mp.expjpi(2 * z)


def _pentagonal(ctx: PrecisionContext, q, im) -> object:
    """prod (1 - q^n) via Euler's pentagonal number series."""
    mp = ctx.mp
    target = ctx.working_bits + 8
    rate = 2 * pi * float(im) / LN2  # bits gained per unit exponent
    if rate <= 0:
        raise DomainError("nome must have modulus below 1")
    total = mp.mpc(1)
    q3 = q**3
    ratio = q  # q^(3k-2), the step from q^((k-1)(3k-4)/2) to q^(k(3k-1)/2)
    lo = mp.mpc(1)
    qk = mp.mpc(1)
    k = 0
    while True:
        k += 1
        if k > ctx.max_terms:
            raise PrecisionError(f"eta series did not converge within {ctx.max_terms} terms")
        lo *= ratio
        ratio *= q3
        qk *= q
        term = lo + lo * qk
        total += -term if k % 2 else term
        if k * (3 * k - 1) / 2 * rate > target:
            return total


@lru_cache(maxsize=None)
def _sigma_table(power: int, n: int) -> tuple:
    table = [0] * (n + 1)
    for m in range(1, n + 1):
        mp_ = m**power
        for k in range(m, n + 1, m):
            table[k] += mp_
    return tuple(table)


def _eisenstein_terms(ctx: PrecisionContext, k: int, im: float) -> int:
    rate = 2 * pi * im / LN2
    target = ctx.working_bits + 16
    n = max(8, int(target / rate))
    while (k - 1) * log2(n) + 2 - n * rate > -target:
        n = int(n * 1.1) + 1
    if n > ctx.max_terms:
        raise PrecisionError(f"E{k} series needs {n} terms, cap is {ctx.max_terms}")
    return n


def _eisenstein_series(ctx: PrecisionContext, k: int, q, im) -> object:
    mp = ctx.mp
    coeff = {4: 240, 6: -504}[k]
    n = _eisenstein_terms(ctx, k, float(im))
    # round the table size up so neighbouring precisions share it
    size = 1 << max(6, ceil(log2(n)))
    sig = _sigma_table(k - 1, size)
    acc = mp.mpc(0)
    for m in range(n, 0, -1):
        acc = (acc + sig[m]) * q
    return 1 + coeff * acc


# --------------------------------------------------------------------------
# Public evaluators


def eta(tau, ctx: PrecisionContext):
    """Dedekind eta summed at tau itself."""
    mp = ctx.mp
    z = to_complex(ctx, tau)
    _check_upper(mp, z)
    val = mp.expjpi(z / 12) * _pentagonal(ctx, _nome(mp, z), mp.im(z))
    if val == 0:
        raise DomainError("eta underflowed to zero")
    return val


def _delta_reduced(ctx: PrecisionContext, z):
    mp = ctx.mp
    q = _nome(mp, z)
    val = q * _pentagonal(ctx, q, mp.im(z)) ** 24
    if val == 0:
        raise DomainError("Delta underflowed to zero at working precision")
    return val


def delta(tau, ctx: PrecisionContext):
    """Normalized discriminant ``q prod (1 - q^n)^24``."""
    r = _reduce(ctx, tau)
    return _delta_reduced(ctx, r.tau) / r.automorphy**12


def eisenstein(k: int, tau, ctx: PrecisionContext):
    """Normalized E4 or E6 (constant term 1)."""
    if k not in (4, 6):
        raise DomainError("only weights 4 and 6 are provided")
    mp = ctx.mp
    r = _reduce(ctx, tau)
    val = _eisenstein_series(ctx, k, _nome(mp, r.tau), mp.im(r.tau))
    return val / r.automorphy**k


def eisenstein_direct(k: int, tau, ctx: PrecisionContext):
    """E_k summed at tau without reduction (for cross-checks)."""
    mp = ctx.mp
    z = to_complex(ctx, tau)
    _check_upper(mp, z)
    return _eisenstein_series(ctx, k, _nome(mp, z), mp.im(z))


def j_value(tau, ctx: PrecisionContext):
    mp = ctx.mp
    r = _reduce(ctx, tau)
    e4 = _eisenstein_series(ctx, 4, _nome(mp, r.tau), mp.im(r.tau))
    return e4**3 / _delta_reduced(ctx, r.tau)


def gamma2_value(tau, ctx: PrecisionContext):
    """E4 / eta^8, the cube root of j that is real on the imaginary axis."""
    mp = ctx.mp
    r = _reduce(ctx, tau)
    e4 = _eisenstein_series(ctx, 4, _nome(mp, r.tau), mp.im(r.tau))
    val = e4 / eta(r.tau, ctx) ** 8
    # gamma2(T z) = zeta3^-1 gamma2(z), gamma2(S z) = gamma2(z)
    return val * mp.expjpi(mp.mpf(2 * (r.t_net % 3)) / 3)


def gamma3_value(tau, ctx: PrecisionContext):
    """E6 / eta^12, a square root of j - 1728."""
    mp = ctx.mp
    r = _reduce(ctx, tau)
    e6 = _eisenstein_series(ctx, 6, _nome(mp, r.tau), mp.im(r.tau))
    val = e6 / eta(r.tau, ctx) ** 12
    # gamma3 changes sign under both S and T
    return -val if (r.t_net + r.s_count) % 2 else val


def _shifted_points(tau):
    """Exact (2 tau, tau/2, (tau+1)/2) for a Heegner point."""
    if isinstance(tau, QuadForm):
        tau = tau.point
    a, b, d = tau.a, tau.b, tau.d
    return (HeegnerPoint(a, 2 * b, 4 * d), HeegnerPoint(4 * a, 2 * b, 4 * d),
            HeegnerPoint(4 * a, 2 * b - 4 * a, 4 * d))


def weber(variant: str, tau, ctx: PrecisionContext):
    """The 24th powers omega, omega1, omega2 of the Weber functions."""
    if variant not in ("omega", "omega1", "omega2"):
        raise DomainError(f"unknown Weber variant {variant!r}")
    mp = ctx.mp
    if isinstance(tau, (HeegnerPoint, QuadForm)):
        two, half, shift = _shifted_points(tau)
    else:
        z = mp.mpc(tau)
        _check_upper(mp, z)
        two, half, shift = 2 * z, z / 2, (z + 1) / 2
    base = delta(tau, ctx)
    if variant == "omega2":
        return 4096 * delta(two, ctx) / base
    if variant == "omega1":
        return delta(half, ctx) / base
    return delta(shift, ctx) / base


def evaluate(name: str, tau, ctx: PrecisionContext):
    """Dispatch by name: eta, delta, E4, E6, j, gamma2, gamma3, omega*."""
    if name == "eta":
        return eta(tau, ctx)
    if name == "delta":
        return delta(tau, ctx)
    if name in ("E4", "E6"):
        return eisenstein(int(name[1]), tau, ctx)
    if name == "j":
        return j_value(tau, ctx)
    if name == "gamma2":
        return gamma2_value(tau, ctx)
    if name == "gamma3":
        return gamma3_value(tau, ctx)
    if name in ("omega", "omega1", "omega2"):
        return weber(name, tau, ctx)
    raise DomainError(f"unknown function {name!r}")
