"""Growth constants of L_P(A, B): singularity radius, entropy, and eta.

With ``g = 1 - a`` the binary-tree series satisfies ``g(t^2) = g(t)^2 + 2t``.
Iterating this at the singularity ``r`` (where ``g(r) = 0``) and at the root
``alpha`` of ``t + a(t^2) = 1`` produces the integer recursions
``c_{k+1} = c_k^2 + 2`` (from ``c_0 = 2``) and ``e_{k+1} = e_k^2 + 2`` (from
``e_0 = 1``), with ``1/r = lim c_k^(2^-k)`` and ``1/alpha = lim e_k^(2^-k)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from decimal import Decimal, localcontext

try:
    import gmpy2

    _mpz = gmpy2.mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _mpz = int

__all__ = [
    "PrecisionError",
    "BigFloatCtx",
    "Constant",
    "EtaEstimate",
    "c_sequence",
    "e_sequence",
    "radius_r",
    "entropy_alpha",
    "abelian_entropy",
    "wedderburn_numbers",
    "eta_estimate",
]

MAX_DIGITS = 1000
MAX_LEVELS = 64


class PrecisionError(ArithmeticError):
    """Successive recursion levels failed to agree to the requested digits."""


@dataclass(frozen=True)
class BigFloatCtx:
    digits: int
    guard: int = 15

    @classmethod
    def for_digits(cls, digits: int) -> "BigFloatCtx":
        if not 1 <= digits <= MAX_DIGITS:
            raise ValueError(f"digits must be in 1..{MAX_DIGITS}")
        guard = int(os.environ.get("LACM_GUARD_DIGITS", "15"))
        if guard < 2:
            raise ValueError("LACM_GUARD_DIGITS must be >= 2")
        return cls(digits, guard)

    @property
    def working(self) -> int:
        return self.digits + self.guard


@dataclass(frozen=True)
class Constant:
    """A constant and its reciprocal as decimal strings with ``digits`` significant digits."""

    name: str
    value: str
    reciprocal: str
    digits: int
    levels: int


def _sequence(seed: int, count: int) -> list[int]:
    out = [seed]
    while len(out) < count:
        out.append(out[-1] ** 2 + 2)
    return out


def c_sequence(count: int) -> list[int]:
    """First ``count`` terms of ``c_0 = 2, c_{k+1} = c_k^2 + 2``."""
    return _sequence(2, count)


def e_sequence(count: int) -> list[int]:
    """First ``count`` terms of ``e_0 = 1, e_{k+1} = e_k^2 + 2``."""
    return _sequence(1, count)


def _round(x: Decimal, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return format(+x, "f")


def _root_limit(seed: int, ctx: BigFloatCtx, max_levels: int = MAX_LEVELS) -> tuple[Decimal, int]:
    """``lim_k x_k^(2^-k)`` for ``x_{k+1} = x_k^2 + 2``, certified by agreement
    of consecutive levels to ``digits + 2`` significant digits."""
    with localcontext() as local:
        local.prec = ctx.working
        tol = Decimal(10) ** -(ctx.digits + 2)
        x = seed
        prev = None
        for k in range(max_levels + 1):
            est = (Decimal(x).ln() / (2**k)).exp()
            if prev is not None and abs(est - prev) <= tol * est:
                return est, k
            prev = est
            x = x * x + 2
    raise PrecisionError(f"no agreement to {ctx.digits} digits within {max_levels} levels")


def radius_r(digits: int, max_levels: int = MAX_LEVELS) -> Constant:
    """Radius of convergence ``r`` of the binary-tree series, and ``1/r``."""
    ctx = BigFloatCtx.for_digits(digits)
    inv, k = _root_limit(2, ctx, max_levels)
    with localcontext() as local:
        local.prec = ctx.working
        r = 1 / inv
    return Constant("r", _round(r, digits), _round(inv, digits), digits, k)


def entropy_alpha(digits: int, max_levels: int = MAX_LEVELS) -> Constant:
    """Smallest root ``alpha`` of ``t + a(t^2) = 1``; ``1/alpha`` is the entropy."""
    ctx = BigFloatCtx.for_digits(digits)
    inv, k = _root_limit(1, ctx, max_levels)
    with localcontext() as local:
        local.prec = ctx.working
        alpha = 1 / inv
    return Constant("alpha", _round(alpha, digits), _round(inv, digits), digits, k)


def abelian_entropy(digits: int = 20) -> str:
    """Growth rate ``r^(-1/2)`` of the abelian (degree-0) part."""
    ctx = BigFloatCtx.for_digits(digits)
    inv, _ = _root_limit(2, ctx)
    with localcontext() as local:
        local.prec = ctx.working
        return _round(inv.sqrt(), digits)


def _mul_trunc(f: list[int], g: list[int], n: int) -> list[int]:
    """First ``n`` coefficients of ``f * g`` for nonnegative integer coefficients.

    Kronecker substitution: pack each polynomial into one big integer with
    byte-aligned slots wide enough that no slot overflows, multiply once.
    """
    f = f[:n]
    g = g[:n]
    if not f or not g:
        return [0] * n
    bits = max(c.bit_length() for c in f) + max(c.bit_length() for c in g)
    bits += min(len(f), len(g)).bit_length() + 1
    slot = (bits + 7) // 8
    pf = int.from_bytes(b"".join(c.to_bytes(slot, "little") for c in f), "little")
    pg = int.from_bytes(b"".join(c.to_bytes(slot, "little") for c in g), "little")
    prod = int(_mpz(pf) * _mpz(pg))
    raw = prod.to_bytes(max((prod.bit_length() + 7) // 8, 1), "little")
    out = []
    for i in range(n):
        chunk = raw[i * slot : (i + 1) * slot]
        out.append(int.from_bytes(chunk, "little") if chunk else 0)
    return out


def wedderburn_numbers(n_max: int) -> list[int]:
    """Exact ``a_0..a_{n_max}`` (``a_0 = 0``) by Newton doubling.

    With ``a`` correct below ``t^m`` and ``s = 1/(1 - a)``, the next block is
    ``delta = [a^2 + a(t^2)]_{m..2m-1} * s / 2``; ``s`` is refined by
    ``s += s * [s a]_{m..2m-1}``. Every operand has nonnegative coefficients.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    size = n_max + 1
    a = [0, 1][:size]
    s = [1, 1]
    m = 2
    while m < size:
        M = min(2 * m, size)
        sq = _mul_trunc(a, a, M)
        nh = [sq[i] + (a[i // 2] if i % 2 == 0 else 0) for i in range(m, M)]
        twice = _mul_trunc(nh, s, M - m)
        if any(x & 1 for x in twice):
            raise ArithmeticError("Newton step for binary-tree numbers was not integral")
        a = a + [x >> 1 for x in twice]
        sa = _mul_trunc(s, a, M)
        s = s + _mul_trunc(sa[m:M], s, M - m)
        m = M
    return a


@dataclass(frozen=True)
class EtaEstimate:
    value: Decimal
    raw: Decimal  # a_n * n^(3/2) * r^n at n = n_max
    n_max: int
    monotone: bool
    samples: tuple[tuple[int, Decimal], ...]

    def __str__(self) -> str:
        return _round(self.value, 12)


def eta_estimate(n_max: int, digits: int = 40) -> EtaEstimate:
    """Leading constant in ``a_n ~ eta n^(-3/2) r^(-n)``.

    Two-term Richardson extrapolation in ``1/n`` between ``n`` and ``n/2``
    applied to ``a_n n^(3/2) r^n``.
    """
    if n_max < 100:
        raise ValueError("n_max must be >= 100")
    n_max -= n_max % 2
    a = wedderburn_numbers(n_max)
    ctx = BigFloatCtx.for_digits(digits)
    inv_r, _ = _root_limit(2, ctx)
    with localcontext() as local:
        local.prec = ctx.working
        log_r = -inv_r.ln()

        def scaled(n: int) -> Decimal:
            return Decimal(a[n]) * (Decimal(n) * log_r).exp() * Decimal(n) ** Decimal("1.5")

        hi = scaled(n_max)
        lo = scaled(n_max // 2)
        value = 2 * hi - lo
        points = sorted({max(n_max * j // 16, 8) for j in range(1, 17)})
        samples = tuple((n, scaled(n)) for n in points)
    diffs = [b[1] - a_[1] for a_, b in zip(samples, samples[1:])]
    monotone = all(d > 0 for d in diffs) or all(d < 0 for d in diffs)
    return EtaEstimate(value, hi, n_max, monotone, samples)
