"""Truncated power series with exact rational coefficients and Witt dimension formulas."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Mapping, Sequence, Union

__all__ = [
    "RatSeries",
    "BiSeries",
    "mobius",
    "divisors",
    "wedderburn_series",
    "abelian_dims",
    "witt_dims",
    "free_dims",
    "lacm_dims",
    "lacm_dims_bigraded",
]


class RatSeries:
    """Power series ``c_0 + c_1 t + ... + c_N t^N + O(t^{N+1})``.

    Binary operations truncate at the smaller of the two truncation orders.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence, N: int | None = None):
        coeffs = [Fraction(c) for c in coeffs]
        if N is not None:
            coeffs = (coeffs + [Fraction(0)] * (N + 1))[: N + 1]
        if not coeffs:
            raise ValueError("a series needs a truncation order >= 0")
        self.coeffs = coeffs

    @classmethod
    def zero(cls, N: int) -> "RatSeries":
        return cls([], N)

    @classmethod
    def monomial(cls, n: int, N: int, coeff=1) -> "RatSeries":
        out = cls.zero(N)
        if n <= N:
            out.coeffs[n] = Fraction(coeff)
        return out

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n > self.N:
            raise IndexError(f"coefficient {n} is beyond truncation order {self.N}")
        return self.coeffs[n]

    def __eq__(self, other) -> bool:
        return isinstance(other, RatSeries) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        terms = [f"{c}*t^{n}" for n, c in enumerate(self.coeffs) if c]
        return (" + ".join(terms) or "0") + f" + O(t^{self.N + 1})"

    def __add__(self, other: "RatSeries") -> "RatSeries":
        N = min(self.N, other.N)
        return RatSeries([self.coeffs[n] + other.coeffs[n] for n in range(N + 1)])

    def __sub__(self, other: "RatSeries") -> "RatSeries":
        N = min(self.N, other.N)
        return RatSeries([self.coeffs[n] - other.coeffs[n] for n in range(N + 1)])

    def __neg__(self) -> "RatSeries":
        return RatSeries([-c for c in self.coeffs])

    def scale(self, k) -> "RatSeries":
        k = Fraction(k)
        return RatSeries([k * c for c in self.coeffs])

    def __mul__(self, other: "RatSeries") -> "RatSeries":
        N = min(self.N, other.N)
        f, g = self.coeffs, other.coeffs
        nz = [i for i in range(N + 1) if f[i]]
        out = [Fraction(0)] * (N + 1)
        for i in nz:
            fi = f[i]
            for j in range(N + 1 - i):
                if g[j]:
                    out[i + j] += fi * g[j]
        return RatSeries(out)

    def substitute_power(self, k: int) -> "RatSeries":
        """``f(t) -> f(t^k)``, keeping the same truncation order."""
        out = [Fraction(0)] * (self.N + 1)
        for n in range(0, self.N // k + 1):
            out[n * k] = self.coeffs[n]
        return RatSeries(out)

    def neg_log_one_minus(self) -> "RatSeries":
        """``-log(1 - w)`` for ``w`` with zero constant term.

        Uses ``t L'(t) (1 - w) = t w'(t)``, i.e.
        ``n L_n = n w_n + sum_{k<n} k L_k w_{n-k}``.
        """
        w = self.coeffs
        if w[0] != 0:
            raise ValueError("-log(1-w) needs w with zero constant term")
        L = [Fraction(0)] * (self.N + 1)
        for n in range(1, self.N + 1):
            acc = n * w[n]
            for k in range(1, n):
                if L[k] and w[n - k]:
                    acc += k * L[k] * w[n - k]
            L[n] = acc / n
        return RatSeries(L)


class BiSeries:
    """Series in ``t`` (order) and ``s`` (degree offset), truncated in ``t``.

    Stored as one ``{s_exponent: coefficient}`` dict per power of ``t``.
    """

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Mapping[int, Fraction]]):
        self.rows = [{s: Fraction(c) for s, c in row.items() if c} for row in rows]

    @classmethod
    def from_terms(cls, terms: Mapping[tuple[int, int], object], N: int) -> "BiSeries":
        rows: list[dict[int, Fraction]] = [{} for _ in range(N + 1)]
        for (n, s), c in terms.items():
            if n <= N and c:
                rows[n][s] = rows[n].get(s, Fraction(0)) + Fraction(c)
        return cls(rows)

    @property
    def N(self) -> int:
        return len(self.rows) - 1

    def coeff(self, n: int, s: int) -> Fraction:
        return self.rows[n].get(s, Fraction(0))

    def terms(self) -> dict[tuple[int, int], Fraction]:
        return {(n, s): c for n, row in enumerate(self.rows) for s, c in row.items()}

    def __add__(self, other: "BiSeries") -> "BiSeries":
        N = min(self.N, other.N)
        rows = []
        for n in range(N + 1):
            row = dict(self.rows[n])
            for s, c in other.rows[n].items():
                row[s] = row.get(s, Fraction(0)) + c
            rows.append(row)
        return BiSeries(rows)

    def neg_log_one_minus(self) -> "BiSeries":
        """Bivariate ``-log(1 - w)``, same recurrence as :class:`RatSeries`."""
        w = self.rows
        if w[0]:
            raise ValueError("-log(1-w) needs w with no t^0 terms")
        L: list[dict[int, Fraction]] = [{} for _ in range(self.N + 1)]
        for n in range(1, self.N + 1):
            acc = {s: n * c for s, c in w[n].items()}
            for k in range(1, n):
                if not L[k] or not w[n - k]:
                    continue
                for s1, c1 in L[k].items():
                    for s2, c2 in w[n - k].items():
                        acc[s1 + s2] = acc.get(s1 + s2, Fraction(0)) + k * c1 * c2
            L[n] = {s: c / n for s, c in acc.items() if c}
        return BiSeries(L)


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _check_N(N: int) -> None:
    if N < 1:
        raise ValueError("truncation order N must be >= 1")


@lru_cache(maxsize=None)
def _wedderburn(N: int) -> tuple[int, ...]:
    # Round k applies a <- t + (a^2 + a(t^2))/2 truncated at t^k; coefficient
    # k is final after round k, so nothing beyond it is worth carrying.
    a = [0] * (N + 1)
    for k in range(1, N + 1):
        new = [0, 1] + [0] * (k - 1)
        for n in range(2, k + 1):
            twice = sum(a[i] * a[n - i] for i in range(1, n))
            if n % 2 == 0:
                twice += a[n // 2]
            if twice & 1:
                raise ArithmeticError("binary-tree functional equation lost integrality")
            new[n] = twice >> 1
        a[: k + 1] = new[: k + 1]
    return tuple(a)


def wedderburn_series(N: int) -> RatSeries:
    """Generating function ``a(t)`` of rooted full binary trees up to symmetry.

    Solves ``a = t + (a^2 + a(t^2))/2`` by fixed-point iteration, exactly N
    rounds.
    """
    _check_N(N)
    a = RatSeries(_wedderburn(N))
    assert all(c.denominator == 1 and c >= 0 for c in a.coeffs)
    return a


def abelian_dims(N: int) -> list[int]:
    """Dimension of the degree-0 (abelian) part at each order; index = order."""
    _check_N(N)
    a = wedderburn_series((N + 1) // 2)
    dims = [0] * (N + 1)
    for n in range(1, N + 1, 2):
        dims[n] = int(a[(n + 1) // 2])
    return dims


def _witt(L: RatSeries, N: int) -> list[int]:
    dims = [0] * (N + 1)
    for n in range(1, N + 1):
        total = Fraction(0)
        for d in divisors(n):
            mu = mobius(d)
            if mu:
                total += Fraction(mu, d) * L[n // d]
        if total.denominator != 1 or total < 0:
            raise ArithmeticError(f"Witt formula gave non-integral dimension {total} at order {n}")
        dims[n] = int(total)
    return dims


def witt_dims(generator_counts: Union[Mapping[int, int], RatSeries], N: int) -> list[int]:
    """Dimensions of the free Lie algebra on a graded generating set.

    ``generator_counts`` maps order -> number of generators of that order, or
    is the generating series ``w(t)`` itself. Returns a list indexed by order
    (entry 0 is unused and zero).
    """
    _check_N(N)
    if isinstance(generator_counts, RatSeries):
        w = RatSeries(generator_counts.coeffs, N)
        if generator_counts.N < N:
            raise ValueError("generating series is truncated below N")
    else:
        if generator_counts.get(0, 0):
            raise ValueError("generators must have positive order")
        if any(c < 0 for c in generator_counts.values()):
            raise ValueError("generator counts must be nonnegative")
        w = RatSeries.zero(N)
        for order, count in generator_counts.items():
            if order <= N:
                w.coeffs[order] = Fraction(count)
    return _witt(w.neg_log_one_minus(), N)


def free_dims(N: int) -> list[int]:
    """Dimensions of the free Lie algebra on two generators of order 1."""
    return witt_dims({1: 2}, N)


def _free_part_series(N: int) -> RatSeries:
    # generators A (order 1) and [X, A] for X in the abelian part: t + a(t^2)
    a = wedderburn_series(max(N // 2, 1))
    return RatSeries.monomial(1, N) + RatSeries(a.coeffs, N).substitute_power(2)


def lacm_dims(N: int) -> list[int]:
    """Dimensions of L_P(A, B) by order: span(X) plus the free algebra on {A} u [X, A]."""
    _check_N(N)
    free = witt_dims(_free_part_series(N), N)
    abelian = abelian_dims(N)
    return [f + x for f, x in zip(free, abelian)]


def lacm_dims_bigraded(N: int) -> dict[tuple[int, int], int]:
    """Dimensions of L_P(A, B) by (order, degree); zero cells omitted.

    The free part uses ``s`` to track ``degree - 1``: ``A -> t s`` and
    ``[X, A] -> a(t^2) s^0``.
    """
    _check_N(N)
    a = wedderburn_series(max(N // 2, 1))
    terms: dict[tuple[int, int], object] = {(1, 1): 1}
    for k in range(1, N // 2 + 1):
        terms[(2 * k, 0)] = a[k]
    L = BiSeries.from_terms(terms, N).neg_log_one_minus()
    table: dict[tuple[int, int], int] = {}
    for n in range(1, N + 1):
        for s in range(0, n + 1):
            total = Fraction(0)
            for d in divisors(gcd(n, s)):
                mu = mobius(d)
                if mu:
                    total += Fraction(mu, d) * L.coeff(n // d, s // d)
            if total.denominator != 1 or total < 0:
                raise ArithmeticError(f"bigraded Witt formula non-integral at ({n}, {s})")
            if total:
                table[(n, s + 1)] = int(total)
    for n, x in enumerate(abelian_dims(N)):
        if x:
            table[(n, 0)] = x
    return table
