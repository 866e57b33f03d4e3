"""Differential operators with polynomial coefficients and the operator realization.

``A`` goes to half the Laplacian and ``B`` to multiplication by ``V``. Brackets
are evaluated with the opposite commutator ``Q P - P Q`` by default: that is
the reading under which the top-degree part equals the Poisson realization
with ``p_j`` replaced by ``d/dq_j`` (the standard ``P Q - Q P`` gives the same
operators up to the sign ``(-1)^(order - 1)``).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Mapping, Union

from . import lie
from .lie import Expr
from .mech import Number, PolyPhase

__all__ = ["DiffOperator", "compose", "commutator", "nu", "phi_V", "phi_hat", "ProjectedOperator"]

QPoly = dict  # {q exponent tuple: coefficient}


def _qpoly_mul(f: QPoly, g: QPoly) -> QPoly:
    out: QPoly = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _qpoly_diff(f: QPoly, gamma: tuple[int, ...]) -> QPoly:
    out: QPoly = {}
    for m, c in f.items():
        coeff = c
        mm = []
        for e, g in zip(m, gamma):
            if g > e:
                coeff = 0
                break
            for k in range(g):
                coeff *= e - k
            mm.append(e - g)
        if coeff:
            out[tuple(mm)] = out.get(tuple(mm), 0) + coeff
    return out


def _sub_indices(alpha: tuple[int, ...]):
    if not alpha:
        yield ()
        return
    for g in range(alpha[0] + 1):
        for rest in _sub_indices(alpha[1:]):
            yield (g,) + rest


class DiffOperator:
    """``sum_alpha c_alpha(q) d^alpha`` with all derivatives to the right."""

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: Mapping[tuple[int, ...], QPoly] | None = None):
        self.d = d
        self.terms: dict[tuple[int, ...], QPoly] = {}
        for alpha, coeff in (terms or {}).items():
            if len(alpha) != d:
                raise ValueError("multi-index length does not match the dimension")
            coeff = {m: c for m, c in coeff.items() if c}
            if any(len(m) != d for m in coeff):
                raise ValueError("coefficient monomial length does not match the dimension")
            if coeff:
                self.terms[tuple(alpha)] = coeff

    @classmethod
    def multiplication(cls, f: PolyPhase) -> "DiffOperator":
        if f.depends_on_p():
            raise ValueError("multiplication operators need a p-free polynomial")
        return nu(f)

    @classmethod
    def derivative(cls, d: int, j: int) -> "DiffOperator":
        alpha = [0] * d
        alpha[j] = 1
        return cls(d, {tuple(alpha): {(0,) * d: 1}})

    @classmethod
    def identity(cls, d: int) -> "DiffOperator":
        return cls(d, {(0,) * d: {(0,) * d: 1}})

    @classmethod
    def half_laplacian(cls, d: int) -> "DiffOperator":
        terms = {}
        for j in range(d):
            alpha = [0] * d
            alpha[j] = 2
            terms[tuple(alpha)] = {(0,) * d: Fraction(1, 2)}
        return cls(d, terms)

    @property
    def degree(self) -> int:
        """Highest derivative order present (-1 for the zero operator)."""
        return max((sum(a) for a in self.terms), default=-1)

    def project(self, n: int) -> "DiffOperator":
        return DiffOperator(self.d, {a: c for a, c in self.terms.items() if sum(a) == n})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, DiffOperator) and self.d == other.d and self.terms == other.terms

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        if self.d != other.d:
            raise ValueError(f"dimension mismatch: {self.d} vs {other.d}")
        out = {a: dict(c) for a, c in self.terms.items()}
        for a, c in other.terms.items():
            row = out.setdefault(a, {})
            for m, v in c.items():
                row[m] = row.get(m, 0) + v
        return DiffOperator(self.d, out)

    def __neg__(self) -> "DiffOperator":
        return DiffOperator(self.d, {a: {m: -v for m, v in c.items()} for a, c in self.terms.items()})

    def __sub__(self, other: "DiffOperator") -> "DiffOperator":
        return self + (-other)

    def scale(self, k: Number) -> "DiffOperator":
        return DiffOperator(self.d, {a: {m: v * k for m, v in c.items()} for a, c in self.terms.items()})

    def __matmul__(self, other: "DiffOperator") -> "DiffOperator":
        return compose(self, other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for alpha in sorted(self.terms):
            coeff = " + ".join(
                f"{c}" + "".join(f"*q{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
                for m, c in sorted(self.terms[alpha].items())
            )
            ders = "".join(f"d{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(alpha) if e)
            parts.append(f"({coeff})" + (f"*{ders}" if ders else ""))
        return " + ".join(parts)

    __repr__ = __str__


def compose(P: DiffOperator, Q: DiffOperator) -> DiffOperator:
    """Normal form of ``P o Q`` by the Leibniz rule."""
    if P.d != Q.d:
        raise ValueError(f"dimension mismatch: {P.d} vs {Q.d}")
    out: dict[tuple[int, ...], QPoly] = {}
    for alpha, a in P.terms.items():
        for gamma in _sub_indices(alpha):
            binom = 1
            for x, g in zip(alpha, gamma):
                binom *= comb(x, g)
            rest = tuple(x - g for x, g in zip(alpha, gamma))
            for beta, b in Q.terms.items():
                db = _qpoly_diff(b, gamma)
                if not db:
                    continue
                prod = _qpoly_mul(a, db)
                key = tuple(r + y for r, y in zip(rest, beta))
                row = out.setdefault(key, {})
                for m, v in prod.items():
                    row[m] = row.get(m, 0) + binom * v
    return DiffOperator(P.d, out)


def commutator(P: DiffOperator, Q: DiffOperator) -> DiffOperator:
    """``P Q - Q P``."""
    return compose(P, Q) - compose(Q, P)


def nu(f: PolyPhase) -> DiffOperator:
    """Replace each ``p_j`` by ``d/dq_j`` (coefficients left, derivatives right)."""
    d = f.n
    out: dict[tuple[int, ...], QPoly] = {}
    for m, c in f.terms.items():
        row = out.setdefault(m[:d], {})
        row[m[d:]] = row.get(m[d:], 0) + c
    return DiffOperator(d, out)


def phi_V(V: PolyPhase, x: Union[Expr, str, Mapping[Expr, Number]], convention: str = "opposite") -> DiffOperator:
    """Operator image of ``x`` with ``A -> Laplacian / 2`` and ``B -> V``.

    ``convention="opposite"`` evaluates ``[x, y]`` as ``phi(y) phi(x) - phi(x) phi(y)``;
    ``"standard"`` as ``phi(x) phi(y) - phi(y) phi(x)``.
    """
    if convention not in ("opposite", "standard"):
        raise ValueError("convention must be 'opposite' or 'standard'")
    if V.depends_on_p():
        raise ValueError("potential must not depend on p")
    d = V.n
    images: dict[Expr, DiffOperator] = {lie.A: DiffOperator.half_laplacian(d), lie.B: nu(V)}

    def walk(e: Expr) -> DiffOperator:
        if e not in images:
            P, Q = walk(e.left), walk(e.right)
            images[e] = commutator(Q, P) if convention == "opposite" else commutator(P, Q)
        return images[e]

    if isinstance(x, str):
        x = lie.parse(x)
    if isinstance(x, Expr):
        return walk(x)
    out = DiffOperator(d)
    for e, c in x.items():
        out = out + walk(e).scale(c)
    return out


class ProjectedOperator(DiffOperator):
    """Top-degree part of an operator, remembering the highest discarded degree."""

    __slots__ = ("discarded_degree",)

    def __init__(self, d, terms=None, discarded_degree: int = -1):
        super().__init__(d, terms)
        self.discarded_degree = discarded_degree


def phi_hat(V: PolyPhase, x: Union[Expr, str, Mapping[Expr, Number]], convention: str = "opposite") -> ProjectedOperator:
    """Projection of :func:`phi_V` to operator degree ``degree(x)``."""
    if isinstance(x, str):
        x = lie.parse(x)
    degrees = {x.degree} if isinstance(x, Expr) else {e.degree for e, c in x.items() if c}
    if len(degrees) > 1:
        raise ValueError("phi_hat needs an element homogeneous in degree")
    n = degrees.pop() if degrees else 0
    full = phi_V(V, x, convention)
    rest = [sum(a) for a in full.terms if sum(a) != n]
    return ProjectedOperator(V.n, full.project(n).terms, max(rest, default=-1))
