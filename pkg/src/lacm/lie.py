"""Bracket expressions over {A, B}, the generalized Hall basis and L_P(A, B).

``A`` has order 1 and degree 2 (kinetic energy), ``B`` has order 1 and degree
0 (potential energy). A bracket adds orders and drops degrees by one, clamped
at zero. Bracket expressions are interned, so structurally equal expressions
are the same object and can be compared with ``is``.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .vector import Coefficient, SparseVector

__all__ = [
    "A",
    "B",
    "Expr",
    "HallElement",
    "LieVector",
    "bracket",
    "parse",
    "compare",
    "is_hall",
    "is_quotient_basis",
    "build_hall_set",
    "hall_set_json",
    "hall_by_order",
    "quotient_basis",
    "star",
    "decompose",
    "lie_bracket",
    "dims_bigraded",
]


class Expr:
    """An iterated Lie bracket in the generators ``A`` and ``B``.

    Build composites with :func:`bracket` (or ``x @ y``); never instantiate
    directly.
    """

    __slots__ = ("left", "right", "name", "order", "degree", "key", "_text")

    def __init__(self, left, right, name, order, degree, key):
        self.left = left
        self.right = right
        self.name = name
        self.order = order
        self.degree = degree
        self.key = key
        self._text = None

    @property
    def is_generator(self) -> bool:
        return self.name is not None

    def __str__(self) -> str:
        if self._text is None:
            if self.name is not None:
                self._text = self.name
            else:
                self._text = f"[{self.left},{self.right}]"
        return self._text

    def __repr__(self) -> str:
        return f"Expr({self})"

    def __matmul__(self, other: "Expr") -> "Expr":
        return bracket(self, other)

    def __lt__(self, other: "Expr") -> bool:
        return self.key < other.key

    def __le__(self, other: "Expr") -> bool:
        return self.key <= other.key

    def __gt__(self, other: "Expr") -> bool:
        return self.key > other.key

    def __ge__(self, other: "Expr") -> bool:
        return self.key >= other.key

    def __reduce__(self):
        return (parse, (str(self),))


# Sort key: degree first, then order, then right factor, then left factor.
# Generators are the only elements of order 1, so their (degree, order) pair
# is already unique.
A = Expr(None, None, "A", 1, 2, (2, 1))
B = Expr(None, None, "B", 1, 0, (0, 1))

_interned: dict[tuple[Expr, Expr], Expr] = {}
_intern_lock = threading.Lock()


def bracket(x: Expr, y: Expr) -> Expr:
    """Return the (interned) expression ``[x, y]``."""
    found = _interned.get((x, y))
    if found is not None:
        return found
    degree = max(x.degree + y.degree - 1, 0)
    order = x.order + y.order
    expr = Expr(x, y, None, order, degree, (degree, order, y.key, x.key))
    with _intern_lock:
        return _interned.setdefault((x, y), expr)


def parse(text: str) -> Expr:
    """Parse ``expr := "A" | "B" | "[" expr "," expr "]"`` (no whitespace)."""
    pos = 0

    def walk() -> Expr:
        nonlocal pos
        if pos >= len(text):
            raise ValueError(f"unexpected end of bracket expression {text!r}")
        ch = text[pos]
        if ch == "A" or ch == "B":
            pos += 1
            return A if ch == "A" else B
        if ch != "[":
            raise ValueError(f"unexpected {ch!r} at position {pos} in {text!r}")
        pos += 1
        left = walk()
        if pos >= len(text) or text[pos] != ",":
            raise ValueError(f"expected ',' at position {pos} in {text!r}")
        pos += 1
        right = walk()
        if pos >= len(text) or text[pos] != "]":
            raise ValueError(f"expected ']' at position {pos} in {text!r}")
        pos += 1
        return bracket(left, right)

    expr = walk()
    if pos != len(text):
        raise ValueError(f"trailing characters in {text!r}")
    return expr


def compare(x: Expr, y: Expr) -> int:
    """Three-way comparison under the Hall total order: -1, 0 or 1."""
    if x is y:
        return 0
    return -1 if x.key < y.key else 1


@lru_cache(maxsize=None)
def is_hall(x: Expr) -> bool:
    """Hall membership: ``[a, b]`` with ``a, b`` Hall, ``a < b`` and either
    ``b`` a generator or ``b = [c, d]`` with ``c <= a``."""
    if x.is_generator:
        return True
    a, b = x.left, x.right
    if not (a < b and is_hall(a) and is_hall(b)):
        return False
    return b.is_generator or b.left <= a


@lru_cache(maxsize=None)
def is_quotient_basis(x: Expr) -> bool:
    """True for Hall elements that survive in L_P(A, B) = L(A, B)/I."""
    if not is_hall(x):
        return False
    if x.is_generator:
        return True
    return x.right.degree > 0 and is_quotient_basis(x.left) and is_quotient_basis(x.right)


@dataclass(frozen=True)
class HallElement:
    expr: Expr
    order: int
    degree: int
    classification: str  # "basis" or "ideal"

    @property
    def is_basis(self) -> bool:
        return self.classification == "basis"

    def as_record(self) -> dict:
        return {
            "order": self.order,
            "degree": self.degree,
            "expr": str(self.expr),
            "class": self.classification,
        }


class _HallTable:
    """Hall elements grouped by order, grown on demand."""

    def __init__(self):
        self._levels: list[list[Expr]] = [[], [B, A]]
        self._lock = threading.Lock()

    def upto(self, max_order: int) -> list[list[Expr]]:
        with self._lock:
            while len(self._levels) <= max_order:
                self._levels.append(self._next_level(len(self._levels)))
            return self._levels[: max_order + 1]

    def _next_level(self, n: int) -> list[Expr]:
        out = []
        for k in range(1, n):
            for a in self._levels[k]:
                for b in self._levels[n - k]:
                    if a < b and (b.is_generator or b.left <= a):
                        out.append(bracket(a, b))
        out.sort(key=lambda e: e.key)
        return out


_hall_table = _HallTable()


def hall_by_order(max_order: int) -> list[list[Expr]]:
    """Hall elements of each order ``0..max_order`` (index 0 is empty)."""
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    return [list(level) for level in _hall_table.upto(max_order)]


def build_hall_set(max_order: int) -> list[HallElement]:
    """All Hall elements of order <= max_order, sorted by the total order."""
    exprs = [e for level in hall_by_order(max_order) for e in level]
    exprs.sort(key=lambda e: e.key)
    return [
        HallElement(e, e.order, e.degree, "basis" if is_quotient_basis(e) else "ideal")
        for e in exprs
    ]


def hall_set_json(max_order: int, quotient_only: bool = False) -> str:
    rows = [h.as_record() for h in build_hall_set(max_order) if h.is_basis or not quotient_only]
    return json.dumps(rows)


def quotient_basis(n: int) -> list[Expr]:
    """Quotient-basis elements of order exactly ``n``, sorted."""
    return [e for e in hall_by_order(n)[n] if is_quotient_basis(e)]


def star(x1: Expr, x2: Expr) -> Expr:
    """The commutative product ``x1 * x2 = [x2, [x1, A]]`` on degree-0 elements."""
    if x1.degree != 0 or x2.degree != 0:
        raise ValueError("star is only defined for degree-0 elements")
    return bracket(x2, bracket(x1, A))


class LieVector(SparseVector):
    """Coordinates of an element of L_P(A, B) in the quotient basis."""

    def __str__(self) -> str:
        if not self:
            return "0"
        items = sorted(self.items(), key=lambda kv: kv[0].key)
        return " + ".join(f"{c}*{e}" for e, c in items)

    def degrees(self) -> set[int]:
        return {e.degree for e in self}

    def orders(self) -> set[int]:
        return {e.order for e in self}


@lru_cache(maxsize=None)
def _qbracket(u: Expr, v: Expr) -> LieVector:
    """Bracket of two quotient-basis elements, expanded in the quotient basis."""
    if u is v or (u.degree == 0 and v.degree == 0):
        return LieVector()
    if v < u:
        return -_qbracket(v, u)
    if v.is_generator or v.left <= u:
        w = bracket(u, v)
        return LieVector({w: 1}) if is_quotient_basis(w) else LieVector()
    # Jacobi: [u, [c, d]] = [[u, c], d] + [c, [u, d]]
    c, d = v.left, v.right
    out = LieVector()
    for x, coeff in _qbracket(u, c).items():
        out.iadd_scaled(_qbracket(x, d), coeff)
    for y, coeff in _qbracket(u, d).items():
        out.iadd_scaled(_qbracket(c, y), coeff)
    return out


def lie_bracket(x: Mapping[Expr, Coefficient], y: Mapping[Expr, Coefficient]) -> LieVector:
    """Bracket of two quotient-basis coordinate vectors."""
    out = LieVector()
    for u, cu in x.items():
        for v, cv in y.items():
            out.iadd_scaled(_qbracket(u, v), cu * cv)
    return out


@lru_cache(maxsize=None)
def _decompose_expr(x: Expr) -> LieVector:
    if x.is_generator:
        return LieVector({x: 1})
    if is_quotient_basis(x):
        return LieVector({x: 1})
    return lie_bracket(_decompose_expr(x.left), _decompose_expr(x.right))


LinearCombination = Union[Expr, str, Mapping[Union[Expr, str], Coefficient], Iterable]


def decompose(expr: LinearCombination) -> LieVector:
    """Normal form of a bracket expression (or linear combination of them).

    Accepts an :class:`Expr`, its string form, or a mapping / iterable of
    ``(expr, coefficient)`` pairs. Ideal elements project to zero.
    """
    if isinstance(expr, str):
        expr = parse(expr)
    if isinstance(expr, Expr):
        return _decompose_expr(expr).copy()
    items = expr.items() if isinstance(expr, Mapping) else expr
    out = LieVector()
    for term, coeff in items:
        if isinstance(term, str):
            term = parse(term)
        if isinstance(coeff, float):
            coeff = Fraction(coeff)
        out.iadd_scaled(_decompose_expr(term), coeff)
    return out


def dims_bigraded(max_order: int) -> dict[tuple[int, int], int]:
    """Number of quotient-basis elements for each (order, degree) pair."""
    table: dict[tuple[int, int], int] = {}
    for level in hall_by_order(max_order)[1:]:
        for e in level:
            if is_quotient_basis(e):
                table[(e.order, e.degree)] = table.get((e.order, e.degree), 0) + 1
    return table
