"""Sparse vectors with exact coefficients, keyed by basis objects."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, TypeVar, Union

Coefficient = Union[int, Fraction]
K = TypeVar("K", bound=Hashable)


class SparseVector(dict):
    """A finite linear combination ``{basis element: coefficient}``.

    Zero coefficients are never stored. Coefficients stay exact (``int`` or
    ``Fraction``); nothing here ever produces a float.
    """

    def __init__(self, items: Iterable | dict | None = None):
        super().__init__()
        if items is None:
            return
        if isinstance(items, dict):
            items = items.items()
        for key, coeff in items:
            self.add_term(key, coeff)

    def add_term(self, key, coeff: Coefficient) -> None:
        if not coeff:
            return
        value = self.get(key, 0) + coeff
        if value:
            self[key] = value
        else:
            del self[key]

    def iadd_scaled(self, other: dict, scale: Coefficient = 1) -> "SparseVector":
        if scale:
            for key, coeff in other.items():
                self.add_term(key, scale * coeff)
        return self

    def copy(self):
        out = type(self)()
        dict.update(out, self)
        return out

    def __add__(self, other):
        return self.copy().iadd_scaled(other)

    def __sub__(self, other):
        return self.copy().iadd_scaled(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, scale: Coefficient):
        out = type(self)()
        if scale:
            for key, coeff in self.items():
                dict.__setitem__(out, key, coeff * scale)
        return out

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return len(self) > 0

    def __repr__(self) -> str:
        if not self:
            return "0"
        parts = []
        for key, coeff in self.items():
            parts.append(f"{coeff}*{key}")
        return " + ".join(parts)
