"""Published images of low-order basis elements in colored trees.

Each row lists a bracket expression, its degree and the tree expansion as
printed, with trees given as rooted codes (``o`` thick, ``.`` thin). Trees
were identified from the printed elementary-Hamiltonian sums, which are
unambiguous; signs are reproduced as printed and are known to disagree with
the Poisson-bracket convention on some rows.
"""

from __future__ import annotations

from typing import Mapping

from .lie import Expr, parse
from .trees import ColoredTree

__all__ = ["REFERENCE_IMAGES", "reference_rows", "reference_sign"]

REFERENCE_IMAGES: tuple[tuple[str, int, tuple[tuple[int, str], ...]], ...] = (
    ("B", 0, ((1, "o"),)),
    ("[B,[B,A]]", 0, ((1, "o(o)"),)),
    ("[[B,[B,A]],[B,A]]", 0, ((2, "o(oo)"),)),
    ("[B,A]", 1, ((-1, "o(.)"),)),
    ("[[B,[B,A]],A]", 1, ((2, "o(o(.))"),)),
    ("[[[B,[B,A]],[B,A]],A]", 1, ((4, "o(o(o(.)))"), (2, "o(oo.)"))),
    ("[[B,A],[[B,[B,A]],A]]", 1, ((2, "o(oo.)"),)),
    ("A", 2, ((1, "."),)),
    ("[[B,A],A]", 2, ((1, "o(..)"),)),
    ("[[[B,[B,A]],A],A]", 2, ((2, "o(.o(.))"), (-2, "o(o..)"))),
    ("[[B,A],[[B,A],A]]", 2, ((2, "o(.o(.))"), (1, "o(o..)"))),
    ("[A,[[B,A],A]]", 3, ((1, "o(...)"),)),
    ("[A,[[[B,[B,A]],A],A]]", 3, ((-6, "o(.o(..))"), (-2, "o(o...)"))),
    ("[A,[[B,A],[[B,A],A]]]", 3, ((-3, "o(.o(..))"), (1, "o(o...)"))),
    ("[A,[A,[[B,A],A]]]", 4, ((1, "o(....)"),)),
    ("[A,[A,[A,[[B,A],A]]]]", 5, ((1, "o(.....)"),)),
)


def reference_rows() -> list[tuple[Expr, int, dict[ColoredTree, int]]]:
    return [
        (parse(e), deg, {ColoredTree.from_code(code): c for c, code in terms})
        for e, deg, terms in REFERENCE_IMAGES
    ]


_BY_EXPR = {e: terms for e, _, terms in reference_rows()}


def reference_sign(x: Expr, image: Mapping[ColoredTree, object]) -> str | None:
    """Classify a computed image against the printed row for ``x``.

    ``'+'`` or ``'-'`` when the two agree up to one overall sign, ``'mixed'``
    when trees and magnitudes agree but individual signs do not, and
    ``'mismatch'`` otherwise. ``None`` if ``x`` is not tabulated.
    """
    printed = _BY_EXPR.get(x)
    if printed is None:
        return None
    computed = {t: c for t, c in image.items() if c}
    if computed == printed:
        return "+"
    if computed == {t: -c for t, c in printed.items()}:
        return "-"
    if computed.keys() == printed.keys() and all(abs(computed[t]) == abs(printed[t]) for t in printed):
        return "mixed"
    return "mismatch"
