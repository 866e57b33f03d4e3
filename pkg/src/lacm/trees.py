"""Colored free trees, the grafting product and the morphism Theta.

A tree has thick vertices (potential-energy factors) and thin vertices
(momenta). Thin vertices are leaves hanging off a thick vertex, except for the
two one-vertex trees. An edge from a thick vertex to a thin leaf is a
*free-end* edge. With ``f`` free ends and ``k`` thick vertices a tree has
order ``f + 2k - 1`` and degree ``f``; the lone thin vertex has order 1 and
degree 2.

Canonical codes are AHU strings rooted at the centroid of the thick core:
``o`` is a thick vertex, ``.`` a thin one, children in parentheses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from . import lie
from .lie import Expr, LieVector
from .series import lacm_dims
from .vector import SparseVector

__all__ = [
    "ColoredTree",
    "TreeVector",
    "THICK",
    "THIN",
    "canonical_form",
    "enumerate_trees",
    "tree_dims_bigraded",
    "tree_dims",
    "graft",
    "tree_bracket",
    "theta",
    "theta_rank",
    "RankReport",
    "rational_rank",
]


class ColoredTree:
    """An unrooted tree with thick/thin vertex colors, stored in canonical labeling.

    ``colors[i]`` is True for a thick vertex. Equality and hashing go through
    the canonical code, so isomorphic trees are equal.
    """

    __slots__ = ("colors", "edges", "code", "_adj")

    def __init__(self, colors: Sequence[bool], edges: Iterable[tuple[int, int]]):
        colors = tuple(bool(c) for c in colors)
        edges = [tuple(e) for e in edges]
        adj = _validate(colors, edges)
        code, order = _canonical(colors, adj)
        relabel = {old: new for new, old in enumerate(order)}
        self.colors = tuple(colors[old] for old in order)
        self.edges = tuple(
            sorted(tuple(sorted((relabel[a], relabel[b]))) for a, b in edges)
        )
        self.code = code
        self._adj = None

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        if self._adj is None:
            adj: list[list[int]] = [[] for _ in self.colors]
            for a, b in self.edges:
                adj[a].append(b)
                adj[b].append(a)
            self._adj = tuple(tuple(x) for x in adj)
        return self._adj

    @property
    def size(self) -> int:
        return len(self.colors)

    @property
    def thick_vertices(self) -> list[int]:
        return [i for i, c in enumerate(self.colors) if c]

    @property
    def free_ends(self) -> list[tuple[int, int]]:
        """Free-end edges as (thick vertex, thin vertex) pairs."""
        out = []
        for a, b in self.edges:
            if self.colors[a] and not self.colors[b]:
                out.append((a, b))
            elif self.colors[b] and not self.colors[a]:
                out.append((b, a))
        return out

    @property
    def is_thin_atom(self) -> bool:
        return self.size == 1 and not self.colors[0]

    @property
    def is_thick_atom(self) -> bool:
        return self.size == 1 and self.colors[0]

    @property
    def degree(self) -> int:
        return 2 if self.is_thin_atom else len(self.free_ends)

    @property
    def order(self) -> int:
        if self.is_thin_atom:
            return 1
        return len(self.free_ends) + 2 * len(self.thick_vertices) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, ColoredTree) and self.code == other.code

    def __hash__(self) -> int:
        return hash(self.code)

    def __lt__(self, other: "ColoredTree") -> bool:
        return (self.order, self.degree, self.code) < (other.order, other.degree, other.code)

    def __repr__(self) -> str:
        return f"ColoredTree({self.code!r})"

    def __str__(self) -> str:
        return self.code

    @classmethod
    def from_code(cls, code: str) -> "ColoredTree":
        """Rebuild a tree from a (not necessarily canonical) rooted code string."""
        colors: list[bool] = []
        edges: list[tuple[int, int]] = []
        stack: list[int] = []
        last = None
        for ch in code:
            if ch in "o.":
                colors.append(ch == "o")
                last = len(colors) - 1
                if stack:
                    edges.append((stack[-1], last))
            elif ch == "(":
                if last is None:
                    raise ValueError(f"malformed tree code {code!r}")
                stack.append(last)
            elif ch == ")":
                if not stack:
                    raise ValueError(f"malformed tree code {code!r}")
                stack.pop()
            else:
                raise ValueError(f"unexpected {ch!r} in tree code {code!r}")
        if stack or not colors:
            raise ValueError(f"malformed tree code {code!r}")
        return cls(colors, edges)


def _validate(colors: tuple[bool, ...], edges: list[tuple[int, int]]) -> list[list[int]]:
    n = len(colors)
    if n == 0:
        raise ValueError("a tree needs at least one vertex")
    if len(edges) != n - 1:
        raise ValueError("a tree on n vertices has n - 1 edges")
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        if not (0 <= a < n and 0 <= b < n) or a == b:
            raise ValueError(f"bad edge {(a, b)}")
        if not colors[a] and not colors[b]:
            raise ValueError("no edge may join two thin vertices")
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    todo = [0]
    while todo:
        v = todo.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    if len(seen) != n:
        raise ValueError("edges do not form a connected tree")
    for v in range(n):
        if not colors[v] and len(adj[v]) > 1:
            raise ValueError("thin vertices must have exactly one edge")
    return adj


def _core_centroids(colors: tuple[bool, ...], adj: list[list[int]]) -> list[int]:
    core = [v for v in range(len(colors)) if colors[v]]
    if not core:
        return [0]
    in_core = set(core)
    root = core[0]
    parent = {root: -1}
    order = [root]
    for v in order:
        for w in adj[v]:
            if w in in_core and w not in parent:
                parent[w] = v
                order.append(w)
    sub = {v: 1 for v in core}
    for v in reversed(order):
        if parent[v] >= 0:
            sub[parent[v]] += sub[v]
    total = len(core)
    best = total + 1
    out: list[int] = []
    for v in core:
        heaviest = total - sub[v]
        for w in adj[v]:
            if w in in_core and parent.get(w) == v:
                heaviest = max(heaviest, sub[w])
        if heaviest < best:
            best, out = heaviest, [v]
        elif heaviest == best:
            out.append(v)
    return out


def _rooted(v: int, parent: int, colors, adj, codes: dict[int, str]) -> str:
    kids = sorted(_rooted(w, v, colors, adj, codes) for w in adj[v] if w != parent)
    code = ("o" if colors[v] else ".") + (f"({''.join(kids)})" if kids else "")
    codes[v] = code
    return code


def _canonical(colors: tuple[bool, ...], adj: list[list[int]]) -> tuple[str, list[int]]:
    best = None
    for c in _core_centroids(colors, adj):
        codes: dict[int, str] = {}
        code = _rooted(c, -1, colors, adj, codes)
        if best is None or code < best[0]:
            best = (code, c, codes)
    code, root, codes = best
    order = [root]
    parent = {root: -1}
    for v in order:
        kids = [w for w in adj[v] if w != parent[v]]
        kids.sort(key=lambda w: codes[w])
        for w in kids:
            parent[w] = v
            order.append(w)
    return code, order


def canonical_form(tree: Union[ColoredTree, tuple[Sequence[bool], Iterable[tuple[int, int]]]]) -> str:
    """Canonical code of a tree, or of a ``(colors, edges)`` pair."""
    if isinstance(tree, ColoredTree):
        return tree.code
    colors, edges = tree
    return ColoredTree(colors, edges).code


THICK = ColoredTree([True], [])
THIN = ColoredTree([False], [])


class TreeVector(SparseVector):
    """Element of span(T) as ``{ColoredTree: coefficient}``."""

    def __str__(self) -> str:
        if not self:
            return "0"
        return " + ".join(f"{c}*{t.code}" for t, c in sorted(self.items()))


def _add_leaf(tree: ColoredTree, at: int, thick: bool) -> ColoredTree:
    n = tree.size
    return ColoredTree(tree.colors + (thick,), tree.edges + ((at, n),))


@lru_cache(maxsize=None)
def _trees_km(k: int, m: int) -> tuple[ColoredTree, ...]:
    """Trees with ``k >= 1`` thick vertices and ``m`` thin leaves."""
    if k == 1 and m == 0:
        return (THICK,)
    found: dict[str, ColoredTree] = {}
    if m == 0:
        for t in _trees_km(k - 1, 0):
            for v in range(t.size):
                child = _add_leaf(t, v, True)
                found.setdefault(child.code, child)
    else:
        for t in _trees_km(k, m - 1):
            for v in t.thick_vertices:
                child = _add_leaf(t, v, False)
                found.setdefault(child.code, child)
    return tuple(found[c] for c in sorted(found))


def enumerate_trees(max_order: int) -> dict[tuple[int, int], list[ColoredTree]]:
    """All trees of order <= max_order, keyed by (order, degree)."""
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    table: dict[tuple[int, int], list[ColoredTree]] = {(1, 2): [THIN]}
    for k in range(1, (max_order + 1) // 2 + 1):
        for m in range(0, max_order + 2 - 2 * k):
            trees = list(_trees_km(k, m))
            if trees:
                table.setdefault((2 * k - 1 + m, m), []).extend(trees)
    return table


def tree_dims_bigraded(max_order: int) -> dict[tuple[int, int], int]:
    return {key: len(trees) for key, trees in enumerate_trees(max_order).items()}


def tree_dims(max_order: int) -> list[int]:
    """Number of trees of each order; index = order."""
    dims = [0] * (max_order + 1)
    for (n, _), count in tree_dims_bigraded(max_order).items():
        dims[n] += count
    return dims


def _graft_onto(u: ColoredTree, x: int, v: ColoredTree, end: tuple[int, int]) -> ColoredTree:
    """Replace the thin leaf of free end ``end`` of ``v`` by an edge to vertex ``x`` of ``u``."""
    y, z = end
    offset = u.size
    index = {}
    for w in range(v.size):
        if w != z:
            index[w] = offset + len(index)
    colors = u.colors + tuple(v.colors[w] for w in range(v.size) if w != z)
    edges = list(u.edges)
    edges.extend((index[a], index[b]) for a, b in v.edges if z not in (a, b))
    edges.append((x, index[y]))
    return ColoredTree(colors, edges)


@lru_cache(maxsize=None)
def _graft_basis(u: ColoredTree, v: ColoredTree) -> TreeVector:
    out = TreeVector()
    if u.is_thin_atom or v.is_thick_atom:
        return out
    if v.is_thin_atom:
        for x in u.thick_vertices:
            out.add_term(_add_leaf(u, x, False), 1)
        return out
    for x in u.thick_vertices:
        for end in v.free_ends:
            out.add_term(_graft_onto(u, x, v, end), 1)
    return out


TreeLike = Union[ColoredTree, Mapping[ColoredTree, object]]


def _as_vector(x: TreeLike) -> Mapping[ColoredTree, object]:
    return {x: 1} if isinstance(x, ColoredTree) else x


def graft(u: TreeLike, v: TreeLike) -> TreeVector:
    """Bilinear grafting product ``u |> v``: free ends of ``v`` onto thick vertices of ``u``."""
    out = TreeVector()
    for tu, cu in _as_vector(u).items():
        for tv, cv in _as_vector(v).items():
            out.iadd_scaled(_graft_basis(tu, tv), cu * cv)
    return out


def tree_bracket(u: TreeLike, v: TreeLike) -> TreeVector:
    """``[u, v] = u |> v - v |> u``."""
    return graft(u, v) - graft(v, u)


@lru_cache(maxsize=None)
def _theta_expr(x: Expr) -> TreeVector:
    if x is lie.A:
        return TreeVector({THIN: 1})
    if x is lie.B:
        return TreeVector({THICK: 1})
    return tree_bracket(_theta_expr(x.left), _theta_expr(x.right))


def theta(x: Union[Expr, str, Mapping[Expr, object]]) -> TreeVector:
    """The class-P morphism L_P(A, B) -> span(T) with A -> thin atom, B -> thick atom."""
    if isinstance(x, str):
        x = lie.parse(x)
    if isinstance(x, Expr):
        return _theta_expr(x).copy()
    out = TreeVector()
    for e, c in x.items():
        out.iadd_scaled(_theta_expr(e), c)
    return out


def rational_rank(rows: Sequence[Mapping[object, object]]) -> int:
    """Exact rank over Q of sparse rows given as ``{column: value}`` dicts."""
    pivots: dict[object, dict[object, Fraction]] = {}
    rank = 0
    for row in rows:
        r = {k: Fraction(v) for k, v in row.items() if v}
        while r:
            col = min(r, key=repr)
            if col not in pivots:
                pivots[col] = r
                rank += 1
                break
            p = pivots[col]
            f = r[col] / p[col]
            for k, v in p.items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return rank


@dataclass(frozen=True)
class RankReport:
    order: int
    rank: int
    dim_lacm: int
    dim_trees: int

    @property
    def passed(self) -> bool:
        return self.rank == self.dim_lacm


def theta_rank(max_order: int) -> list[RankReport]:
    """Per-order rank of Theta on the quotient basis (injectivity evidence)."""
    if not 1 <= max_order <= 12:
        raise ValueError("theta_rank supports 1 <= max_order <= 12")
    dl = lacm_dims(max_order)
    dt = tree_dims(max_order)
    out = []
    for n in range(1, max_order + 1):
        rows = [{t.code: c for t, c in _theta_expr(u).items()} for u in lie.quotient_basis(n)]
        out.append(RankReport(n, rational_rank(rows), dl[n], dt[n]))
    return out
