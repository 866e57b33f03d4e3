"""Phase-space polynomials, Poisson brackets and realizations of L_P(A, B).

Variables are ``p_0..p_{n-1}`` and ``q_0..q_{n-1}``; a monomial is an
exponent tuple of length ``2n`` with the momenta first. The Poisson bracket is
``{f, g} = sum_i f_{q_i} g_{p_i} - f_{p_i} g_{q_i}``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Iterable, Mapping, Sequence, Union

from . import lie
from .lie import Expr
from .trees import ColoredTree, TreeVector, theta

__all__ = [
    "PolyPhase",
    "MechSystem",
    "poisson",
    "phi",
    "euclidean_system",
    "general_system",
    "random_potential",
    "random_metric",
    "theorem2_basis",
    "theorem2_system",
    "realization_matrix",
    "RealizationReport",
    "elementary_hamiltonian",
    "psi_factorization_check",
    "FactorizationRow",
    "calvo_potential",
    "calvo_separation",
    "CalvoReport",
]

Number = Union[int, Fraction]


class PolyPhase:
    """Sparse polynomial in ``p_0..p_{n-1}, q_0..q_{n-1}`` with exact coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple[int, ...], Number] | None = None):
        self.n = n
        self.terms: dict[tuple[int, ...], Number] = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) != 2 * n:
                    raise ValueError("monomial length does not match the number of variables")
                if c:
                    self.terms[mono] = self.terms.get(mono, 0) + c
            self.terms = {m: c for m, c in self.terms.items() if c}

    @classmethod
    def constant(cls, n: int, c: Number) -> "PolyPhase":
        return cls(n, {(0,) * (2 * n): c})

    @classmethod
    def p(cls, n: int, i: int) -> "PolyPhase":
        mono = [0] * (2 * n)
        mono[i] = 1
        return cls(n, {tuple(mono): 1})

    @classmethod
    def q(cls, n: int, i: int) -> "PolyPhase":
        mono = [0] * (2 * n)
        mono[n + i] = 1
        return cls(n, {tuple(mono): 1})

    @classmethod
    def monomial(cls, n: int, p: Mapping[int, int] = {}, q: Mapping[int, int] = {}, c: Number = 1):
        mono = [0] * (2 * n)
        for i, e in p.items():
            mono[i] += e
        for i, e in q.items():
            mono[n + i] += e
        return cls(n, {tuple(mono): c})

    def _check(self, other: "PolyPhase") -> None:
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n} degrees of freedom")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self == PolyPhase.constant(self.n, other)
        return isinstance(other, PolyPhase) and self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other) -> "PolyPhase":
        if isinstance(other, (int, Fraction)):
            other = PolyPhase.constant(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return _raw(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "PolyPhase":
        return _raw(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "PolyPhase":
        return self + (-other)

    def __rsub__(self, other) -> "PolyPhase":
        return (-self) + other

    def __mul__(self, other) -> "PolyPhase":
        if isinstance(other, (int, Fraction)):
            if not other:
                return PolyPhase(self.n)
            return _raw(self.n, {m: c * other for m, c in self.terms.items()})
        self._check(other)
        out: dict[tuple[int, ...], Number] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return _raw(self.n, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def _diff(self, k: int) -> "PolyPhase":
        out = {}
        for m, c in self.terms.items():
            e = m[k]
            if e:
                mm = list(m)
                mm[k] = e - 1
                out[tuple(mm)] = c * e
        return _raw(self.n, out)

    def diff_p(self, i: int) -> "PolyPhase":
        return self._diff(i)

    def diff_q(self, i: int) -> "PolyPhase":
        return self._diff(self.n + i)

    def evaluate(self, p: Sequence[Number], q: Sequence[Number]) -> Number:
        point = list(p) + list(q)
        total: Number = 0
        for m, c in self.terms.items():
            term = c
            for x, e in zip(point, m):
                if e:
                    term *= x**e
                    if not term:
                        break
            total += term
        return total

    def p_degrees(self) -> set[int]:
        return {sum(m[: self.n]) for m in self.terms}

    def is_p_homogeneous(self, k: int) -> bool:
        return all(sum(m[: self.n]) == k for m in self.terms)

    def depends_on_p(self) -> bool:
        return any(any(m[: self.n]) for m in self.terms)

    def q_derivative_at_zero(self, indices: Iterable[int]) -> Number:
        """``d^r f / dq_{l1}..dq_{lr}`` at ``p = q = 0``, read off one coefficient."""
        alpha = [0] * self.n
        for i in indices:
            alpha[i] += 1
        coeff = self.terms.get((0,) * self.n + tuple(alpha), 0)
        if not coeff:
            return 0
        for e in alpha:
            coeff *= factorial(e)
        return coeff

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            factors = [
                f"{'p' if k < self.n else 'q'}{k % self.n}" + (f"^{e}" if e > 1 else "")
                for k, e in enumerate(m)
                if e
            ]
            parts.append("*".join([str(self.terms[m])] + factors))
        return " + ".join(parts)

    __repr__ = __str__


def _raw(n: int, terms: dict) -> PolyPhase:
    out = PolyPhase.__new__(PolyPhase)
    out.n = n
    out.terms = terms
    return out


def poisson(f: PolyPhase, g: PolyPhase) -> PolyPhase:
    """Canonical Poisson bracket ``{f, g}``."""
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: {f.n} vs {g.n} degrees of freedom")
    out = PolyPhase(f.n)
    for i in range(f.n):
        fq, gp = f.diff_q(i), g.diff_p(i)
        if fq and gp:
            out = out + fq * gp
        fp, gq = f.diff_p(i), g.diff_q(i)
        if fp and gq:
            out = out - fp * gq
    return out


@dataclass
class MechSystem:
    """Kinetic energy ``T`` (quadratic in p) and potential ``V`` (p-free)."""

    T: PolyPhase
    V: PolyPhase
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.T.n != self.V.n:
            raise ValueError("T and V must live on the same phase space")
        if not self.T.is_p_homogeneous(2):
            raise ValueError("kinetic energy must be p-homogeneous of degree 2")
        if self.V.depends_on_p():
            raise ValueError("potential energy must not depend on p")

    @property
    def n(self) -> int:
        return self.T.n


def euclidean_system(V: PolyPhase) -> MechSystem:
    """``T = p.p / 2``."""
    n = V.n
    T = PolyPhase(n)
    for i in range(n):
        T = T + PolyPhase.monomial(n, p={i: 2}, c=Fraction(1, 2))
    return MechSystem(T, V)


def general_system(V: PolyPhase, M: Sequence[Sequence[PolyPhase]]) -> MechSystem:
    """``T = M(q)(p, p) / 2`` for a symmetric matrix of q-polynomials."""
    n = V.n
    T = PolyPhase(n)
    for i in range(n):
        for j in range(n):
            if M[i][j] != M[j][i]:
                raise ValueError("metric must be symmetric")
            if M[i][j]:
                T = T + M[i][j] * PolyPhase.p(n, i) * PolyPhase.p(n, j) * Fraction(1, 2)
    return MechSystem(T, V)


def random_potential(rng: random.Random, d: int, max_degree: int = 3, span: int = 3) -> PolyPhase:
    """Random q-polynomial, integer coefficients in ``[-span, span]``."""
    terms = {}
    for alpha in product(range(max_degree + 1), repeat=d):
        if sum(alpha) <= max_degree:
            c = rng.randint(-span, span)
            if c:
                terms[(0,) * d + alpha] = c
    return PolyPhase(d, terms)


def random_metric(rng: random.Random, d: int, max_degree: int = 3, span: int = 3):
    M = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            M[i][j] = M[j][i] = random_potential(rng, d, max_degree, span)
    return M


def _phi_expr(system: MechSystem, x: Expr) -> PolyPhase:
    cache = system._cache
    found = cache.get(x)
    if found is None:
        if x is lie.A:
            found = system.T
        elif x is lie.B:
            found = system.V
        else:
            found = poisson(_phi_expr(system, x.left), _phi_expr(system, x.right))
        cache[x] = found
    return found


def phi(system: MechSystem, x: Union[Expr, str, Mapping[Expr, Number]]) -> PolyPhase:
    """Realization ``A -> T``, ``B -> V``, brackets -> Poisson brackets."""
    if isinstance(x, str):
        x = lie.parse(x)
    if isinstance(x, Expr):
        return _phi_expr(system, x)
    out = PolyPhase(system.n)
    for e, c in x.items():
        out = out + _phi_expr(system, e) * c
    return out


# -- separating systems -----------------------------------------------------


def theorem2_basis(n: int) -> list[Expr]:
    """``U_1 = A, U_2 = B``, then the quotient basis order by order (1-based list with a None pad)."""
    basis: list = [None, lie.A, lie.B]
    for k in range(2, n + 1):
        basis.extend(lie.quotient_basis(k))
    return basis


def _spine(x: Expr) -> list[Expr]:
    """Left factors of ``x = [U_m, [..., [U_1, A]]]`` as ``[U_1, ..., U_m]``."""
    letters = []
    while not x.is_generator:
        letters.append(x.left)
        x = x.right
    if x is not lie.A:
        raise ValueError("quotient-basis element does not end in A")
    return letters[::-1]


def _w_monomial(i: int, u: Expr, index: dict[Expr, int], n: int) -> PolyPhase:
    js = [index[v] for v in _spine(u)]
    degs = [v.degree for v in _spine(u)]
    m = len(js)
    p, q = PolyPhase.p, PolyPhase.q
    if m == 2 and degs[0] == 0 and degs[1] == 0:
        return q(n, i) * p(n, js[0]) * p(n, js[1])
    if m == 1 and degs[0] == 0:
        return p(n, i) * p(n, js[0])
    if m >= 2 and degs[0] == 0 and degs[1] > 0:
        out = p(n, i) * p(n, js[0])
        for j in js[1:]:
            out = out * q(n, j)
        return out
    if m >= 1 and degs[0] > 0:
        out = p(n, 0) * p(n, i)
        for j in js:
            out = out * q(n, j)
        return out
    raise ValueError(f"no monomial rule covers basis element {u}")


def theorem2_system(n: int) -> MechSystem:
    """Polynomial system with ``d_n + 1`` degrees of freedom separating L_P up to order n.

    ``V = q_2`` and ``T = p_0 p_1 + sum_{i>=3} W_i`` with one monomial per
    basis element, chosen from the shape of its right-nested form.
    """
    if not 1 <= n <= 6:
        raise ValueError("theorem2_system supports 1 <= n <= 6")
    basis = theorem2_basis(n)
    d_n = len(basis) - 1
    dof = d_n + 1
    index = {u: i for i, u in enumerate(basis) if u is not None}
    T = PolyPhase.p(dof, 0) * PolyPhase.p(dof, 1)
    for i in range(3, d_n + 1):
        T = T + _w_monomial(i, basis[i], index, dof)
    return MechSystem(T, PolyPhase.q(dof, 2))


@dataclass(frozen=True)
class RealizationReport:
    n: int
    d_n: int
    matrix: tuple[tuple[Number, ...], ...]
    basis: tuple[str, ...]

    @property
    def passed(self) -> bool:
        for i, row in enumerate(self.matrix):
            for j, v in enumerate(row):
                if (v != 0) != (i == j):
                    return False
        return True

    @property
    def rank(self) -> int:
        from .trees import rational_rank

        return rational_rank([dict(enumerate(row)) for row in self.matrix])


def realization_matrix(n: int) -> RealizationReport:
    """``M_ij = (d/dp_i + d/dq_i) Phi(U_j)`` at ``p = (1, 0, ...), q = 0``."""
    system = theorem2_system(n)
    basis = theorem2_basis(n)
    d_n = len(basis) - 1
    dof = system.n
    p0 = [1] + [0] * (dof - 1)
    q0 = [0] * dof
    images = [phi(system, basis[j]) for j in range(1, d_n + 1)]
    matrix = []
    for i in range(1, d_n + 1):
        row = []
        for img in images:
            row.append(img.diff_p(i).evaluate(p0, q0) + img.diff_q(i).evaluate(p0, q0))
        matrix.append(tuple(row))
    return RealizationReport(n, d_n, tuple(matrix), tuple(str(u) for u in basis[1:]))


# -- elementary Hamiltonians ------------------------------------------------


def _kinetic(n: int) -> PolyPhase:
    return euclidean_system(PolyPhase(n)).T


def elementary_hamiltonian(V: PolyPhase, u: ColoredTree) -> PolyPhase:
    """``Psi_V(u)``: sum over edge labels of products of vertex factors.

    Thick vertices contribute ``V`` differentiated along their edge labels,
    thin vertices the momentum of their edge label.
    """
    if V.depends_on_p():
        raise ValueError("potential must not depend on p")
    n = V.n
    if u.is_thick_atom:
        return V
    if u.is_thin_atom:
        return _kinetic(n)
    derivs: dict[tuple[int, ...], PolyPhase] = {}

    def dV(labels: tuple[int, ...]) -> PolyPhase:
        key = tuple(sorted(labels))
        if key not in derivs:
            f = V
            for l in key:
                f = f.diff_q(l)
                if not f:
                    break
            derivs[key] = f
        return derivs[key]

    adj = u.adjacency
    root = u.thick_vertices[0]
    memo: dict[tuple[int, int, int], PolyPhase] = {}

    def F(v: int, parent: int, label: int) -> PolyPhase:
        # contribution of the subtree at v whose parent edge carries `label`
        key = (v, parent, label)
        if key in memo:
            return memo[key]
        if not u.colors[v]:
            out = PolyPhase.p(n, label)
        else:
            kids = [w for w in adj[v] if w != parent]
            out = PolyPhase(n)
            head = (label,) if parent >= 0 else ()
            for labels in product(range(n), repeat=len(kids)):
                term = dV(head + labels)
                if not term:
                    continue
                for w, l in zip(kids, labels):
                    term = term * F(w, v, l)
                    if not term:
                        break
                out = out + term
        memo[key] = out
        return out

    return F(root, -1, -1)


@dataclass(frozen=True)
class FactorizationRow:
    expr: str
    order: int
    degree: int
    equal: bool
    table_sign: str | None = None  # '+', '-', 'mixed', 'mismatch' or None when not tabulated


def psi_factorization_check(V: PolyPhase, max_order: int) -> list[FactorizationRow]:
    """Compare ``Phi_V(U)`` with ``Psi_V(Theta(U))`` on the quotient basis."""
    from .reference import reference_sign

    if not 1 <= max_order <= 8:
        raise ValueError("psi_factorization_check supports 1 <= max_order <= 8")
    system = euclidean_system(V)
    rows = []
    for k in range(1, max_order + 1):
        for u in lie.quotient_basis(k):
            image = theta(u)
            rhs = PolyPhase(V.n)
            for tree, c in image.items():
                rhs = rhs + elementary_hamiltonian(V, tree) * c
            rows.append(
                FactorizationRow(str(u), u.order, u.degree, phi(system, u) == rhs, reference_sign(u, image))
            )
    return rows


# -- separation of trees ----------------------------------------------------


def calvo_potential(u: ColoredTree) -> PolyPhase:
    """Potential whose elementary Hamiltonians single out ``u`` at ``p = 1, q = 0``.

    One variable per edge; each thick vertex contributes the product of the
    q's of its incident edges.
    """
    d = max(len(u.edges), 1)
    V = PolyPhase(d)
    for v in u.thick_vertices:
        q = {}
        for k, (a, b) in enumerate(u.edges):
            if v in (a, b):
                q[k] = q.get(k, 0) + 1
        V = V + PolyPhase.monomial(d, q=q)
    return V


def _psi_momentum_part(V: PolyPhase, u: ColoredTree) -> dict[tuple[int, ...], Number]:
    """``Psi_V(u)`` at ``q = 0`` as ``{sorted momentum labels: coefficient}``."""
    n = V.n
    if u.is_thick_atom:
        c = V.q_derivative_at_zero(())
        return {(): c} if c else {}
    if u.is_thin_atom:
        return {(i, i): Fraction(1, 2) for i in range(n)}
    adj = u.adjacency

    def F(v: int, parent: int, label: int) -> dict[tuple[int, ...], Number]:
        if not u.colors[v]:
            return {(label,): 1}
        kids = [w for w in adj[v] if w != parent]
        head = (label,) if parent >= 0 else ()
        total: dict[tuple[int, ...], Number] = {}
        for labels in product(range(n), repeat=len(kids)):
            c = V.q_derivative_at_zero(head + labels)
            if not c:
                continue
            acc: dict[tuple[int, ...], Number] = {(): c}
            for w, l in zip(kids, labels):
                sub = F(w, v, l)
                acc = {
                    tuple(sorted(m1 + m2)): c1 * c2
                    for m1, c1 in acc.items()
                    for m2, c2 in sub.items()
                }
                if not acc:
                    break
            for m, c in acc.items():
                total[m] = total.get(m, 0) + c
        return {m: c for m, c in total.items() if c}

    return F(u.thick_vertices[0], -1, -1)


def _free_end_monomial(u: ColoredTree) -> tuple[int, ...]:
    ends = {frozenset(e) for e in u.free_ends}
    return tuple(sorted(k for k, e in enumerate(u.edges) if frozenset(e) in ends))


@dataclass(frozen=True)
class CalvoReport:
    max_order: int
    checked: int
    failures: tuple[tuple[str, str], ...]
    # pairs that the plain value at p = (1, ..., 1), q = 0 fails to separate
    value_collisions: tuple[tuple[str, str], ...] = ()

    @property
    def passed(self) -> bool:
        return not self.failures


def calvo_separation(max_order: int) -> CalvoReport:
    """Check that each tree's separating potential singles it out among all trees.

    For ``u`` with one q-variable per edge, ``V`` has one squarefree monomial
    per thick vertex. ``u'`` is accepted iff the coefficient of the momentum
    monomial over the free ends of ``u`` in ``Psi_V(u')`` at ``q = 0`` is
    nonzero. Candidates are compared within one (order, degree) component:
    scaling ``V`` by ``lambda`` scales ``Psi_V(u)`` by ``lambda^k`` (``k`` thick
    vertices) and the momentum degree is the tree degree, so the common kernel
    is graded. The lone thin vertex is never the target, since its elementary
    Hamiltonian is ``T`` for every potential.
    """
    from .trees import enumerate_trees

    if not 1 <= max_order <= 7:
        raise ValueError("calvo_separation supports 1 <= max_order <= 7")
    trees = sorted(t for group in enumerate_trees(max_order).values() for t in group)
    failures = []
    collisions = []
    checked = 0
    for u in trees:
        if u.is_thin_atom:
            continue
        V = calvo_potential(u)
        target = _free_end_monomial(u)
        for w in trees:
            part = _psi_momentum_part(V, w)
            if (sum(part.values()) != 0) != (w == u):
                collisions.append((u.code, w.code))
            if (w.order, w.degree) != (u.order, u.degree):
                continue
            checked += 1
            if (part.get(target, 0) != 0) != (w == u):
                failures.append((u.code, w.code))
    return CalvoReport(max_order, checked, tuple(failures), tuple(collisions))
