"""Verification suites: exact randomized identities and desk-scale structural checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from . import lie, mech, schrodinger, trees
from .lie import Expr
from .mech import PolyPhase

__all__ = ["Check", "SuiteResult", "SUITES", "SUITE_LIMITS", "run_suite", "random_expr"]


@dataclass
class Check:
    name: str
    cases: int = 0
    counterexample: dict | None = None
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def fail(self, **payload) -> None:
        if self.counterexample is None:
            self.counterexample = {k: str(v) for k, v in payload.items()}

    def as_record(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "cases": self.cases}
        if self.detail:
            out["detail"] = self.detail
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class SuiteResult:
    suite: str
    max_order: int
    seed: int
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_record(self) -> dict:
        return {
            "suite": self.suite,
            "max_order": self.max_order,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.as_record() for c in self.checks],
        }


def random_expr(rng: random.Random, order: int) -> Expr:
    """Uniformly shaped random bracket expression of the given order."""
    if order == 1:
        return rng.choice((lie.A, lie.B))
    k = rng.randint(1, order - 1)
    return lie.bracket(random_expr(rng, k), random_expr(rng, order - k))


def _random_system(rng: random.Random, dims=(1, 2, 3)) -> mech.MechSystem:
    d = rng.choice(dims)
    return mech.general_system(mech.random_potential(rng, d), mech.random_metric(rng, d))


def _degree_zero(max_order: int) -> list[Expr]:
    return [e for k in range(1, max_order + 1) for e in lie.quotient_basis(k) if e.degree == 0]


# -- identities -------------------------------------------------------------


def _suite_identities(max_order: int, seed: int) -> list[Check]:
    rng = random.Random(seed)
    checks = []

    c = Check("phi [B,[B,[B,A]]] = 0")
    x = lie.parse("[B,[B,[B,A]]]")
    for _ in range(50):
        system = _random_system(rng)
        c.cases += 1
        if mech.phi(system, x):
            c.fail(T=system.T, V=system.V)
    checks.append(c)

    c = Check("poisson Jacobi")
    for _ in range(100):
        d = rng.choice((1, 2, 3))
        f, g, h = (_random_phase(rng, d) for _ in range(3))
        c.cases += 1
        P = mech.poisson
        if P(f, P(g, h)) + P(g, P(h, f)) + P(h, P(f, g)):
            c.fail(f=f, g=g, h=h)
    checks.append(c)

    c = Check("phi well defined on the quotient")
    for _ in range(30):
        system = _random_system(rng, (1, 2))
        e = random_expr(rng, rng.randint(2, max(2, min(max_order, 6))))
        c.cases += 1
        if mech.phi(system, e) != mech.phi(system, lie.decompose(e)):
            c.fail(expr=e, T=system.T, V=system.V)
    checks.append(c)

    c = Check("phi degree is momentum degree")
    for _ in range(10):
        system = _random_system(rng, (1, 2))
        for k in range(1, min(max_order, 5) + 1):
            for u in lie.quotient_basis(k):
                c.cases += 1
                if not mech.phi(system, u).is_p_homogeneous(u.degree):
                    c.fail(expr=u, T=system.T, V=system.V)
    checks.append(c)

    c = Check("star realized by the metric")
    X = _degree_zero(min(max_order, 5))
    for _ in range(5):
        d = rng.choice((1, 2))
        V, M = mech.random_potential(rng, d, 2), mech.random_metric(rng, d, 1)
        system = mech.general_system(V, M)
        for x1 in X:
            for x2 in X:
                if x1.order + x2.order + 1 > min(max_order, 5) + 2:
                    continue
                g1, g2 = mech.phi(system, x1), mech.phi(system, x2)
                rhs = PolyPhase(d)
                for i in range(d):
                    for j in range(d):
                        rhs = rhs + M[i][j] * g1.diff_q(i) * g2.diff_q(j)
                c.cases += 1
                if mech.phi(system, lie.star(x1, x2)) != rhs:
                    c.fail(x1=x1, x2=x2, V=V)
    checks.append(c)

    c = Check("decompose antisymmetry and Jacobi")
    for _ in range(100):
        x, y, z = (random_expr(rng, rng.randint(1, 3)) for _ in range(3))
        b = lie.bracket
        c.cases += 1
        if lie.decompose([(b(x, y), 1), (b(y, x), 1)]):
            c.fail(x=x, y=y)
        if lie.decompose([(b(x, b(y, z)), 1), (b(y, b(z, x)), 1), (b(z, b(x, y)), 1)]):
            c.fail(x=x, y=y, z=z)
    checks.append(c)

    c = Check("star commutative")
    X = _degree_zero(7)
    for _ in range(100):
        x1, x2 = rng.choice(X), rng.choice(X)
        c.cases += 1
        if lie.decompose(lie.star(x1, x2)) != lie.decompose(lie.star(x2, x1)):
            c.fail(x1=x1, x2=x2)
    checks.append(c)

    c = Check("ad_B nilpotent of index degree + 1")
    for k in range(1, 7):
        for u in lie.quotient_basis(k):
            if u.degree > 4:
                continue
            v = lie.decompose(u)
            for _ in range(u.degree + 1):
                v = lie.lie_bracket({lie.B: 1}, v)
            c.cases += 1
            if v:
                c.fail(expr=u, image=v)
    by_degree: dict[int, list[Expr]] = {}
    for k in range(1, 9):
        for u in lie.quotient_basis(k):
            if u.degree <= 4:
                by_degree.setdefault(u.degree, []).append(u)
    for _ in range(100):
        n = rng.choice(sorted(by_degree))
        v = lie.LieVector()
        for u in rng.sample(by_degree[n], min(3, len(by_degree[n]))):
            v.add_term(u, rng.choice((-2, -1, 1, 2)))
        start = v.copy()
        for _ in range(n + 1):
            v = lie.lie_bracket({lie.B: 1}, v)
        c.cases += 1
        if v:
            c.fail(element=start, image=v)
    checks.append(c)

    c = Check("grafting adds orders and degrees minus one")
    pool = [t for group in trees.enumerate_trees(8).values() for t in group]
    for _ in range(100):
        u, v = rng.choice(pool), rng.choice(pool)
        c.cases += 1
        for w in trees.graft(u, v):
            if w.order != u.order + v.order or w.degree != u.degree + v.degree - 1:
                c.fail(u=u, v=v, product=w)
    checks.append(c)

    c = Check("pre-Lie on the degree-1 slice")
    slice1 = [t for (o, d), group in trees.enumerate_trees(11).items() if d == 1 for t in group]
    g = trees.graft
    for _ in range(100):
        u, v, w = (rng.choice(slice1) for _ in range(3))
        c.cases += 1
        if g(g(u, v), w) - g(u, g(v, w)) != g(g(u, w), v) - g(u, g(w, v)):
            c.fail(u=u, v=v, w=w)
    checks.append(c)

    c = Check("theta is a homomorphism")
    for _ in range(100):
        x = random_expr(rng, rng.randint(1, 4))
        y = random_expr(rng, rng.randint(1, 4))
        c.cases += 1
        if trees.theta(lie.decompose(lie.bracket(x, y))) != trees.tree_bracket(trees.theta(x), trees.theta(y)):
            c.fail(x=x, y=y)
    checks.append(c)

    c = Check("theta of star is a symmetrized graft")
    X = _degree_zero(5)
    A = lie.A
    for x1 in X:
        for x2 in X:
            t1, t2 = trees.theta(lie.bracket(x1, A)), trees.theta(lie.bracket(x2, A))
            c.cases += 1
            if trees.theta(lie.decompose(lie.bracket(lie.star(x1, x2), A))) != g(t1, t2) + g(t2, t1):
                c.fail(x1=x1, x2=x2)
    checks.append(c)
    return checks


def _random_phase(rng: random.Random, d: int) -> PolyPhase:
    terms = {}
    for _ in range(rng.randint(1, 4)):
        mono = [0] * (2 * d)
        for _ in range(rng.randint(0, 3)):
            mono[rng.randrange(2 * d)] += 1
        terms[tuple(mono)] = terms.get(tuple(mono), 0) + rng.choice((-3, -2, -1, 1, 2, 3))
    return PolyPhase(d, terms)


# -- structural suites ------------------------------------------------------


def _suite_realization(max_order: int, seed: int) -> list[Check]:
    checks = []
    for n in range(1, max_order + 1):
        report = mech.realization_matrix(n)
        c = Check(f"realization matrix n={n}", cases=1, detail={"d_n": report.d_n})
        if not report.passed:
            bad = [
                (i + 1, j + 1, str(v))
                for i, row in enumerate(report.matrix)
                for j, v in enumerate(row)
                if (v != 0) != (i == j)
            ]
            c.fail(entries=bad[:10])
        checks.append(c)
    return checks


def _suite_elham(max_order: int, seed: int) -> list[Check]:
    rng = random.Random(seed)
    c = Check("phi_V = psi_V o theta")
    signs: dict[str, str] = {}
    for _ in range(10):
        V = mech.random_potential(rng, rng.choice((1, 2, 3)))
        for row in mech.psi_factorization_check(V, max_order):
            c.cases += 1
            if not row.equal:
                c.fail(expr=row.expr, V=V)
            if row.table_sign is not None:
                signs[row.expr] = row.table_sign
    t = Check("published table up to a row sign", cases=len(signs), detail={"row_signs": signs})
    flagged = {e: s for e, s in signs.items() if s == "mismatch"}
    if flagged:
        t.fail(rows=flagged)
    return [c, t]


def _suite_calvo(max_order: int, seed: int) -> list[Check]:
    report = mech.calvo_separation(max_order)
    c = Check(
        "tree separation by polynomial potentials",
        cases=report.checked,
        detail={"value_collisions_across_grades": len(report.value_collisions)},
    )
    if report.failures:
        c.fail(pairs=report.failures[:10])
    return [c]


def _suite_theta_rank(max_order: int, seed: int) -> list[Check]:
    checks = []
    for r in trees.theta_rank(max_order):
        c = Check(
            f"theta rank n={r.order}",
            cases=1,
            detail={"rank": r.rank, "dim_lacm": r.dim_lacm, "dim_trees": r.dim_trees},
        )
        if not r.passed:
            c.fail(rank=r.rank, expected=r.dim_lacm)
        checks.append(c)
    return checks


def _suite_schrodinger(max_order: int, seed: int) -> list[Check]:
    rng = random.Random(seed)
    c = Check("top-degree operator part equals nu o phi")
    deg = Check("operator degree bounded by element degree")
    comm = Check("multiplication operators commute")
    for _ in range(10):
        d = rng.choice((1, 2))
        V = mech.random_potential(rng, d)
        system = mech.euclidean_system(V)
        for k in range(1, max_order + 1):
            for u in lie.quotient_basis(k):
                c.cases += 1
                deg.cases += 1
                if schrodinger.phi_hat(V, u) != schrodinger.nu(mech.phi(system, u)):
                    c.fail(expr=u, V=V)
                if schrodinger.phi_V(V, u).degree > u.degree:
                    deg.fail(expr=u, V=V)
        W = mech.random_potential(rng, d)
        comm.cases += 1
        if schrodinger.commutator(schrodinger.nu(V), schrodinger.nu(W)):
            comm.fail(V=V, W=W)
    return [c, deg, comm]


SUITES: dict[str, Callable[[int, int], list[Check]]] = {
    "identities": _suite_identities,
    "realization": _suite_realization,
    "elham": _suite_elham,
    "calvo": _suite_calvo,
    "theta-rank": _suite_theta_rank,
    "schrodinger": _suite_schrodinger,
}

# (default, maximum) max_order per suite
SUITE_LIMITS: dict[str, tuple[int, int]] = {
    "identities": (7, 8),
    "realization": (6, 6),
    "elham": (6, 8),
    "calvo": (7, 7),
    "theta-rank": (10, 12),
    "schrodinger": (5, 6),
}


def run_suite(name: str, max_order: int | None = None, seed: int = 1) -> list[SuiteResult]:
    """Run one suite (or every suite for ``"all"``).

    With ``"all"``, ``max_order`` is clamped to each suite's limit; for a
    single suite an out-of-range value raises ``ValueError``.
    """
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(['all', *SUITES])}")
    results = []
    for n in names:
        default, cap = SUITE_LIMITS[n]
        order = default if max_order is None else max_order
        if name == "all":
            order = min(order, cap)
        if not 1 <= order <= cap:
            raise ValueError(f"suite {n!r} supports 1 <= max_order <= {cap}")
        results.append(SuiteResult(n, order, seed, SUITES[n](order, seed)))
    return results
