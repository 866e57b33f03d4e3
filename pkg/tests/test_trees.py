from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lacm import lie, series, trees
from lacm.trees import THICK, THIN, ColoredTree, canonical_form, graft, theta, tree_bracket

DIMT_TOTALS = [2, 1, 2, 2, 4, 5, 10, 14, 27, 43, 82, 140, 269, 486, 939, 1765, 3446, 6652]


def T(code: str) -> ColoredTree:
    return ColoredTree.from_code(code)


# -- brute-force oracle --------------------------------------------------------


def _rooted_code(v, parent, colors, adj):
    kids = sorted(_rooted_code(w, v, colors, adj) for w in adj[v] if w != parent)
    return ("o" if colors[v] else ".") + ("(" + "".join(kids) + ")" if kids else "")


def brute_code(colors, edges) -> str:
    """Minimum rooted code over every possible root: slow but obviously invariant."""
    adj = [[] for _ in colors]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    return min(_rooted_code(r, -1, colors, adj) for r in range(len(colors)))


def prufer_trees(k: int):
    if k == 1:
        yield []
        return
    if k == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(k), repeat=k - 2):
        degree = [1] * k
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(i for i in range(k) if degree[i] == 1)
            edges.append((leaf, x))
            degree[leaf] -= 1
            degree[x] -= 1
        u, v = (i for i in range(k) if degree[i] == 1)
        edges.append((u, v))
        yield edges


def brute_classes(k: int, m: int) -> set[str]:
    out = set()
    for edges in prufer_trees(k):
        for hosts in itertools.combinations_with_replacement(range(k), m):
            colors = [True] * k + [False] * m
            e = edges + [(h, k + i) for i, h in enumerate(hosts)]
            out.add(brute_code(colors, e))
    return out


# -- canonical form --------------------------------------------------------------


def test_atoms():
    assert THICK.is_thick_atom and THIN.is_thin_atom
    assert canonical_form(([True], [])) == "o"
    assert (THIN.order, THIN.degree) == (1, 2)
    assert (THICK.order, THICK.degree) == (1, 0)


def test_relabelled_edge_is_same_tree():
    assert ColoredTree([True, False], [(0, 1)]) == ColoredTree([False, True], [(1, 0)])


def test_order_seven_degree_zero():
    found = trees.enumerate_trees(7)[(7, 0)]
    assert len(found) == 2
    assert {t.code for t in found} == {T("o(ooo)").code, T("o(o(o(o)))").code}


@pytest.mark.parametrize(
    "colors,edges",
    [
        ([False, False], [(0, 1)]),
        ([True, False, True], [(0, 1), (1, 2)]),
        ([True, True], []),
        ([True, True, True], [(0, 1), (1, 2), (2, 0)]),
        ([], []),
    ],
)
def test_rejects_malformed(colors, edges):
    with pytest.raises(ValueError):
        ColoredTree(colors, edges)


@pytest.mark.parametrize("code", ["", "o(", "o)", "(o)", "x"])
def test_from_code_rejects(code):
    with pytest.raises(ValueError):
        ColoredTree.from_code(code)


def test_canonical_form_invariant_under_relabelling():
    rng = random.Random(8)
    pool = [t for group in trees.enumerate_trees(10).values() for t in group]
    for _ in range(150):
        t = rng.choice(pool)
        perm = list(range(t.size))
        rng.shuffle(perm)
        colors = [None] * t.size
        for old, new in enumerate(perm):
            colors[new] = t.colors[old]
        edges = [(perm[a], perm[b]) for a, b in t.edges]
        assert ColoredTree(colors, edges) == t
        assert ColoredTree(colors, edges).code == t.code


def test_code_round_trip():
    for group in trees.enumerate_trees(9).values():
        for t in group:
            assert T(t.code) == t
            assert T(t.code).code == t.code


@pytest.mark.parametrize("k,m", [(1, 3), (2, 2), (3, 3), (4, 2), (5, 1), (5, 3), (6, 0)])
def test_enumeration_matches_brute_force(k, m):
    ours = {brute_code(t.colors, t.edges) for t in trees._trees_km(k, m)}
    assert len(ours) == len(trees._trees_km(k, m))
    assert ours == brute_classes(k, m)


# -- enumeration ---------------------------------------------------------------


def test_enumeration_examples():
    table = trees.enumerate_trees(9)
    assert {t.code for t in table[(1, 0)] + table[(1, 2)]} == {"o", "."}
    assert len(table[(9, 2)]) == 10


def test_enumeration_rejects():
    with pytest.raises(ValueError):
        trees.enumerate_trees(0)


def test_tree_dims_match_golden(dim_trees):
    assert trees.tree_dims_bigraded(18) == dim_trees
    assert trees.tree_dims(18)[1:] == DIMT_TOTALS


def test_tree_dims_dominate_lacm():
    lacm = series.lacm_dims(18)
    tdim = trees.tree_dims(18)
    for n in range(1, 19):
        if n <= 8:
            assert tdim[n] == lacm[n]
        else:
            assert tdim[n] > lacm[n]


def test_order_and_degree_formulas():
    for (n, m), group in trees.enumerate_trees(12).items():
        for t in group:
            assert (t.order, t.degree) == (n, m)
            if not t.is_thin_atom:
                assert t.order == len(t.free_ends) + 2 * len(t.thick_vertices) - 1


# -- grafting and bracket --------------------------------------------------------


def test_graft_base_cases():
    assert graft(THICK, THIN) == {T("o(.)"): 1}
    assert not graft(THIN, THICK)
    assert not graft(T("o(..)"), THICK)
    assert graft(THICK, T("o(.)")) == {T("o(o)"): 1}


def test_graft_adds_leaf_to_each_thick_vertex():
    assert graft(T("o(o)"), THIN) == {T("o(o(.))"): 2}
    assert graft(T("o(o(.))"), THIN) == {T("o(.o(.))"): 1, T("o(o(..))"): 1}


def test_graft_counts_terms():
    # k thick vertices in u times m free ends of v
    u, v = T("o(o.)"), T("o(..)")
    assert sum(graft(u, v).values()) == 2 * 2


def test_bracket_examples():
    assert tree_bracket(THICK, THIN) == {T("o(.)"): 1}
    u = T("o(o(.))")
    assert not tree_bracket(u, u)
    assert not tree_bracket(T("o(o)"), T("o(oo)"))


def test_graft_grading():
    rng = random.Random(12)
    pool = [t for group in trees.enumerate_trees(8).values() for t in group]
    for _ in range(150):
        u, v = rng.choice(pool), rng.choice(pool)
        for w in graft(u, v):
            assert w.order == u.order + v.order
            assert w.degree == u.degree + v.degree - 1


def test_graft_is_bilinear():
    u, v, w = T("o(.)"), T("o(..)"), T("o(o.)")
    lhs = graft({u: 2, v: -1}, w)
    rhs = graft(u, w) * 2 - graft(v, w)
    assert lhs == rhs


def test_tree_bracket_jacobi():
    rng = random.Random(13)
    pool = [t for group in trees.enumerate_trees(6).values() for t in group]
    br = tree_bracket
    for _ in range(120):
        u, v, w = (rng.choice(pool) for _ in range(3))
        assert not (br(u, br(v, w)) + br(v, br(w, u)) + br(w, br(u, v)))


def test_pre_lie_degree_one_slice():
    rng = random.Random(14)
    slice1 = [t for (n, m), group in trees.enumerate_trees(11).items() if m == 1 for t in group]
    for _ in range(120):
        u, v, w = (rng.choice(slice1) for _ in range(3))
        lhs = graft(graft(u, v), w) - graft(u, graft(v, w))
        rhs = graft(graft(u, w), v) - graft(u, graft(w, v))
        assert lhs == rhs


# -- theta ---------------------------------------------------------------------


def test_theta_examples():
    assert theta(lie.A) == {THIN: 1}
    assert theta(lie.B) == {THICK: 1}
    assert theta("[B,[B,A]]") == {T("o(o)"): 1}
    assert theta("[[B,[B,A]],[B,A]]") == {T("o(oo)"): 2}
    assert not theta("[B,[B,[B,A]]]")


def test_theta_preserves_grading():
    for n in range(1, 10):
        for u in lie.quotient_basis(n):
            for t in theta(u):
                assert (t.order, t.degree) == (u.order, u.degree)


def test_theta_homomorphism():
    from lacm.verify import random_expr

    rng = random.Random(15)
    for _ in range(120):
        x, y = random_expr(rng, rng.randint(1, 4)), random_expr(rng, rng.randint(1, 4))
        assert theta(lie.decompose(lie.bracket(x, y))) == tree_bracket(theta(x), theta(y))


def test_theta_star_identity():
    A = lie.A
    X = [e for n in range(1, 8) for e in lie.quotient_basis(n) if e.degree == 0]
    for x1 in X:
        for x2 in X:
            t1, t2 = theta(lie.bracket(x1, A)), theta(lie.bracket(x2, A))
            lhs = theta(lie.decompose(lie.bracket(lie.star(x1, x2), A)))
            assert lhs == graft(t1, t2) + graft(t2, t1)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_theta_kills_ideal(seed):
    rng = random.Random(seed)
    ideal = [h.expr for h in lie.build_hall_set(8) if not h.is_basis]
    assert not theta(rng.choice(ideal))


def test_theta_rank_examples():
    reports = {r.order: r for r in trees.theta_rank(10)}
    assert reports[8].rank == 14 == reports[8].dim_trees
    assert reports[9].rank == 25 and reports[9].dim_trees == 27
    assert reports[1].rank == 2
    assert all(r.passed for r in reports.values())


def test_theta_rank_limit():
    with pytest.raises(ValueError):
        trees.theta_rank(13)


def test_rational_rank():
    assert trees.rational_rank([{0: 1, 1: 2}, {0: 2, 1: 4}, {2: 1}]) == 2
    assert trees.rational_rank([]) == 0
    assert trees.rational_rank([{}, {"a": 3}]) == 1
