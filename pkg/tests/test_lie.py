from __future__ import annotations

import pickle
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lacm import lie, series
from lacm.lie import A, B, bracket, compare, decompose, parse, star
from lacm.verify import random_expr


def exprs(max_order: int = 6):
    return st.integers(1, max_order).flatmap(
        lambda n: st.integers(0, 2**32 - 1).map(lambda s: random_expr(random.Random(s), n))
    )


# -- expressions and serialization -------------------------------------------


def test_generators():
    assert (A.order, A.degree) == (1, 2)
    assert (B.order, B.degree) == (1, 0)


def test_degree_clamps_at_zero():
    assert bracket(B, B).degree == 0
    assert bracket(B, A).degree == 1
    assert bracket(A, A).degree == 3


def test_interning():
    assert parse("[B,[B,A]]") is bracket(B, bracket(B, A))


@pytest.mark.parametrize("bad", ["", "C", "[A,B", "[A B]", "[A,B]]", " A", "[A,[B]]"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse(bad)


@settings(max_examples=200, deadline=None)
@given(exprs(8))
def test_serialization_round_trip(x):
    assert parse(str(x)) is x
    assert pickle.loads(pickle.dumps(x)) is x


@settings(max_examples=200, deadline=None)
@given(exprs(5), exprs(5))
def test_bracket_grading(x, y):
    z = bracket(x, y)
    assert z.order == x.order + y.order
    assert z.degree == max(x.degree + y.degree - 1, 0)


# -- order and Hall set ------------------------------------------------------


def test_compare_examples():
    assert compare(B, A) == -1
    assert compare(A, A) == 0
    assert compare(parse("[B,A]"), parse("[B,[B,A]]")) == 1


def test_compare_is_strict_total_order_on_hall_set():
    elems = [h.expr for h in lie.build_hall_set(8)]
    assert len({e.key for e in elems}) == len(elems)
    rng = random.Random(7)
    for _ in range(300):
        x, y, z = (rng.choice(elems) for _ in range(3))
        assert compare(x, y) == -compare(y, x)
        if compare(x, y) < 0 and compare(y, z) < 0:
            assert compare(x, z) < 0


def test_is_hall_examples():
    assert lie.is_hall(parse("[B,A]"))
    assert not lie.is_hall(parse("[A,B]"))
    assert lie.is_hall(parse("[A,[[B,A],A]]"))
    assert not lie.is_hall(parse("[B,B]"))


def test_hall_set_small():
    assert [h.expr for h in lie.build_hall_set(1)] == [B, A]
    assert all(h.is_basis for h in lie.build_hall_set(1))


def test_hall_counts_match_witt():
    levels = lie.hall_by_order(14)
    free = series.free_dims(14)
    lacm = series.lacm_dims(14)
    for n in range(1, 15):
        assert len(levels[n]) == free[n]
        assert len(lie.quotient_basis(n)) == lacm[n]


def test_hall_set_order_seven():
    hall = lie.build_hall_set(7)
    total = Counter(h.order for h in hall)
    basis = Counter(h.order for h in hall if h.is_basis)
    assert [total[n] for n in range(1, 8)] == [2, 1, 2, 3, 6, 9, 18]
    assert [basis[n] for n in range(1, 8)] == [2, 1, 2, 2, 4, 5, 10]


def test_hall_golden_cells(hall_golden):
    ours = lie.build_hall_set(6)
    assert len(ours) == 23
    assert sum(not h.is_basis for h in ours) == 7
    cells_golden: dict = {}
    for row in hall_golden:
        cells_golden.setdefault((row["order"], row["degree"]), set()).add((row["expr"], row["class"]))
    cells_ours: dict = {}
    for h in ours:
        cells_ours.setdefault((h.order, h.degree), set()).add((str(h.expr), h.classification))
    assert cells_ours == cells_golden


def test_hall_golden_order_matches_except_documented_cells(hall_golden):
    # The printed sequence disagrees with the right-factor tie-break in three
    # cells; elsewhere the row order is reproduced.
    ours = [str(h.expr) for h in lie.build_hall_set(6)]
    printed = [row["expr"] for row in hall_golden]
    differing = {(r["order"], r["degree"]) for r, e in zip(hall_golden, ours) if r["expr"] != e}
    assert differing <= {(5, 0), (6, 0), (6, 1)}
    assert sorted(ours) == sorted(printed)


def test_hall_set_json_schema():
    import json

    rows = json.loads(lie.hall_set_json(3))
    assert rows[0] == {"order": 1, "degree": 0, "expr": "B", "class": "basis"}
    assert set(rows[0]) == {"order", "degree", "expr", "class"}
    assert len(json.loads(lie.hall_set_json(6, quotient_only=True))) == 16


def test_hall_by_order_rejects():
    with pytest.raises(ValueError):
        lie.hall_by_order(0)


def test_dims_bigraded_examples(dim_lacm):
    table = lie.dims_bigraded(10)
    assert table[(9, 2)] == 9
    assert table[(1, 2)] == 1
    assert table[(5, 4)] == 1
    assert table == {k: v for k, v in dim_lacm.items() if k[0] <= 10}


# -- star and decompose ------------------------------------------------------


def test_star_examples():
    assert star(B, B) == parse("[B,[B,A]]")
    assert star(B, B).order == 3
    with pytest.raises(ValueError):
        star(A, B)


def test_star_orders():
    x = B
    for k in range(1, 6):
        assert x.order == 2 * k - 1
        x = star(x, B)


def test_decompose_examples():
    assert not decompose("[B,B]")
    assert decompose("[A,[B,[B,A]]]") == {parse("[[B,[B,A]],A]"): -1}
    assert decompose("[A,[A,B]]") == {parse("[[B,A],A]"): 1}
    assert decompose("[B,[B,[B,A]]]") == {}


def test_decompose_linear_inputs():
    x = parse("[B,A]")
    assert decompose({x: 2, "[A,B]": 2}) == {}
    assert decompose([("[A,B]", 3)]) == {x: -3}


def test_decompose_basis_is_identity():
    for n in range(1, 9):
        for u in lie.quotient_basis(n):
            assert decompose(u) == {u: 1}


def test_decompose_ideal_vanishes():
    for h in lie.build_hall_set(8):
        if not h.is_basis:
            assert not decompose(h.expr)


def test_decompose_homogeneous():
    rng = random.Random(11)
    for _ in range(150):
        x = random_expr(rng, rng.randint(1, 8))
        v = decompose(x)
        assert v.orders() <= {x.order}
        assert v.degrees() <= {x.degree}


def test_decompose_jacobi_and_antisymmetry():
    rng = random.Random(3)
    for _ in range(150):
        x, y, z = (random_expr(rng, rng.randint(1, 3)) for _ in range(3))
        assert not decompose([(bracket(x, y), 1), (bracket(y, x), 1)])
        jac = [(bracket(x, bracket(y, z)), 1), (bracket(y, bracket(z, x)), 1), (bracket(z, bracket(x, y)), 1)]
        assert not decompose(jac)


def test_decompose_bilinear():
    rng = random.Random(5)
    for _ in range(100):
        x, y, z = (random_expr(rng, rng.randint(1, 4)) for _ in range(3))
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        lhs = lie.lie_bracket(decompose({x: a}) + decompose({y: b}), decompose(z))
        rhs = decompose([(bracket(x, z), a), (bracket(y, z), b)])
        assert lhs == rhs


def test_star_commutes_in_quotient():
    X = [e for n in range(1, 8) for e in lie.quotient_basis(n) if e.degree == 0]
    rng = random.Random(2)
    for _ in range(100):
        x1, x2 = rng.choice(X), rng.choice(X)
        assert decompose(star(x1, x2)) == decompose(star(x2, x1))


def test_degree_zero_brackets_vanish():
    X = [e for n in range(1, 8) for e in lie.quotient_basis(n) if e.degree == 0]
    for x in X:
        for y in X:
            assert not lie.lie_bracket({x: 1}, {y: 1})


def test_ad_b_nilpotency():
    for n in range(1, 7):
        for u in lie.quotient_basis(n):
            if u.degree > 4:
                continue
            v = decompose(u)
            for _ in range(u.degree):
                v = lie.lie_bracket({B: 1}, v)
            if u is not B:
                assert v, u  # index is exactly degree + 1 for these elements
            v = lie.lie_bracket({B: 1}, v)
            assert not v


@settings(max_examples=100, deadline=None)
@given(exprs(4), exprs(4))
def test_decompose_of_bracket_is_bracket_of_decompositions(x, y):
    assert decompose(bracket(x, y)) == lie.lie_bracket(decompose(x), decompose(y))
