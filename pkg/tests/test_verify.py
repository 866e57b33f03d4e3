from __future__ import annotations

import random

import pytest

from lacm import lie, verify


def test_every_suite_passes_at_small_order():
    for name in verify.SUITES:
        (result,) = verify.run_suite(name, max_order=3, seed=2)
        assert result.passed, result.as_record()
        assert result.suite == name and result.max_order == 3


def test_identities_meet_case_minimum():
    (result,) = verify.run_suite("identities", max_order=5, seed=3)
    randomized = [c for c in result.checks if c.cases >= 100]
    assert len(randomized) >= 6
    assert all(c.passed for c in result.checks)


def test_all_runs_every_suite():
    results = verify.run_suite("all", max_order=1)
    assert [r.suite for r in results] == list(verify.SUITES)
    assert all(r.max_order == 1 and r.passed for r in results)


def test_all_clamps_to_caps(monkeypatch):
    seen = {}
    for name in verify.SUITES:
        monkeypatch.setitem(verify.SUITES, name, lambda n, s, name=name: seen.setdefault(name, n) and [])
    verify.run_suite("all", max_order=50)
    assert seen == {name: cap for name, (_, cap) in verify.SUITE_LIMITS.items()}
    seen.clear()
    verify.run_suite("all")
    assert seen == {name: default for name, (default, _) in verify.SUITE_LIMITS.items()}


def test_unknown_and_out_of_range():
    with pytest.raises(ValueError, match="unknown suite"):
        verify.run_suite("everything")
    with pytest.raises(ValueError):
        verify.run_suite("realization", max_order=7)
    with pytest.raises(ValueError):
        verify.run_suite("identities", max_order=0)


def test_records_have_stable_shape():
    (result,) = verify.run_suite("theta-rank", max_order=4)
    rec = result.as_record()
    assert set(rec) == {"suite", "max_order", "seed", "passed", "checks"}
    first = rec["checks"][0]
    assert set(first) == {"name", "passed", "cases", "detail"}
    assert first["detail"] == {"rank": 2, "dim_lacm": 2, "dim_trees": 2}


def test_failed_check_keeps_first_counterexample():
    c = verify.Check("demo")
    assert c.passed
    c.fail(x=lie.A)
    c.fail(x=lie.B)
    assert not c.passed
    assert c.as_record()["counterexample"] == {"x": "A"}


def test_random_expr_orders():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randint(1, 9)
        assert verify.random_expr(rng, n).order == n


def test_same_seed_same_record():
    a = [r.as_record() for r in verify.run_suite("elham", max_order=4, seed=11)]
    b = [r.as_record() for r in verify.run_suite("elham", max_order=4, seed=11)]
    assert a == b
