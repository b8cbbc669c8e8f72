import random

import pytest
from hypothesis import given, strategies as st

import oracles
from gen import pair
from numcalc.schema import (
    BudgetExceeded, NotSubset, Substitution, TierViolation, UnboundMetavar, apply,
    check_side, match, subset,
)
from numcalc.syntax import Atom, Metavar, parse_formula, parse_term

A, B, C, D, E = (Metavar(x, "bar") for x in "abcde")


def _s(**kw):
    return Substitution({Metavar(k, "bar"): tuple(parse_term(v).tokens) if v else () for k, v in kw.items()})


def test_match_single_binding():
    assert match(parse_formula("(?a < [1+?a])"), parse_formula("(1 < [1+1])")) == [_s(a="1")]


def test_match_context_schema():
    res = match(parse_formula("(?a?b?c < ?d?b?e)"), parse_formula("(a < 1+a)"))
    want = Substitution({A: (), B: ("a",), C: (), D: ("1", "+"), E: ()})
    assert want in res


def test_match_context_full_set_equals_oracle():
    p, f = parse_formula("(?a?b?c < ?d?b?e)"), parse_formula("(a < 1+a)")
    got = {frozenset(s.items()) for s in match(p, f)}
    assert got == oracles.seg_match(p, f)
    assert len(got) > 1


def test_match_sorted_and_unique():
    res = match(parse_formula("(?a?b = 1)"), parse_formula("(1+1 = 1)"))
    assert res == sorted(set(res), key=Substitution.sort_key)
    assert len(res) == 4


def test_match_respects_repeats():
    assert match(parse_formula("(?a = ?a)"), parse_formula("(1 = 1+1)")) == []


def test_match_initial_binding():
    p, f = parse_formula("(?a?b = 1)"), parse_formula("(1+1 = 1)")
    res = match(p, f, initial={A: ("1",)})
    assert res == [Substitution({A: ("1",), B: ("+", "1")})]


def test_bar_tier_excludes_predicates():
    p = parse_formula("(?a)")
    g = parse_formula("(a -> 1)")
    assert match(parse_formula("?a"), parse_formula("a")) == [Substitution({A: ("a",)})]
    assert match(p, g) == []


def test_budget():
    p = parse_formula("(?a?b?c?d < ?e?a?b?c)")
    f = Atom("<", tuple("1+" * 10), tuple("1+" * 10))
    with pytest.raises(BudgetExceeded):
        match(p, f, budget=50)


def test_apply_examples():
    assert apply(parse_formula("(?a < 1+?a)"), {A: ("1",)}) == parse_formula("(1 < 1+1)")
    assert apply(parse_formula("(?a1 = 1?a)"), {A: ()}) == parse_formula("(1 = 1)")


def test_apply_unbound():
    with pytest.raises(UnboundMetavar):
        apply(parse_formula("(?a = ?b)"), {A: ("1",)})


def test_apply_tier():
    with pytest.raises(TierViolation):
        apply(parse_formula("(?a = 1)"), {A: ("->",)})


@pytest.mark.parametrize("t,u,want", [
    ("1", "[1+1]", True), ("+", "[1-1]", False), ("[1+1]", "[[1+1]--[1+1+1]]", True),
    ("eps", "1", True), ("1+1+1", "1+1", False),
])
def test_subset(t, u, want):
    assert subset(parse_term(t), parse_term(u)) is want


@given(st.lists(st.sampled_from("1+-[]"), max_size=4), st.lists(st.sampled_from("1+-[]"), max_size=12))
def test_subset_matches_scan(t, u):
    assert subset(tuple(t), tuple(u)) == oracles._occurs(t, u)


def test_not_subset_examples():
    sc = NotSubset(B, (A, C))
    assert check_side({B: ("a",), A: (), C: ()}, sc)
    assert not check_side({B: ("1",), A: tuple("[1+1]"), C: ()}, sc)
    with pytest.raises(UnboundMetavar):
        check_side({B: ("1",)}, sc)


def test_not_subset_random(rng):
    pool = [(), ("1",), ("a",), tuple("1+a"), tuple("[1+1]"), ("+",)]
    sc = NotSubset(B, (A, C))
    for _ in range(300):
        sigma = {m: rng.choice(pool) for m in (A, B, C)}
        assert sc.holds(sigma) == oracles.side_ok(sc, sigma, None)


@given(st.randoms(use_true_random=False))
def test_match_equals_segmentation(r: random.Random):
    p, f = pair(r, max_tokens=16)
    assert {frozenset(s.items()) for s in match(p, f)} == oracles.seg_match(p, f)


@given(st.randoms(use_true_random=False))
def test_every_match_reapplies(r: random.Random):
    p, f = pair(r, max_tokens=16)
    for s in match(p, f):
        assert apply(p, s, check_balance=False) == f


@given(st.randoms(use_true_random=False))
def test_balanced_matches_are_subset(r: random.Random):
    p, f = pair(r, max_tokens=14)
    bal = {frozenset(s.items()) for s in match(p, f, balanced=True)}
    assert bal == oracles.seg_match(p, f, balanced=True)
    assert bal <= oracles.seg_match(p, f)
