import random

import pytest
from hypothesis import given, strategies as st

from numcalc.syntax import (
    And, Atom, Bare, FormulaSyntaxError, Implies, Metavar, ParseError, Term,
    UnbalancedBracket, UnknownGlyph, canonical, member_of, parse_formula, parse_term, render,
)


def test_single_constant():
    assert len(parse_term("1").tokens) == 1


def test_bracketed_sum():
    assert parse_term("[1+1]").tokens == ("[", "1", "+", "1", "]")


def _depth(toks):
    d = best = 0
    for t in toks:
        d += (t == "[") - (t == "]")
        best = max(best, d)
    return best


def test_nested_term():
    assert _depth(parse_term("[1+[1--[1+1]]]").tokens) == 3


def test_whitespace_ignored():
    assert parse_term(" [1 + 1] ") == parse_term("[1+1]")


def test_eps_is_empty():
    assert parse_term("eps").tokens == ()
    assert str(Term(())) == "eps"


@pytest.mark.parametrize("text,pos", [("[1+1", 0), ("1+1]", 3), ("[1]]", 3)])
def test_unbalanced_reports_position(text, pos):
    with pytest.raises(UnbalancedBracket) as e:
        parse_term(text)
    assert e.value.position == pos


def test_unknown_glyph():
    with pytest.raises(UnknownGlyph) as e:
        parse_term("1*1")
    assert e.value.position == 1


def test_producer_atom():
    f = parse_formula("(a -> 1)")
    assert f == Atom("->", ("a",), ("1",))


def test_order_atom():
    f = parse_formula("([1-1] < 1)")
    assert isinstance(f, Atom) and f.pred == "<"
    assert f.left == tuple("[1-1]")


def test_transitivity_schema():
    f = parse_formula("((?a < ?b) and (?b < ?c)) => (?a < ?c)")
    assert isinstance(f, Implies) and isinstance(f.lhs, And)
    assert Metavar("a", "bar") in f.rhs.left


def test_metavariable_tiers():
    f = parse_formula("(??a -> ^b)")
    assert f.left[0].tier == "doublebar" and f.right[0].tier == "hat"


def test_syntax_error_position():
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula("(1 < 1")
    assert e.value.position == 6
    assert isinstance(e.value, ParseError)


def test_bar_only_between_productions():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("(a = 1|1)")


@pytest.mark.parametrize("text", [
    "(a -> 1|1+a)", "(1 < 1+1)", "not ([1+1] = [1-1])", "((h -> +h) || (i -> -i))",
    "?a and ?b => ([?a+?b] = [?b+?a])", "not (?b subset {?a,?c})", "(?a in CC)",
    "(?a subset ?b) <=> (?b = ?c?a?d)", "[[1+1]---[1+1]]",
])
def test_formula_round_trip(text):
    f = parse_formula(text)
    assert parse_formula(render(f)) == f


def test_member_of_examples():
    assert member_of(parse_term("[1+1]"), "CC")
    assert not member_of(parse_term("a+1"), "CC")
    assert member_of(parse_term("a+1"), "VC")
    assert member_of(Term(()), "V")


SYMS = list("1+-/[]TB_abcdefghijkl")


@given(st.lists(st.sampled_from(SYMS), max_size=20))
def test_member_monotone(toks):
    t = Term.__new__(Term)
    object.__setattr__(t, "tokens", tuple(toks))
    if member_of(t, "CC"):
        assert member_of(t, "VC")
    if member_of(t, "VC"):
        assert member_of(t, "VCP")


def _terms(draw_depth=3):
    leaf = st.just("1") | st.sampled_from(list("abc"))
    return st.recursive(leaf, lambda inner: st.tuples(
        inner, st.sampled_from(["+", "-", "--", "+++", "///"]), inner
    ).map(lambda t: "[" + "".join(t) + "]"), max_leaves=8)


@given(_terms(), st.integers(0, 5))
def test_term_round_trip(text, spaces):
    spaced = (" " * spaces).join(text)
    assert str(parse_term(spaced)) == canonical(text) == text


@given(_terms(), st.randoms(use_true_random=False))
def test_bracket_mutations_rejected(text, r: random.Random):
    toks = list(text)
    i = r.randrange(len(toks) + 1)
    toks.insert(i, r.choice("[]"))
    with pytest.raises(UnbalancedBracket):
        parse_term("".join(toks))


def test_bare_term_formula():
    assert parse_formula("1+1") == Bare(("1", "+", "1"))
