import pytest

import oracles
from numcalc.calculus import system
from numcalc.errata import fixture_path
from numcalc.prover import (
    DerivationStep, ProofSyntaxError, UnknownAxiom, check_proof, check_step,
    enumerate_numbers, load_proof, number_terms, parse_proof, search,
)
from numcalc.syntax import parse_formula

N = system("N")
F = parse_formula


def _order_step(conclusion):
    return DerivationStep(2, "A3", F(conclusion), "PSI.ctx-lt-1occ", (1, "N.order-seed"))


def test_n_order_step_valid():
    assert check_step(N, [F("(a -> 1)")], _order_step("(1 < 1+1)")).valid


def test_n_order_step_mutated():
    v = check_step(N, [F("(a -> 1)")], _order_step("(1 < 1+1+1)"))
    assert not v.valid and v.instance


def test_unknown_axiom():
    with pytest.raises(UnknownAxiom):
        check_step(N, [], DerivationStep(1, "X", F("(1 = 1)"), "PSI.nope"))


def test_bad_reference():
    step = DerivationStep(1, "A1", F("(1 < 1+1)"), "PSI.ctx-lt-1occ", (3,))
    assert "earlier" in check_step(N, [], step).reason


@pytest.mark.parametrize("name,summary", [
    ("N", "9+3 steps valid"),
    ("Z", "11+4 of 13+4 steps valid, 1/2 lemmas valid"),
    ("Q", "13+2 of 18+2 steps valid, 3/5 lemmas valid"),
    ("R", "13+21 of 22+46 steps valid, 19/29 lemmas valid"),
])
def test_fixture_summaries(name, summary):
    rep = check_proof(load_proof(fixture_path(name)))
    assert rep.summary() == summary


def test_r_chain_key_steps_valid():
    rep = check_proof(load_proof(fixture_path("R")))
    by = {r.label: r.verdict for r in rep.results}
    assert by["B10"].valid and by["B36"].valid and by["B40"].valid


def test_swapped_premise_index_breaks_one_step():
    text = fixture_path("N").read_text().replace("[A6, A1]", "[A6, A2]")
    rep = check_proof(parse_proof(text))
    assert [r.label for r in rep.invalid()] == ["A7"]


def test_hints_are_optional_for_n():
    assert check_proof(load_proof(fixture_path("N")), use_hints=False).valid


def test_render_round_trip():
    p = load_proof(fixture_path("N"))
    q = parse_proof(p.render())
    assert [(s.formula, s.axiom, s.refs) for s in q.steps] == [(s.formula, s.axiom, s.refs) for s in p.steps]


@pytest.mark.parametrize("text", [
    "system: N\nstep A1 (1 = 1) ; by N.add-comm\n",
    "system: N\nstep A1: (1 = 1) ; by N.add-comm [A9]\n",
    "step A1: (1 = 1) ; by N.add-comm\n",
])
def test_proof_syntax_errors(text):
    with pytest.raises(ProofSyntaxError):
        parse_proof(text)


def test_search_depth0_is_seeds():
    res = search(N, depth=0)
    assert set(res.facts) == {a.conclusion for a in N.particular if a.is_fact}


def test_search_n_depth4():
    assert "(1 < 1+1)" in search(N, depth=4)


def test_search_z_depth6():
    assert "([1-1] < 1)" in search(system("Z"), depth=6)


@pytest.mark.parametrize("name,depth", [("N", 1), ("N", 2), ("N", 3), ("Z", 1)])
def test_search_equals_naive(name, depth):
    s = system(name)
    assert set(search(s, depth=depth).facts) == oracles.naive_search(s, depth)


def test_search_derivations_check():
    res = search(N, depth=3)
    for f in res.facts[:30]:
        proof = res.derivation(f)
        assert check_proof(proof).valid, f


def test_search_given_seed():
    res = search(N, seeds=["(a -> 1)"], depth=0)
    assert "(a -> 1)" in res


def test_enumerate_n():
    assert [str(t) for t in enumerate_numbers(N, 7)] == ["1", "1+1", "1+1+1", "1+1+1+1"]


def test_enumerate_z_small():
    got = {str(t) for t in enumerate_numbers(system("Z"), 7)}
    assert {"[1-1]", "[1-1-1]", "[1+1]", "1"} <= got


@pytest.mark.parametrize("name", list("NZQR"))
def test_enumerate_max1(name):
    assert [str(t) for t in enumerate_numbers(system(name), 1)] == ["1"]


@pytest.mark.parametrize("name", list("NZQR"))
def test_enumerate_matches_grammar(name):
    got = set(number_terms(system(name), 9))
    assert got == oracles.cfg_language(name, 9)


def test_enumerate_order():
    ts = [t.tokens for t in enumerate_numbers(system("Q"), 9)]
    assert ts == sorted(ts, key=lambda t: (len(t), "".join(t)))


def test_certify_n():
    out = enumerate_numbers(N, 5, certify=True)
    assert all(c.proof is not None and check_proof(c.proof).valid for c in out)
