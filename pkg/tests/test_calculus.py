import json

import pytest

from numcalc.calculus import (
    NotAlternation, UnknownSystem, all_lines, alternation_split, lookup, manifest,
    producer_closure, synced_instantiate, system,
)
from numcalc.syntax import Atom, parse_formula


def _texts(name):
    return {a.text for a in system(name).particular}


def test_n_particular_axioms():
    assert sorted(_texts("N")) == sorted([
        "(a -> 1|1+a)", "(a < 1+a)", "?a and ?b => (?a+?b = ?b+?a)"])


def test_z_quoted_lines():
    t = _texts("Z")
    assert "(b|c -> +|-)" in t
    want = parse_formula("([?a-?a] = [1-1])")
    assert any(a.conclusion == want for a in system("Z").particular)


def test_r_farey_base_case():
    want = parse_formula("(T_1_1_ = [1-1])")
    assert any(a.conclusion == want for a in system("R").particular)


def test_line_count_and_numbering():
    lines = all_lines()
    assert len(lines) == 211
    assert [a.rev1 for a in lines] == [f"4.{i}" for i in range(1, 212)]
    for a in lines[::17]:
        assert lookup(a.rev1) is a
        if a.rev2 is not None:
            assert lookup(a.rev2, revision=2) is a


def test_unknown_system():
    with pytest.raises(UnknownSystem):
        system("C")


def test_systems_nest():
    prev = set()
    for name in "NZQR":
        s = system(name)
        syms = set(s.variables) | set(s.constants)
        assert prev <= syms
        prev = syms


def _split(text):
    return [f for f in alternation_split(text)]


def test_alternation_split_grammar():
    assert _split("(a -> 1|1+a)") == [parse_formula("(a -> 1)"), parse_formula("(a -> 1+a)")]


def test_alternation_split_left():
    assert _split("(b|c -> -)") == [parse_formula("(b -> -)"), parse_formula("(c -> -)")]


def test_alternation_split_both_sides():
    assert len(_split("(b|c -> +|-)")) == 4


def test_not_alternation():
    with pytest.raises(NotAlternation):
        alternation_split("(a -> 1)")
    with pytest.raises(NotAlternation):
        alternation_split("(1 < 1+1)")


def test_closure_n_depth2():
    assert parse_formula("(a -> 1+1+a)") in producer_closure(system("N"), 2)


def test_closure_z_depth2():
    assert parse_formula("(a -> [1-1])") in producer_closure(system("Z"), 2)


@pytest.mark.parametrize("name", list("NZQR"))
def test_closure_depth0_is_split_grammar(name):
    s = system(name)
    want = set()
    for a in s.particular:
        f = a.formula
        if isinstance(f, Atom) and f.pred == "->" and not a.premises:
            parts = alternation_split(f) if "|" in f.left + f.right else [f]
            want.update(p for p in parts if "|" not in p.right)
    assert set(producer_closure(s, 0)) == want


def test_closure_monotone():
    s = system("Z")
    sizes = [set(producer_closure(s, d)) for d in range(3)]
    for a, b in zip(sizes, sizes[1:]):
        assert a <= b


def test_closure_negative():
    with pytest.raises(ValueError):
        producer_closure(system("N"), -1)


def test_synced_single():
    assert synced_instantiate("e", 3) == "+++"
    assert synced_instantiate("f", 2) == "--"
    assert synced_instantiate("g", 1) == "/"


def test_synced_pairs():
    assert synced_instantiate(("h", "i"), 4) == ("++++", "----")
    assert synced_instantiate(("h", "j"), 2) == ("++", "//")


@pytest.mark.parametrize("n", range(1, 9))
def test_synced_lockstep(n):
    a, b = synced_instantiate(("h", "i"), n)
    assert len(a) == len(b) == n


def test_synced_bad_level():
    with pytest.raises(ValueError):
        synced_instantiate("e", 0)


@pytest.mark.parametrize("name", list("NZQR"))
def test_manifest_json(name):
    d = json.loads(manifest(name))
    assert d["version"] == 1 and d["system"] == name
    assert all({"id", "rev1", "schema"} <= set(a) for a in d["axioms"])
    assert manifest(name) == manifest(name)
