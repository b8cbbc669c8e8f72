"""The shared axiom set PSI and the four systems N, Z, Q and R.

Every numbered line of the source calculus is registered here under a stable
semantic id. Numbering differs between the two published revisions, so each
entry records both numbers (``rev1``, ``rev2``); the trichotomy axiom exists
only in the first revision.

Axioms are written in the ASCII formula syntax of :mod:`numcalc.syntax`.
Notation lines (alphabets, classes, membership and subset definitions) are
kept as text; their content is realised by :func:`numcalc.syntax.member_of`
and :func:`numcalc.schema.subset`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .schema import DEFAULT_BUDGET, BudgetExceeded, InClass, NotSubset
from .syntax import (
    And, Atom, Iff, Implies, Member, Metavar, Not, Subset, Sync,
    metavars_of, parse_formula, render, render_side, sides_of,
)

SYSTEMS = ("N", "Z", "Q", "R")
REV1_ONLY = "revision-1-only"


class NotAlternation(ValueError):
    pass


class UnknownSystem(ValueError):
    pass


# ---------------------------------------------------------------- registry

@dataclass(frozen=True)
class AxiomSchema:
    """One numbered line. ``formula`` is None for notation lines."""

    id: str
    rev1: str
    text: str
    kind: str = "axiom"  # "axiom" | "notation"
    flags: frozenset = frozenset()
    formula: object = None
    premises: tuple = ()
    sides: tuple = ()
    conclusion: object = None

    @property
    def rev2(self) -> str | None:
        return rev2_number(self.rev1, self.flags)

    @property
    def premise_count(self) -> int:
        return len(self.premises)

    @property
    def reversible(self) -> bool:
        return isinstance(self.formula, Iff)

    @property
    def is_fact(self) -> bool:
        """Premise-free axiom whose conclusion is ground."""
        return (self.kind == "axiom" and not self.premises and not self.sides
                and not metavars_of(self.conclusion))

    def number(self, revision: int = 1) -> str | None:
        return self.rev1 if revision == 1 else self.rev2

    def to_json(self) -> dict:
        d = {"id": self.id, "rev1": self.rev1, "rev2": self.rev2,
             "kind": self.kind, "flags": sorted(self.flags), "schema": self.text}
        if self.formula is not None:
            d["premises"] = [render(p) for p in self.premises]
            d["sides"] = [str(s) for s in self.sides]
            d["conclusion"] = render(self.conclusion)
        return d


def rev2_number(rev1: str, flags=frozenset()) -> str | None:
    if REV1_ONLY in flags:
        return None
    major, minor = rev1.split(".")
    n = int(minor)
    return f"{major}.{n - 1 if n > 20 else n}"


def _single_mv(side):
    return len(side) == 1 and isinstance(side[0], Metavar)


def _split(formula):
    """Split a schema into (premises, side conditions, conclusion)."""
    if isinstance(formula, (Implies, Iff)):
        lhs, concl = formula.lhs, formula.rhs
    else:
        return (), (), formula
    items = lhs.args if isinstance(lhs, And) else (lhs,)
    prem, sides = [], []
    for it in items:
        if isinstance(it, Member) and _single_mv(it.side):
            sides.append(InClass(it.side[0], it.cls))
        elif (isinstance(it, Not) and isinstance(it.arg, Subset) and it.arg.braced
              and _single_mv(it.arg.side) and all(_single_mv(t) for t in it.arg.targets)):
            sides.append(NotSubset(it.arg.side[0], tuple(t[0] for t in it.arg.targets)))
        else:
            prem.append(it)
    return tuple(prem), tuple(sides), concl


def _ax(aid: str, num: int, text: str, *flags: str) -> AxiomSchema:
    f = parse_formula(text)
    prem, sides, concl = _split(f)
    return AxiomSchema(aid, f"4.{num}", text, "axiom", frozenset(flags), f, prem, sides, concl)


def _note(aid: str, num: int, text: str) -> AxiomSchema:
    return AxiomSchema(aid, f"4.{num}", text, "notation")


_NOTATION_KEYS = ("V", "C", "P", "VC", "CC", "VCP", "member-V", "member-C",
                  "member-VC", "member-CC", "member-VCP", "bar-range", "subset-set")


def _notation_block(prefix: str, start: int, vs, cs, ps) -> list:
    texts = [
        "V = {eps," + ",".join(vs) + "}",
        "C = {eps," + ",".join(cs) + "}",
        "P = {eps," + ",".join(ps) + "}",
        "VC = (V | C)*",
        "CC = C*",
        "VCP = (V | C | P)*",
        "(^a in V) <=> ^a is eps or one variable",
        "(^a in C) <=> ^a is eps or one constant",
        "(^a in VC) <=> ^a is a string over V and C",
        "(^a in CC) <=> ^a is a string over C",
        "(^a in VCP) <=> ^a is a string over V, C and P",
        "bar metavariables range over VC, doublebar over VCP",
        "(?a subset {?b,...}) <=> (?a subset ?b) or ...",
    ]
    return [_note(f"{prefix}.{k}", start + i, t) for i, (k, t) in enumerate(zip(_NOTATION_KEYS, texts))]


_BASE_PREDS = ("in", "subset", "->", "|", "=", "<")

PHI_NOTATION = (
    [_note("PHI.frame", 1, "PHI {")]
    + _notation_block("PHI", 2, ("a", "b", "..."), ("1", "+", "..."), _BASE_PREDS + ("...",))
)

PSI = (
    _note("PSI.frame", 15, "PSI {"),
    _ax("PSI.subset-def", 16, "(?a subset ?b) <=> (?b = ?c?a?d)"),
    _ax("PSI.prod-compose", 17, "(?a -> ?b?c?d) and (?c -> ?e) => (?a -> ?b?e?d)"),
    _ax("PSI.alt-split-right", 18, "(??a -> ??b|??c) => (??a -> ??b) and (??a -> ??c)"),
    _ax("PSI.alt-split-left", 19, "(??a|??b -> ??c) => (??a -> ??c) and (??b -> ??c)"),
    _ax("PSI.trichotomy", 20, "?a and ?b => (?a < ?b) or (?b < ?a) or (?a = ?b)", REV1_ONLY),
    _ax("PSI.lt-asym", 21, "(?a < ?b) => not (?b < ?a)"),
    _ax("PSI.lt-neq", 22, "(?a < ?b) => not (?a = ?b)"),
    _ax("PSI.lt-trans", 23, "(?a < ?b) and (?b < ?c) => (?a < ?c)"),
    _ax("PSI.lt-number", 24, "(?a < ?b) and (?a in CC) and (?b in CC) => ?a and ?b"),
    _ax("PSI.lt-eq-right", 25, "(?a < ?b?c?d) and (?c = ?e) => (?a < ?b?e?d)"),
    _ax("PSI.lt-eq-left", 26, "(?a?b?c < ?d) and (?b = ?e) => (?a?e?c < ?d)"),
    _ax("PSI.ctx-lt-right-1occ", 27,
        "(?a < ?b?c?d) and (?c -> ?e) and not (?c subset {?a,?b,?d}) => (?a < ?b?e?d)"),
    _ax("PSI.ctx-lt-right-2occ", 28,
        "(?a < ?b?c?d?c?e) and (?c -> ?f) and not (?c subset {?a,?b,?d,?e}) => (?a < ?b?f?d?f?e)"),
    _ax("PSI.ctx-lt-left-1occ", 29,
        "(?a?b?c < ?d) and (?b -> ?e) and not (?b subset {?a,?c,?d}) => (?a?e?c < ?d)"),
    _ax("PSI.ctx-lt-1occ", 30,
        "(?a?b?c < ?d?b?e) and (?b -> ?f) and not (?b subset {?a,?c,?d,?e}) => (?a?f?c < ?d?f?e)"),
    _ax("PSI.ctx-lt-1l2r", 31,
        "(?a?b?c < ?d?b?e?b?f) and (?b -> ?g) and not (?b subset {?a,?c,?d,?e,?f})"
        " => (?a?g?c < ?d?g?e?g?f)"),
    _ax("PSI.ctx-lt-left-2occ", 32,
        "(?a?b?c?b?d < ?e) and (?b -> ?f) and not (?b subset {?a,?c,?d,?e}) => (?a?f?c?f?d < ?e)"),
    _ax("PSI.ctx-lt-2l1r", 33,
        "(?a?b?c?b?d < ?e?b?f) and (?b -> ?g) and not (?b subset {?a,?c,?d,?e,?f})"
        " => (?a?g?c?g?d < ?e?g?f)"),
    _ax("PSI.ctx-lt-2occ", 34,
        "(?a?b?c?b?d < ?e?b?f?b?g) and (?b -> ?h) and not (?b subset {?a,?c,?d,?e,?f,?g})"
        " => (?a?h?c?h?d < ?e?h?f?h?g)"),
    _ax("PSI.eq-refl", 35, "(?a = ?a)"),
    _ax("PSI.eq-sym", 36, "(?a = ?b) => (?b = ?a)"),
    _ax("PSI.eq-not-lt", 37, "(?a = ?b) => not (?a < ?b)"),
    _ax("PSI.eq-subst-right", 38, "(?a = ?b?c?d) and (?c = ?e) => (?a = ?b?e?d)"),
    _ax("PSI.eq-congr", 39, "?a?b?c and (?b = ?d) => (?a?b?c = ?a?d?c)"),
    _ax("PSI.ctx-eq-right-1occ", 40,
        "(?a = ?b?c?d) and (?c -> ?e) and not (?c subset {?a,?b,?d}) => (?a = ?b?e?d)"),
    _ax("PSI.ctx-eq-right-2occ", 41,
        "(?a = ?b?c?d?c?e) and (?c -> ?f) and not (?c subset {?a,?b,?d,?e}) => (?a = ?b?f?d?f?e)"),
    _ax("PSI.ctx-eq-1occ", 42,
        "(?a?b?c = ?d?b?e) and (?b -> ?f) and not (?b subset {?a,?c,?d,?e}) => (?a?f?c = ?d?f?e)"),
    _ax("PSI.ctx-eq-1l2r", 43,
        "(?a?b?c = ?d?b?e?b?f) and (?b -> ?g) and not (?b subset {?a,?c,?d,?e,?f})"
        " => (?a?g?c = ?d?g?e?g?f)"),
    _ax("PSI.ctx-eq-2occ", 44,
        "(?a?b?c?b?d = ?e?b?f?b?g) and (?b -> ?h) and not (?b subset {?a,?c,?d,?e,?f,?g})"
        " => (?a?h?c?h?d = ?e?h?f?h?g)"),
)


def _additive(prefix: str, start: int) -> list:
    """The eight additive laws shared by Z, Q and R."""
    rows = [
        ("sub-self", "?a => ([?a-?a] = [1-1])"),
        ("add-comm", "?a and ?b => ([?a+?b] = [?b+?a])"),
        ("sub-add-cancel", "?a and ?b => ([[?a-?b]+?b] = ?a)"),
        ("sub-add-swap", "?a and ?b and ?c => ([?a-?b+?c] = [?a+?c-?b])"),
        ("add-assoc", "?a and ?b and ?c => ([?a+[?b+?c]] = [[?a+?b]+?c])"),
        ("add-sub-assoc", "?a and ?b and ?c => ([?a+[?b-?c]] = [[?a+?b]-?c])"),
        ("sub-add-assoc", "?a and ?b and ?c => ([?a-[?b+?c]] = [[?a-?b]-?c])"),
        ("sub-sub-assoc", "?a and ?b and ?c => ([?a-[?b-?c]] = [[?a-?b]+?c])"),
    ]
    return [_ax(f"{prefix}.{k}", start + i, t) for i, (k, t) in enumerate(rows)]


_N_AXIOMS = [
    _ax("N.grammar", 58, "(a -> 1|1+a)"),
    _ax("N.order-seed", 59, "(a < 1+a)"),
    _ax("N.add-comm", 60, "?a and ?b => (?a+?b = ?b+?a)"),
]

_Z_AXIOMS = [
    _ax("Z.grammar-a", 74, "(a -> 1|[aba])"),
    _ax("Z.grammar-ops", 75, "(b|c -> +|-)"),
    _ax("Z.order-seed", 76, "(a < [1+a])"),
    _ax("Z.assoc-mixed", 77, "?a and ?b and ?c => ([?ab?bc?c] = [[?ab?b]c?c])"),
    *_additive("Z", 78),
]

_NZ = "not (?a = [1-1])"

_Q_AXIOMS = [
    _ax("Q.grammar-a", 99, "(a -> 1|[aba])"),
    _ax("Q.grammar-b", 100, "(b -> +|-)"),
    _ax("Q.grammar-cd", 101, "(c|d -> b|++|--)"),
    _ax("Q.order-seed", 102, "(a < [1+a])"),
    _ax("Q.mono-add", 103, "(?a < ?b) and ?c => ([?a+?c] < [?b+?c])"),
    _ax("Q.mono-sub", 104, "(?a < ?b) and ?c => ([?c-?b] < [?c-?a])"),
    _ax("Q.mono-div", 105,
        "([1-1] < ?a) and (?a < ?b) and ([1-1] < ?c) => ([?a--?c] < [?b--?c])"),
    _ax("Q.assoc-mixed", 106, "?a and ?b and ?c => ([?ac?bd?c] = [[?ac?b]d?c])"),
    *_additive("Q", 107),
    _ax("Q.mul-one", 115, "?a => ([?a++1] = ?a)"),
    _ax("Q.div-self", 116, "not (?a = [1-1]) => ([?a--?a] = 1)"),
    _ax("Q.mul-comm", 117, "?a and ?b => ([?a++?b] = [?b++?a])"),
    _ax("Q.mul-distrib-add", 118,
        "?a and ?b and ?c => ([?a++[?b+?c]] = [[?a++?b]+[?a++?c]])"),
    _ax("Q.mul-distrib-sub", 119,
        "?a and ?b and ?c => ([?a++[?b-?c]] = [[?a++?b]-[?a++?c]])"),
    _ax("Q.mul-assoc", 120, "?a and ?b and ?c => ([?a++[?b++?c]] = [[?a++?b]++?c])"),
    _ax("Q.div-mul-cancel", 121, "?a and not (?b = [1-1]) => ([?a--?b++?b] = ?a)"),
    _ax("Q.div-laws", 122,
        "?a and ?b and not (?c = [1-1]) => ([?a--?c++?b] = [?a++?b--?c])"
        " and ([[?a+?b]--?c] = [[?a--?c]+[?b--?c]])"
        " and ([[?a-?b]--?c] = [[?a--?c]-[?b--?c]])"
        " and ([?a++[?b--?c]] = [[?a++?b]--?c])"),
    # the source line has misplaced brackets around the two premises; this is
    # the evident reading (see docs/errata.md)
    _ax("Q.div-assoc", 123,
        "?a and not (?b = [1-1]) and not (?c = [1-1]) => ([?a--[?b++?c]] = [[?a--?b]--?c])"
        " and ([?a--[?b--?c]] = [[?a--?b]++?c])"),
]

_R_AXIOMS = [
    _ax("R.sync-ctx-eq-right", 137,
        "(?a?b?c = ?d?b?e?f?g) and not (?b subset {?a,?c,?d,?e,?f,?g})"
        " and not (?f subset {?a,?b,?c,?d,?e,?g}) and ((?b -> ?h) || (?f -> ?i))"
        " => (?a?h?c = ?d?h?e?i?g)"),
    _ax("R.sync-ctx-eq-left", 138,
        "(?a?b?c?d?e = ?f) and not (?b subset {?a,?c,?d,?e,?f})"
        " and not (?d subset {?a,?b,?c,?e,?f}) and ((?b -> ?g) || (?d -> ?h))"
        " => (?a?g?c?h?e = ?f)"),
    _ax("R.grammar-a", 139, "(a -> 1|[aba])"),
    _ax("R.grammar-b", 140, "(b -> +|-)"),
    _ax("R.grammar-cd", 141, "(c|d -> e|f|g)"),
    _ax("R.grammar-e", 142, "(e -> +|+e)"),
    _ax("R.grammar-f", 143, "(f -> -|-f)"),
    _ax("R.grammar-g", 144, "(g -> /|/g)"),
    _ax("R.sync-hi-base", 145, "(h -> +) || (i -> -)"),
    _ax("R.sync-hi-step", 146, "(h -> +h) || (i -> -i)"),
    _ax("R.sync-ih-base", 147, "(i -> -) || (h -> +)"),
    _ax("R.sync-ih-step", 148, "(i -> -i) || (h -> +h)"),
    _ax("R.sync-hj-base", 149, "(h -> +) || (j -> /)"),
    _ax("R.sync-hj-step", 150, "(h -> +h) || (j -> /j)"),
    _ax("R.grammar-k", 151, "(k -> [1+1]|[1+k])"),
    _ax("R.grammar-l", 152, "(l -> 1|[1+l])"),
    _ax("R.order-seed", 153, "(a < [1+a])"),
    _ax("R.mono-add-sub", 154,
        "(?a < ?b) and ?c => ([?a+?c] < [?b+?c]) and ([?c-?b] < [?c-?a])"),
    _ax("R.mono-div", 155,
        "([1-1] < ?a) and (?a < ?b) and ([1-1] < ?c) => ([?a--?c] < [?b--?c])"
        " and ([?c--?b] < [?c--?a])"),
    _ax("R.root-gt-one", 156, "(1 < ?a) and (1 < ?b) => (1 < [?a--f?b])"),
    _ax("R.log-gt-one", 157, "(1 < ?a) and (?a < ?b) => (1 < [?b/g?a])"),
    _ax("R.mono-hyper-left", 158,
        "(1 < ?a) and (?a < ?b) and (1 < ?c) => ([?ae?c] < [?be?c])"),
    _ax("R.mono-hyper-left-inv", 159,
        "(1 < ?a) and (1 < ?b) and (1 < ?c) and ([?ae?c] < [?be?c]) => (?a < ?b)"),
    _ax("R.mono-hyper-right", 160,
        "(1 < ?a) and (1 < ?b) and (?b < ?c) => ([?ae?b] < [?ae?c])"),
    _ax("R.mono-hyper-right-inv", 161,
        "(1 < ?a) and (1 < ?b) and (1 < ?c) and ([?ae?b] < [?ae?c]) => (?b < ?c)"),
    _ax("R.assoc-mixed", 162, "?a and ?b and ?c => ([?ac?bd?c] = [[?ac?b]d?c])"),
    _ax("R.alias-sub", 163, "?a and ?b => ([?a-?b] = [?a/?b])"),
    _ax("R.alias-div", 164, "?a and not (?b = [1-1]) => ([?a--?b] = [?a//?b])"),
    *_additive("R", 165),
    _ax("R.mul-one", 173, "?a => ([?a++1] = ?a)"),
    _ax("R.div-self", 174, "not (?a = [1-1]) => ([?a--?a] = 1)"),
    _ax("R.mul-comm", 175, "?a and ?b => ([?a++?b] = [?b++?a])"),
    _ax("R.mul-assoc", 176, "?a and ?b and ?c => ([?a++[?b++?c]] = [[?a++?b]++?c])"),
    _ax("R.mul-distrib-add", 177,
        "?a and ?b and ?c => ([?a++[?b+?c]] = [[?a++?b]+[?a++?c]])"),
    _ax("R.mul-distrib-sub", 178,
        "?a and ?b and ?c => ([?a++[?b-?c]] = [[?a++?b]-[?a++?c]])"),
    _ax("R.div-mul-cancel", 179, "?a and not (?b = [1-1]) => ([[?a--?b]++?b] = ?a)"),
    _ax("R.div-laws", 180,
        "?a and not (?b = [1-1]) and ?c => ([?a--?b++?c] = [?a++?c--?b])"
        " and ([[?a+?c]--?b] = [[?a--?b]+[?c--?b]])"
        " and ([[?a-?c]--?b] = [[?a--?b]-[?c--?b]])"),
    _ax("R.div-assoc", 181,
        "?a and not (?b = [1-1]) and not (?c = [1-1]) => ([?a++[?b--?c]] = [[?a++?b]--?c])"
        " and ([?a--[?b++?c]] = [[?a--?b]--?c]) and ([?a--[?b--?c]] = [[?a--?b]++?c])"),
    _ax("R.pow-one", 182, "?a => ([?a+++1] = ?a)"),
    _ax("R.one-pow", 183, "?a => ([1+++?a] = 1)"),
    _ax("R.pow-zero", 184, "not (?a = [1-1]) => ([?a+++[1-1]] = 1)"),
    _ax("R.zero-pow", 185, "([1-1] < ?a) => ([[1-1]+++?a] = [1-1])"),
    _ax("R.root-laws", 186,
        "([1-1] < ?a) and not (?b = [1-1]) and ?c => ([?a---?b+++?b] = ?a)"
        " and ([?a---?b+++?c] = [?a+++?c---?b]) and ([?a+++[?c--?b]] = [[?a+++?c]---?b])"),
    _ax("R.log-laws", 187,
        "([1-1] < ?a) and ([1-1] < ?b) and ?c => ([?a+++[?b///?a]] = ?b)"
        " and ([[?a+++?c]///?b] = [?c++[?a///?b]])"
        " and ([[?a--?b]+++?c] = [[?a+++?c]--[?b+++?c]])"),
    _ax("R.log-quot-laws", 188,
        "([1-1] < ?a) and ([1-1] < ?b) and ([1-1] < ?c) => ([[?a///?c]--[?b///?c]] = [?a///?b])"
        " and ([[?a++?b]///?c] = [[?a///?c]+[?b///?c]])"
        " and ([[?a--?b]///?c] = [[?a///?c]-[?b///?c]])"),
    _ax("R.pow-laws", 189,
        "not (?a = [1-1]) and not (?b = [1-1]) and not (?c = [1-1])"
        " => ([[?a++?b]+++?c] = [[?a+++?c]++[?b+++?c]])"
        " and ([?a+++[?b++?c]] = [[?a+++?b]+++?c])"
        " and ([?a+++[?b+?c]] = [[?a+++?b]++[?a+++?c]])"
        " and ([?a+++[?b-?c]] = [[?a+++?b]--[?a+++?c]])"),
    _ax("R.root-assoc", 190,
        "([1-1] < ?a) and not (?b = [1-1]) and not (?c = [1-1])"
        " => ([?a---[?b++?c]] = [[?a---?b]---?c]) and ([?a---[?b--?c]] = [[?a---?b]+++?c])"),
    _ax("R.root-distrib", 191,
        "([1-1] < ?a) and ([1-1] < ?b) and not (?c = [1-1])"
        " => ([[?a++?b]---?c] = [[?a---?c]++[?b---?c]])"
        " and ([[?a--?b]---?c] = [[?a---?c]--[?b---?c]])"),
    _ax("R.hyper-one-right", 192, "(1 < ?a) => ([?a+e1] = ?a)"),
    _ax("R.hyper-inv-one-right", 193, "(1 < ?a) => ([?a-f1] = ?a)"),
    _ax("R.hyper-one-left", 194, "(1 < ?a) => ([1++e?a] = 1)"),
    _ax("R.hyper-inv-one-left", 195, "(1 < ?a) => ([1--f?a] = 1)"),
    _ax("R.log-of-one", 196, "(1 < ?a) => ([1///?a] = [1-1])"),
    _ax("R.exp-inv-self", 197, "(1 < ?a) => ([?a/g?a] = 1)"),
    _ax("R.inv-first-left", 198, "(1 < ?a) and (1 < ?b) => ([[?ai?b]h?b] = ?a)"),
    _ax("R.inv-first-right", 199, "(1 < ?a) and (1 < ?b) => ([[?ah?b]i?b] = ?a)"),
    _ax("R.inv-exp-left", 200, "(1 < ?a) and (1 < ?b) => ([?bh[?aj?b]] = ?a)"),
    _ax("R.inv-exp-right", 201, "(1 < ?a) and (1 < ?b) => ([[?bh?a]j?b] = ?a)"),
    _ax("R.hyper-rec", 202,
        "(1 < ?a) and (1 < ?b) => ([?a+e?b] = [?ae[?a+e[?b-1]]])"),
    _ax("R.farey-top-base-1", 203, "(T_1_1_ = [1-1])"),
    _ax("R.farey-top-base-2", 204, "(T_1_[1+1]_ = 1)"),
    _ax("R.farey-bot-base-1", 205, "(B_1_1_ = 1)"),
    _ax("R.farey-bot-base-2", 206, "(B_1_[1+1]_ = 1)"),
    _ax("R.farey-top-odd", 207, "(T_k_[[[1+1]++l]-1]_ = T_[k-1]_l_)"),
    _ax("R.farey-bot-odd", 208, "(B_k_[[[1+1]++l]-1]_ = B_[k-1]_l_)"),
    _ax("R.farey-top-even", 209, "(T_k_[[1+1]++l]_ = [T_[k-1]_l_+T_[k-1]_[l+1]_])"),
    _ax("R.farey-bot-even", 210, "(B_k_[[1+1]++l]_ = [B_[k-1]_l_+B_[k-1]_[l+1]_])"),
    _ax("R.farey-refine", 211,
        "(1 < ?a) and T_?b_?c_ and B_?b_?c_"
        " => ([?a+h[T_?b_?c_--B_?b_?c_]] = [[?a+hT_?b_?c_]-iB_?b_?c_])"),
]


# ---------------------------------------------------------------- productions

@dataclass(frozen=True)
class ProductionRule:
    lhs: str
    alternatives: tuple  # of token tuples
    source: str = ""

    def __post_init__(self):
        if len(self.lhs) != 1 or not self.lhs.islower():
            raise ValueError(f"production lhs must be one variable, got {self.lhs!r}")
        if not self.alternatives:
            raise ValueError("production needs at least one alternative")

    def __str__(self):
        return f"{self.lhs} -> " + "|".join(render_side(a) for a in self.alternatives)


@dataclass(frozen=True)
class SyncedPair:
    """Two productions applied in lockstep, base case with base case."""

    left: ProductionRule   # alternatives: (base, step)
    right: ProductionRule
    sources: tuple = ()

    def __post_init__(self):
        if len(self.left.alternatives) != len(self.right.alternatives):
            raise ValueError("synced rules need matching alternative counts")

    @property
    def family(self) -> tuple:
        return (self.left.lhs, self.right.lhs)

    def level(self, n: int) -> tuple:
        return (_unroll(self.left, n), _unroll(self.right, n))


def _unroll(rule: ProductionRule, n: int) -> str:
    """Level-n word of a base/step rule such as ``e -> +|+e``."""
    if n < 1:
        raise ValueError("level must be >= 1")
    base, step = rule.alternatives
    word = base
    for _ in range(n - 1):
        out = []
        for t in step:
            out.extend(word if t == rule.lhs else (t,))
        word = tuple(out)
    return "".join(word)


def _alternatives(side) -> list:
    out, cur = [], []
    for t in side:
        if t == "|":
            out.append(tuple(cur))
            cur = []
        else:
            cur.append(t)
    out.append(tuple(cur))
    return out


def alternation_split(f) -> list:
    """Split a producer atom carrying ``|`` into its component producer atoms.

    Both sides are split (left-major), so ``b|c -> +|-`` yields four facts.
    """
    if isinstance(f, str):
        f = parse_formula(f)
    if not (isinstance(f, Atom) and f.pred == "->"):
        raise NotAlternation("not a producer atom")
    if "|" not in f.left and "|" not in f.right:
        raise NotAlternation(f"{render(f)} has no alternation")
    return [Atom("->", l, r) for l in _alternatives(f.left) for r in _alternatives(f.right)]


def _rules_from(axiom: AxiomSchema) -> list:
    f = axiom.formula
    return [ProductionRule(l[0], tuple(_alternatives(f.right)), axiom.id)
            for l in _alternatives(f.left)]


# ---------------------------------------------------------------- systems

@dataclass(frozen=True)
class SystemDef:
    name: str
    variables: tuple
    constants: tuple
    predicates: tuple
    notation: tuple
    particular: tuple
    psi: tuple
    productions: tuple
    synced: tuple
    minimal: bool = False
    _index: dict = field(default=None, compare=False, repr=False)

    @property
    def alphabet(self):
        return (self.variables, self.constants)

    @property
    def axioms(self) -> tuple:
        """Every usable (non-notation) axiom: PSI first, then the particular ones."""
        return tuple(a for a in self.psi + self.particular if a.kind == "axiom")

    @property
    def lines(self) -> tuple:
        """All numbered lines owned by this system, in source order."""
        return self.notation + self.particular

    def axiom(self, aid: str) -> AxiomSchema:
        return self._index[aid]

    def has(self, aid: str) -> bool:
        return aid in self._index

    def facts(self) -> list:
        """Ground premise-free axioms, i.e. the system's seed formulas."""
        return [a.conclusion for a in self.particular if a.is_fact and not isinstance(a.conclusion, Sync)]

    def sync_facts(self) -> list:
        return [a.conclusion for a in self.particular if isinstance(a.conclusion, Sync)]

    def rule(self, lhs: str) -> ProductionRule:
        merged = [r for r in self.productions if r.lhs == lhs]
        if not merged:
            raise KeyError(lhs)
        alts = tuple(a for r in merged for a in r.alternatives)
        return ProductionRule(lhs, alts, merged[0].source)

    def operator_words(self, max_len: int) -> list:
        """Binary operator words that may join bracketed number terms."""
        if self.name == "N":
            return []
        words = {"+", "-"}
        if self.name == "Q":
            words |= {"++", "--"}
        if self.name == "R":
            for sym in "+-/":
                words |= {sym * n for n in range(1, max_len + 1)}
        return sorted((w for w in words if len(w) <= max_len), key=lambda w: (len(w), w))

    def uses_symbol(self, tok) -> bool:
        return tok in self.variables or tok in self.constants or tok in self.predicates

    def to_json(self) -> dict:
        return {
            "version": 1,
            "system": self.name,
            "variables": list(self.variables),
            "constants": list(self.constants),
            "predicates": list(self.predicates),
            "minimal": self.minimal,
            "axioms": [a.to_json() for a in self.psi + self.notation + self.particular],
        }


_SYSTEM_TABLE = {
    "N": (45, ("a", "b"), ("1", "+"), _BASE_PREDS, _N_AXIOMS),
    "Z": (61, ("a", "b", "c"), ("1", "+", "[", "]", "-"), _BASE_PREDS, _Z_AXIOMS),
    "Q": (86, ("a", "b", "c", "d"), ("1", "+", "[", "]", "-"), _BASE_PREDS, _Q_AXIOMS),
    "R": (124, tuple("abcdefghijkl"), ("1", "+", "[", "]", "-", "/", "T", "B", "_"),
          _BASE_PREDS + ("||",), _R_AXIOMS),
}


@lru_cache(maxsize=None)
def system(name: str, minimal: bool = False) -> SystemDef:
    """Build (and cache) one of the four systems.

    ``minimal`` drops PSI axioms that only one revision contains.
    """
    if name not in _SYSTEM_TABLE:
        raise UnknownSystem(f"unknown system {name!r}; expected one of {', '.join(SYSTEMS)}")
    start, vs, cs, ps, particular = _SYSTEM_TABLE[name]
    notation = tuple(_notation_block(name, start, vs, cs, ps))
    psi = tuple(a for a in PSI if not (minimal and REV1_ONLY in a.flags))
    prods, synced = [], []
    for a in particular:
        f = a.formula
        if isinstance(f, Atom) and f.pred == "->" and not a.premises:
            prods.extend(_rules_from(a))
    # pair the base/step sync lines into lockstep rules
    by_family: dict = {}
    for a in particular:
        if isinstance(a.formula, Sync):
            key = (a.formula.left.left[0], a.formula.right.left[0])
            by_family.setdefault(key, []).append(a)
    for (l, r), items in by_family.items():
        base, step = items
        left = ProductionRule(l, (base.formula.left.right, step.formula.left.right), base.id)
        right = ProductionRule(r, (base.formula.right.right, step.formula.right.right), base.id)
        synced.append(SyncedPair(left, right, (base.id, step.id)))
    index = {a.id: a for a in psi + notation + tuple(particular)}
    return SystemDef(name, vs, cs, ps, notation, tuple(particular), psi,
                     tuple(prods), tuple(synced), minimal, index)


def all_lines() -> list:
    """Every numbered line across the calculus, in rev1 order (211 entries)."""
    out = list(PHI_NOTATION) + list(PSI)
    for name in SYSTEMS:
        out.extend(system(name).lines)
    return sorted(out, key=lambda a: int(a.rev1.split(".")[1]))


def lookup(number: str, revision: int = 1) -> AxiomSchema:
    """Find a line by its equation number in the given revision."""
    for a in all_lines():
        if a.number(revision) == number:
            return a
    raise KeyError(f"no line numbered {number} in revision {revision}")


def manifest(name: str) -> str:
    return json.dumps(system(name).to_json(), indent=2, ensure_ascii=False)


# ---------------------------------------------------------------- closure

def _producer_fact(f) -> bool:
    return (isinstance(f, Atom) and f.pred == "->" and len(f.left) == 1
            and "|" not in f.right)


def _raw_producers(sys: SystemDef) -> set:
    out = set()
    for a in sys.particular:
        f = a.formula
        if not (isinstance(f, Atom) and f.pred == "->" and not a.premises):
            continue
        parts = alternation_split(f) if ("|" in f.left or "|" in f.right) else [f]
        out.update(p for p in parts if _producer_fact(p))
    return out


def _fact_key(f: Atom):
    return (len(f.left) + len(f.right), render(f))


def producer_closure(sys: SystemDef, depth: int, max_tokens: int = 24,
                     budget: int = DEFAULT_BUDGET) -> list:
    """Producer facts ``x -> t`` reachable by at most ``depth`` rewrite rounds.

    Depth 0 is the split grammar. Each further round rewrites one variable of
    a known right-hand side with one of its known alternatives, at any
    nonempty subset of its occurrences, mirroring the composition axiom and
    the multi-occurrence context schemas. Right-hand sides longer than
    ``max_tokens`` are dropped.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    facts = _raw_producers(sys)
    frontier = set(facts)
    work = 0
    for _ in range(depth):
        by_var: dict = {}
        for f in facts:
            by_var.setdefault(f.left[0], set()).add(f.right)
        new = set()
        for f in frontier | facts:
            rhs = f.right
            for v in set(rhs):
                if v not in by_var:
                    continue
                pos = [i for i, t in enumerate(rhs) if t == v]
                for alt in by_var[v]:
                    for mask in range(1, 1 << len(pos)):
                        work += 1
                        if work > budget:
                            raise BudgetExceeded(f"producer closure exceeded {budget} rewrites")
                        chosen = {pos[k] for k in range(len(pos)) if mask >> k & 1}
                        out = []
                        for i, t in enumerate(rhs):
                            out.extend(alt if i in chosen else (t,))
                        if len(out) > max_tokens:
                            continue
                        g = Atom("->", f.left, tuple(out))
                        if g not in facts:
                            new.add(g)
        if not new:
            break
        facts |= new
        frontier = new
    return sorted(facts, key=_fact_key)


def synced_instantiate(family, n: int, sys: SystemDef | None = None):
    """Operator runs at level ``n`` for a single family or a synced pair.

    ``family`` is one of ``"e"``, ``"f"``, ``"g"`` or a pair such as
    ``("h", "i")``. Single families return a string, pairs a tuple.
    """
    sys = sys or system("R")
    if n < 1:
        raise ValueError("level must be >= 1")
    if isinstance(family, str):
        return _unroll(sys.rule(family), n)
    key = tuple(family)
    for pair in sys.synced:
        if pair.family == key:
            return pair.level(n)
    raise KeyError(f"no synced pair {key}")


def symbols_of(axiom: AxiomSchema) -> set:
    """Literal object-level symbols used by an axiom."""
    out = set()
    for s in sides_of(axiom.formula):
        out.update(t for t in s if not isinstance(t, Metavar) and t != "|")
    return out
