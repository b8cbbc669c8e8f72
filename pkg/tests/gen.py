"""Random schema/formula pairs for the matcher tests."""
from __future__ import annotations

import random

from numcalc.syntax import And, Atom, Metavar

TOKENS = list("1+-/[]ab")
PREDS = ["<", "=", "->"]
TIERS = ["bar", "bar", "doublebar", "hat"]


def ground_side(rng: random.Random, n: int) -> tuple:
    return tuple(rng.choice(TOKENS) for _ in range(n))


def pattern_side(rng: random.Random, names, n_lit: int, max_mv: int = 4) -> tuple:
    out = list(ground_side(rng, n_lit))
    for _ in range(rng.randint(0, max_mv)):
        out.insert(rng.randint(0, len(out)), rng.choice(names))
    return tuple(out)


def binding(rng: random.Random, mv: Metavar) -> tuple:
    run = list(ground_side(rng, rng.choice([0, 1, 1, 2, 3])))
    if mv.tier != "bar" and run and rng.random() < 0.2:
        run[rng.randrange(len(run))] = "<"
    return tuple(run)


def _inst(side, sigma):
    out = []
    for x in side:
        out.extend(sigma[x] if isinstance(x, Metavar) else (x,))
    return tuple(out)


def pair(rng: random.Random, max_tokens: int = 30):
    """A (schema, formula) pair whose formula has at most ``max_tokens`` side tokens.

    Most formulas are instances of the schema; about a fifth are perturbed
    by one token so that matching usually fails.
    """
    while True:
        names = [Metavar(c, rng.choice(TIERS)) for c in "abc"[: rng.randint(1, 3)]]
        conj = rng.choice([1, 1, 2])
        lit = max(1, max_tokens // (4 * conj))
        pats = [Atom(rng.choice(PREDS), pattern_side(rng, names, rng.randint(0, lit)),
                     pattern_side(rng, names, rng.randint(0, lit))) for _ in range(conj)]
        sigma = {m: binding(rng, m) for m in names}
        atoms = [Atom(a.pred, _inst(a.left, sigma), _inst(a.right, sigma)) for a in pats]
        if sum(len(a.left) + len(a.right) for a in atoms) > max_tokens:
            continue
        if rng.random() < 0.2:
            a = atoms[0]
            toks = list(a.left + a.right)
            if toks:
                toks[rng.randrange(len(toks))] = rng.choice(TOKENS)
            atoms[0] = Atom(a.pred, tuple(toks[:len(a.left)]), tuple(toks[len(a.left):]))
        f = atoms[0] if conj == 1 else And(tuple(atoms))
        p = pats[0] if conj == 1 else And(tuple(pats))
        return p, f


def int_term(n: int) -> str:
    """A number term for the integer ``n``, built from ones."""
    if n == 1:
        return "1"
    if n == 0:
        return "[1-1]"
    if n < 0:
        return f"[[1-1]-{int_term(-n)}]"
    return "[" + "+".join("1" * n) + "]"


def rat_term(x) -> str:
    """A number term for the rational ``x``."""
    from fractions import Fraction

    x = Fraction(x)
    if x.denominator == 1:
        return int_term(x.numerator)
    return f"[{int_term(x.numerator)}--{int_term(x.denominator)}]"
