"""Random valid axiom uses and conclusion mutations for soundness runs.

:func:`synthesize` instantiates a schema with random ground bindings and
returns the premise instances together with the step claiming the
conclusion. :func:`mutate` perturbs one token of a formula. The checker
should accept the former and reject the latter, except when the mutant
happens to be another valid instance (a collision).
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .calculus import SystemDef, system
from .prover import DerivationStep, Verdict, check_step
from .schema import Substitution, TierViolation, apply
from .syntax import (
    And, Atom, Bare, Iff, Implies, Member, Not, Or, Subset, Sync, UnbalancedBracket,
    balanced, metavars_of,
)

__all__ = ["Sample", "binding_pool", "eligible_axioms", "synthesize", "mutate", "map_sides",
           "soundness_run"]


@dataclass(frozen=True)
class Sample:
    axiom: str
    premises: tuple
    conclusion: object
    sigma: Substitution

    def step(self, formula=None) -> DerivationStep:
        n = len(self.premises)
        return DerivationStep(n + 1, "S", self.conclusion if formula is None else formula,
                              self.axiom, tuple(range(1, n + 1)))

    def check(self, sys: SystemDef, formula=None) -> Verdict:
        return check_step(sys, list(self.premises), self.step(formula))


def binding_pool(sys: SystemDef, max_tokens: int = 5) -> list:
    """Short ground runs: number terms, single variables, operator words, eps."""
    from .prover import number_terms

    pool = [()] + [tuple(t) for t in number_terms(sys, max_tokens)]
    pool += [(v,) for v in sys.variables]
    pool += [tuple(w) for w in sys.operator_words(2)] or [("+",)]
    return pool


def eligible_axioms(sys: SystemDef) -> list:
    return [a for a in sys.axioms if metavars_of(a.conclusion)]


def synthesize(sys: SystemDef | str, rng: random.Random, attempts: int = 200) -> Sample:
    if isinstance(sys, str):
        sys = system(sys)
    pool = binding_pool(sys)
    axioms = eligible_axioms(sys)
    for _ in range(attempts):
        ax = rng.choice(axioms)
        sigma = Substitution({m: rng.choice(pool) for m in sorted(metavars_of(ax.formula), key=str)})
        try:
            prem = tuple(apply(p, sigma) for p in ax.premises)
            concl = apply(ax.conclusion, sigma)
        except (TierViolation, UnbalancedBracket):
            continue
        if not all(sc.holds(sigma, sys.alphabet) for sc in ax.sides):
            continue
        return Sample(ax.id, prem, concl, sigma)
    raise RuntimeError("no admissible instance found")


def map_sides(f, fn):
    """Rebuild ``f`` with every token side replaced by ``fn(index, side)``."""
    counter = [0]

    def side(s):
        i = counter[0]
        counter[0] += 1
        return fn(i, s)

    def go(g):
        if isinstance(g, Atom):
            return Atom(g.pred, side(g.left), side(g.right))
        if isinstance(g, Bare):
            return Bare(side(g.side))
        if isinstance(g, Member):
            return Member(side(g.side), g.cls)
        if isinstance(g, Subset):
            return Subset(side(g.side), tuple(side(t) for t in g.targets), g.braced)
        if isinstance(g, Sync):
            return Sync(go(g.left), go(g.right))
        if isinstance(g, Not):
            return Not(go(g.arg))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(go(a) for a in g.args))
        if isinstance(g, (Implies, Iff)):
            return type(g)(go(g.lhs), go(g.rhs))
        raise TypeError(g)

    return go(f)


def _count_sides(f) -> int:
    n = [0]
    map_sides(f, lambda i, s: n.__setitem__(0, n[0] + 1) or s)
    return n[0]


def mutate(f, rng: random.Random, symbols, attempts: int = 100):
    """One token replaced, inserted or deleted in one side; always balanced."""
    total = _count_sides(f)
    for _ in range(attempts):
        target = rng.randrange(total)
        kind = rng.choice(("replace", "insert", "delete"))
        sym = rng.choice(symbols)

        def edit(i, s):
            if i != target:
                return s
            s = list(s)
            if kind == "insert":
                s.insert(rng.randint(0, len(s)), sym)
            elif not s:
                return None
            elif kind == "delete":
                del s[rng.randrange(len(s))]
            else:
                s[rng.randrange(len(s))] = sym
            return tuple(s)

        try:
            g = map_sides(f, edit)
        except TypeError:
            continue
        sides_ok = []
        map_sides(g, lambda i, s: sides_ok.append(s is not None and balanced(s)) or s)
        if all(sides_ok) and g != f:
            return g
    return None


def soundness_run(name: str, n: int, seed: int, mutations: int = 5, collision=None) -> dict:
    """Counts for ``n`` synthesized steps and ``mutations`` mutants of each.

    ``collision(sample, mutant) -> bool`` marks mutants that are valid
    instances anyway; they are excluded from the rejection rate.
    """
    sys = system(name)
    rng = random.Random(seed)
    symbols = list(sys.variables + sys.constants)
    accepted = rejected = mutants = collisions = 0
    for _ in range(n):
        s = synthesize(sys, rng)
        accepted += s.check(sys).valid
        for _ in range(mutations):
            m = mutate(s.conclusion, rng, symbols)
            if m is None:
                continue
            if collision is not None and collision(s, m):
                collisions += 1
                continue
            mutants += 1
            rejected += not s.check(sys, m).valid
    return {"system": name, "seed": seed, "steps": n, "accepted": accepted,
            "mutants": mutants, "rejected": rejected, "collisions": collisions}
