"""Associative matching of axiom schemas against ground formulas.

A schema is a :mod:`numcalc.syntax` formula whose sides mix literal tokens
with metavariables. Matching is one-sided: the target formula is ground.
Every metavariable may bind any contiguous run of tokens, including the
empty run, subject to its tier:

* bar (``?a``): no predicate tokens, i.e. a string over V and C
* doublebar (``??a``): anything over V, C and P
* hat (``^a``): anything at all

Repeated metavariables must bind identical runs. With ``balanced=True``
bindings must also be bracket-balanced.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from .syntax import (
    PREDICATES, And, Atom, Bare, Iff, Implies, Member, Metavar, Not, Or,
    Subset, Sync, UnbalancedBracket, balanced, render_side,
)

DEFAULT_BUDGET = 10**6
_PRED = frozenset(PREDICATES)


class BudgetExceeded(RuntimeError):
    """Raised when a match explores more candidate cuts than allowed."""


class UnboundMetavar(KeyError):
    pass


class TierViolation(ValueError):
    pass


class Substitution(Mapping):
    """Immutable, hashable map from :class:`Metavar` to token tuples."""

    __slots__ = ("_items", "_map")

    def __init__(self, pairs=()):
        m = dict(pairs.items() if isinstance(pairs, Mapping) else pairs)
        self._map = {k: tuple(v) for k, v in m.items()}
        self._items = tuple(sorted(self._map.items(), key=lambda kv: (kv[0].base, kv[0].tier)))

    def __getitem__(self, key):
        return self._map[key]

    def __iter__(self):
        return (k for k, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __hash__(self):
        return hash(self._items)

    def __eq__(self, other):
        if isinstance(other, Substitution):
            return self._items == other._items
        return NotImplemented

    def sort_key(self):
        return tuple((str(k), v) for k, v in self._items)

    def __repr__(self):
        return "{" + " ".join(f"{k}={render_side(v)}" for k, v in self._items) + "}"

    def extend(self, more) -> "Substitution":
        d = dict(self._map)
        d.update(more)
        return Substitution(d)


def admissible(mv: Metavar, tokens, require_balanced: bool = False) -> bool:
    if mv.tier == "bar" and any(t in _PRED for t in tokens):
        return False
    if require_balanced and not balanced(tokens):
        return False
    return True


class _Search:
    def __init__(self, budget: int, require_balanced: bool):
        self.budget = budget
        self.cuts = 0
        self.require_balanced = require_balanced

    def tick(self):
        self.cuts += 1
        if self.cuts > self.budget:
            raise BudgetExceeded(f"more than {self.budget} candidate cuts")

    def seq(self, pat, toks, b: dict) -> Iterator[dict]:
        # minimum number of tokens the suffix pat[i:] needs, given b
        n = len(toks)
        need = [0] * (len(pat) + 1)
        for i in range(len(pat) - 1, -1, -1):
            item = pat[i]
            if isinstance(item, Metavar):
                need[i] = need[i + 1] + len(b.get(item, ()))
            else:
                need[i] = need[i + 1] + 1
        yield from self._seq(pat, 0, toks, 0, b, need, n)

    def _seq(self, pat, i, toks, j, b, need, n):
        if i == len(pat):
            if j == n:
                yield b
            return
        item = pat[i]
        if not isinstance(item, Metavar):
            if j < n and toks[j] == item:
                yield from self._seq(pat, i + 1, toks, j + 1, b, need, n)
            return
        if item in b:
            val = b[item]
            k = len(val)
            if toks[j:j + k] == val:
                yield from self._seq(pat, i + 1, toks, j + k, b, need, n)
            return
        # later occurrences of this metavariable are unbound in `need`, so the
        # bound below is loose but safe
        last = n - need[i + 1]
        bar = item.tier == "bar"
        nxt = pat[i + 1] if i + 1 < len(pat) else None
        anchor = nxt if nxt is not None and not isinstance(nxt, Metavar) else None
        for end in range(j, last + 1):
            if bar and end > j and toks[end - 1] in _PRED:
                break  # longer segments contain the same predicate
            if anchor is not None and (end >= n or toks[end] != anchor):
                continue
            self.tick()
            seg = toks[j:end]
            if self.require_balanced and not balanced(seg):
                continue
            b2 = dict(b)
            b2[item] = seg
            yield from self._seq(pat, i + 1, toks, end, b2, need, n)

    def formula(self, p, f, b: dict) -> Iterator[dict]:
        if type(p) is not type(f):
            return
        if isinstance(p, Atom):
            if p.pred != f.pred:
                return
            for b1 in self.seq(p.left, f.left, b):
                yield from self.seq(p.right, f.right, b1)
        elif isinstance(p, Bare):
            yield from self.seq(p.side, f.side, b)
        elif isinstance(p, Member):
            if p.cls == f.cls:
                yield from self.seq(p.side, f.side, b)
        elif isinstance(p, Subset):
            if p.braced != f.braced or len(p.targets) != len(f.targets):
                return
            yield from self._many([p.side, *p.targets], [f.side, *f.targets], b)
        elif isinstance(p, Sync):
            for b1 in self.formula(p.left, f.left, b):
                yield from self.formula(p.right, f.right, b1)
        elif isinstance(p, Not):
            yield from self.formula(p.arg, f.arg, b)
        elif isinstance(p, (And, Or)):
            if len(p.args) != len(f.args):
                return
            yield from self._many_f(list(p.args), list(f.args), b)
        elif isinstance(p, (Implies, Iff)):
            for b1 in self.formula(p.lhs, f.lhs, b):
                yield from self.formula(p.rhs, f.rhs, b1)

    def _many(self, pats, toks, b):
        if not pats:
            yield b
            return
        for b1 in self.seq(pats[0], toks[0], b):
            yield from self._many(pats[1:], toks[1:], b1)

    def _many_f(self, ps, fs, b):
        if not ps:
            yield b
            return
        for b1 in self.formula(ps[0], fs[0], b):
            yield from self._many_f(ps[1:], fs[1:], b1)


def iter_match(schema, formula, initial=None, budget: int = DEFAULT_BUDGET,
               balanced: bool = False, search: _Search | None = None):
    """Lazily yield binding dicts; shares the cut budget via ``search``."""
    s = search or _Search(budget, balanced)
    start = dict(initial) if initial else {}
    yield from s.formula(schema, formula, start)


def match(schema, formula, budget: int = DEFAULT_BUDGET, initial=None,
          balanced: bool = False) -> list:
    """All substitutions σ with ``apply(schema, σ) == formula``.

    Returned deduplicated and in canonical (lexicographic) order. ``initial``
    pre-binds metavariables, which is how elaboration hints are applied.
    Metavariables in ``initial`` that do not occur in the schema are kept.
    """
    seen = {Substitution(b) for b in iter_match(schema, formula, initial, budget, balanced)}
    return sorted(seen, key=Substitution.sort_key)


def _apply_side(side, sigma):
    out = []
    for x in side:
        if isinstance(x, Metavar):
            if x not in sigma:
                raise UnboundMetavar(str(x))
            val = sigma[x]
            if not admissible(x, val):
                raise TierViolation(f"{x} cannot bind {render_side(val)!r}")
            out.extend(val)
        else:
            out.append(x)
    return tuple(out)


def apply(schema, sigma, check_balance: bool = True):
    """Instantiate every metavariable of ``schema`` from ``sigma``."""
    def side(s):
        res = _apply_side(s, sigma)
        if check_balance and not balanced(res):
            raise UnbalancedBracket(f"instance side {render_side(res)!r} is unbalanced", 0)
        return res

    def go(f):
        if isinstance(f, Atom):
            return Atom(f.pred, side(f.left), side(f.right))
        if isinstance(f, Bare):
            return Bare(side(f.side))
        if isinstance(f, Member):
            return Member(side(f.side), f.cls)
        if isinstance(f, Subset):
            return Subset(side(f.side), tuple(side(t) for t in f.targets), f.braced)
        if isinstance(f, Sync):
            return Sync(go(f.left), go(f.right))
        if isinstance(f, Not):
            return Not(go(f.arg))
        if isinstance(f, And):
            return And(tuple(go(a) for a in f.args))
        if isinstance(f, Or):
            return Or(tuple(go(a) for a in f.args))
        if isinstance(f, Implies):
            return Implies(go(f.lhs), go(f.rhs))
        if isinstance(f, Iff):
            return Iff(go(f.lhs), go(f.rhs))
        raise TypeError(f)

    return go(schema)


def apply_partial(schema, sigma):
    """Like :func:`apply` but leaves unbound metavariables in place."""
    def side(s):
        out = []
        for x in s:
            if isinstance(x, Metavar) and x in sigma:
                out.extend(sigma[x])
            else:
                out.append(x)
        return tuple(out)

    def go(f):
        if isinstance(f, Atom):
            return Atom(f.pred, side(f.left), side(f.right))
        if isinstance(f, (Bare,)):
            return Bare(side(f.side))
        if isinstance(f, Member):
            return Member(side(f.side), f.cls)
        if isinstance(f, Subset):
            return Subset(side(f.side), tuple(side(t) for t in f.targets), f.braced)
        if isinstance(f, Sync):
            return Sync(go(f.left), go(f.right))
        if isinstance(f, Not):
            return Not(go(f.arg))
        if isinstance(f, (And, Or)):
            return type(f)(tuple(go(a) for a in f.args))
        return type(f)(go(f.lhs), go(f.rhs))

    return go(schema)


def subset(t, u) -> bool:
    """True iff ``t`` occurs as a contiguous run of ``u`` (eps is in everything)."""
    t = tuple(getattr(t, "tokens", t))
    u = tuple(getattr(u, "tokens", u))
    k = len(t)
    if k == 0:
        return True
    return any(u[i:i + k] == t for i in range(len(u) - k + 1))


@dataclass(frozen=True)
class NotSubset:
    """Side condition ``not (var subset {targets})``."""

    var: Metavar
    targets: tuple

    def holds(self, sigma, alphabet=None) -> bool:
        return check_side(sigma, self)

    def __str__(self):
        return f"not ({self.var} subset {{{','.join(str(t) for t in self.targets)}}})"


@dataclass(frozen=True)
class InClass:
    """Side condition ``(var in CLASS)``, decided by token membership."""

    var: Metavar
    cls: str

    def holds(self, sigma, alphabet=None) -> bool:
        from .syntax import member_of
        if self.var not in sigma:
            raise UnboundMetavar(str(self.var))
        return member_of(sigma[self.var], self.cls, alphabet)

    def __str__(self):
        return f"({self.var} in {self.cls})"


def check_side(sigma, sc: NotSubset) -> bool:
    """True iff the binding of ``sc.var`` is a run of none of the targets."""
    for mv in (sc.var, *sc.targets):
        if mv not in sigma:
            raise UnboundMetavar(str(mv))
    needle = sigma[sc.var]
    return not any(subset(needle, sigma[t]) for t in sc.targets)
