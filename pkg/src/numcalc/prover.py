"""Derivation checking, bounded forward search and number enumeration.

Proof files are line oriented::

    system: N
    step A3: (a < 1+a) => (1 < 1+1) ; by PSI.ctx-lt-1occ [A1] { ?b=a ?d=1+ } ; cites N.order-seed PSI.ctx-lt-1occ
    lemma B7.1: ([[1-1]+1] = 1) ; by R.sub-add-cancel [A6]

A step whose formula is ``P => C`` with ground ``P`` claims ``C`` and adds
``P`` to its premise pool; ``P`` itself must already be known (a ground
axiom or an earlier line). References are earlier labels, 1-based ordinals
or ids of ground axioms. ``cites`` records the axioms the source cites; when
present, the step and the lemmas just before it may only use those axioms
plus the substitution-of-equals schemas in :data:`IMPLICIT`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .calculus import SystemDef, system
from .schema import (
    BudgetExceeded, InClass, NotSubset, Substitution, _Search, apply, apply_partial,
)
from .syntax import (
    And, Atom, Bare, Iff, Implies, Metavar, Or, ParseError, Sync, Term,
    is_ground, metavars_of, parse_formula, parse_side, render, sides_of,
)

STEP_BUDGET = 200_000
MATCH_CAP = 1000
IMPLICIT = frozenset({"PSI.lt-eq-right", "PSI.lt-eq-left", "PSI.eq-subst-right"})
PRODUCER_AXIOMS = ("PSI.alt-split-right", "PSI.alt-split-left", "PSI.prod-compose")


class UnknownAxiom(KeyError):
    pass


class MatchBudgetExceeded(BudgetExceeded):
    pass


class ProofSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# ---------------------------------------------------------------- data

@dataclass(frozen=True)
class DerivationStep:
    index: int
    label: str
    formula: object
    axiom: str
    refs: tuple = ()          # ints (ordinals) or axiom ids
    hint: Substitution | None = None
    cites: tuple | None = None
    lemma: bool = False
    line: int = 0

    @property
    def antecedent(self):
        f = self.formula
        if isinstance(f, Implies) and is_ground(f.lhs):
            return f.lhs
        return None

    @property
    def claim(self):
        a = self.antecedent
        return self.formula.rhs if a is not None else self.formula


@dataclass
class Proof:
    system: str
    steps: list
    givens: tuple = ()

    def render(self) -> str:
        out = [f"system: {self.system}"]
        out += [f"given: {render(g)}" for g in self.givens]
        labels = {s.index: s.label for s in self.steps}
        for s in self.steps:
            refs = ", ".join(labels[r] if isinstance(r, int) else r for r in s.refs)
            hint = f" {{ {_hint_text(s.hint)} }}" if s.hint else ""
            kw = "lemma" if s.lemma else "step"
            refs = f" [{refs}]" if refs else ""
            out.append(f"{kw} {s.label}: {render(s.formula)} ; by {s.axiom}{refs}{hint}")
        return "\n".join(out) + "\n"


def _hint_text(h: Substitution) -> str:
    from .syntax import render_side
    return " ".join(f"{k}={render_side(v) if v else 'eps'}" for k, v in h.items())


@dataclass(frozen=True)
class Verdict:
    status: str                 # "valid" | "invalid"
    reason: str = ""
    matches: int = 0
    instance: str = ""
    sigma: str = ""

    @property
    def valid(self) -> bool:
        return self.status == "valid"

    @property
    def ambiguous(self) -> bool:
        return self.valid and self.matches > 1

    def __str__(self):
        if self.valid:
            return "valid" if self.matches <= 1 else f"valid ({self.matches} matches)"
        return f"invalid: {self.reason}"


# ---------------------------------------------------------------- parsing

_STEP_RE = re.compile(r"^(step|lemma)\s+([A-Za-z0-9_.\-]+)\s*:\s*(.*)$")
_JUST_RE = re.compile(
    r"^by\s+(\S+)\s*(\[[^\]]*\])?\s*(\{[^}]*\})?\s*(?:;\s*cites\s*(.*))?$")


def parse_hint(text: str) -> Substitution:
    """Parse ``?a=eps ?b=a ?d=[1+`` into a (possibly unbalanced) substitution."""
    pairs = {}
    for item in text.split():
        if "=" not in item:
            raise ValueError(f"bad hint item {item!r}")
        key, val = item.split("=", 1)
        tier = "doublebar" if key.startswith("??") else "hat" if key.startswith("^") else "bar"
        base = key.lstrip("?^")
        if len(base) != 1 or not key.startswith(("?", "^")):
            raise ValueError(f"bad metavariable {key!r}")
        pairs[Metavar(base, tier)] = () if val == "eps" else parse_side(val, allow_meta=False, check_balance=False)
    return Substitution(pairs)


def parse_proof(text: str) -> Proof:
    sysname = None
    steps: list = []
    givens = []
    labels: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("system:"):
            sysname = line.split(":", 1)[1].strip()
            continue
        if line.startswith("given:"):
            try:
                givens.append(parse_formula(line.split(":", 1)[1].strip(), allow_meta=False))
            except ParseError as e:
                raise ProofSyntaxError(str(e), lineno) from e
            continue
        m = _STEP_RE.match(line)
        if not m:
            raise ProofSyntaxError(f"unrecognised line {raw.strip()!r}", lineno)
        kind, label, rest = m.groups()
        if label in labels:
            raise ProofSyntaxError(f"duplicate label {label}", lineno)
        parts = rest.split(";", 1)
        if len(parts) != 2:
            raise ProofSyntaxError("missing '; by AXIOM' justification", lineno)
        ftext, just = parts[0].strip(), parts[1].strip()
        jm = _JUST_RE.match(just)
        if not jm:
            raise ProofSyntaxError(f"bad justification {just!r}", lineno)
        axiom, refs_t, hint_t, cites_t = jm.groups()
        try:
            formula = parse_formula(ftext, allow_meta=False)
            hint = parse_hint(hint_t[1:-1]) if hint_t else None
        except (ParseError, ValueError) as e:
            raise ProofSyntaxError(str(e), lineno) from e
        refs = []
        for r in (refs_t[1:-1].split(",") if refs_t else []):
            r = r.strip()
            if not r:
                continue
            if r.isdigit():
                refs.append(int(r))
            elif r in labels:
                refs.append(labels[r])
            elif "." in r and r.split(".")[0] in ("PSI", "N", "Z", "Q", "R"):
                refs.append(r)
            else:
                raise ProofSyntaxError(f"unknown reference {r!r}", lineno)
        idx = len(steps) + 1
        labels[label] = idx
        cites = tuple(cites_t.replace(",", " ").split()) if cites_t is not None else None
        steps.append(DerivationStep(idx, label, formula, axiom, tuple(refs), hint,
                                    cites, kind == "lemma", lineno))
    if sysname is None:
        raise ProofSyntaxError("missing 'system:' header", 1)
    if not steps:
        raise ProofSyntaxError("proof has no steps", 1)
    return Proof(sysname, steps, tuple(givens))


def load_proof(path) -> Proof:
    with open(path, encoding="utf-8") as fh:
        return parse_proof(fh.read())


# ---------------------------------------------------------------- matching

def _conjuncts(f) -> list:
    return list(f.args) if isinstance(f, And) else [f]


def _stated(f) -> list:
    """Facts a stated line contributes: both sides of a ground ``P => C``."""
    if isinstance(f, Implies) and is_ground(f.lhs):
        return _conjuncts(f.lhs) + _conjuncts(f.rhs)
    return _conjuncts(f)


def _pool_of(facts) -> list:
    out, seen = [], set()
    for f in facts:
        for g in _stated(f):
            if g not in seen:
                seen.add(g)
                out.append(g)
    return out


def _unbound(p, b) -> int:
    return len({m for m in metavars_of(p) if m not in b})


def _literal_weight(p) -> int:
    return sum(1 for s in sides_of(p) for t in s if not isinstance(t, Metavar))


def _is_guide(p) -> bool:
    return isinstance(p, Sync) or (isinstance(p, Atom) and p.pred == "->")


def _directions(ax):
    yield ax.premises, ax.sides, ax.conclusion
    if isinstance(ax.formula, Iff):
        yield (ax.formula.rhs,), (), ax.formula.lhs


class _Solver:
    """Backtracking search for substitutions validating one axiom use."""

    def __init__(self, pool, budget, alphabet, balanced=False, prune=None):
        self.pool = pool
        self.prune = prune  # optional predicate on partial bindings
        self.search = _Search(budget, balanced)
        self.alphabet = alphabet
        self.fail = None  # (depth, premise, binding) of the deepest failure

    def premises(self, prem, b, depth=0):
        if not prem:
            yield b, ()
            return
        i = min(range(len(prem)), key=lambda k: (_unbound(prem[k], b), -_literal_weight(prem[k]), k))
        p, rest = prem[i], prem[:i] + prem[i + 1:]
        hit = False
        for fact in self.pool:
            if type(fact) is not type(p):
                continue
            for b2 in self.search.formula(p, fact, b):
                hit = True
                if self.prune is not None and not self.prune(b2):
                    continue
                for b3, used in self.premises(rest, b2, depth + 1):
                    yield b3, (fact,) + used
        if not hit and (self.fail is None or depth > self.fail[0]):
            self.fail = (depth, p, dict(b))

    def sides_ok(self, sides, b):
        for sc in sides:
            if isinstance(sc, NotSubset) and not sc.holds(b):
                return sc
            if isinstance(sc, InClass) and not sc.holds(b, self.alphabet):
                return sc
        return None


def _solve(ax, claim, pool, hint, budget, alphabet, cap=MATCH_CAP):
    """Return (solutions, diagnostics). Solutions are (Substitution, used facts)."""
    solver = _Solver(pool, budget, alphabet)
    hint = dict(hint) if hint else {}
    sols: dict = {}
    concl_hits = []
    side_fail = None
    shown = hint
    for prem, sides, concl in _directions(ax):
        targets = [concl] + ([a for a in concl.args] if isinstance(concl, And) else [])
        # production premises bind the replaced word cheaply, so they go
        # before the claim; otherwise context laws explode combinatorially
        guides = [p for p in prem if _is_guide(p)]
        others = [p for p in prem if not _is_guide(p)]
        seeds = list(solver.premises(guides, hint)) if guides else [(hint, ())]
        if guides and seeds and not concl_hits:
            shown = seeds[0][0]
        for b0, used0 in seeds:
            for tgt in targets:
                for b in solver.search.formula(tgt, claim, b0):
                    concl_hits.append(b)
                    for b2, used in solver.premises(others, b, len(guides)):
                        bad = solver.sides_ok(sides, b2)
                        if bad is not None:
                            if side_fail is None:
                                side_fail = (bad, dict(b2))
                            continue
                        s = Substitution({k: v for k, v in b2.items()})
                        if s not in sols:
                            sols[s] = used0 + used
                        if len(sols) >= cap:
                            return sols, (concl_hits, solver.fail, side_fail, shown)
        if guides and not seeds:
            concl_hits.append(None)  # the claim was never tried
    return sols, (concl_hits, solver.fail, side_fail, shown)


def _show_instance(ax, b) -> str:
    return render(apply_partial(ax.formula, b))


def _known(sys: SystemDef) -> set:
    out = set()
    for a in sys.particular:
        if a.is_fact:
            out.update(_conjuncts(a.conclusion))
    return out


def check_step(sys: SystemDef, prior, step: DerivationStep, use_hints: bool = True,
               budget: int = STEP_BUDGET, givens=()) -> Verdict:
    """Check one step against the formulas stated before it.

    ``prior`` is the list of earlier formulas (index ``i`` is ordinal ``i+1``).
    With no references the whole prior list is the premise pool.
    """
    if not sys.has(step.axiom) and step.axiom != "given":
        raise UnknownAxiom(step.axiom)
    if step.axiom == "given":
        ok = step.formula in givens
        return Verdict("valid", matches=1) if ok else Verdict("invalid", "not among the givens")
    ax = sys.axiom(step.axiom)
    if ax.kind != "axiom":
        raise UnknownAxiom(f"{step.axiom} is a notation line")
    facts = []
    for r in step.refs:
        if isinstance(r, int):
            if not 1 <= r < step.index or r > len(prior):
                return Verdict("invalid", f"reference {r} is not an earlier line")
            facts.append(prior[r - 1])
        else:
            if not sys.has(r) or not sys.axiom(r).is_fact:
                return Verdict("invalid", f"reference {r} is not a ground axiom of {sys.name}")
            facts.append(sys.axiom(r).conclusion)
    if not step.refs:
        facts.extend(prior)
    ante = step.antecedent
    if ante is not None:
        known = _known(sys) | set(_pool_of(prior))
        missing = [g for g in _conjuncts(ante) if g not in known]
        if missing:
            return Verdict("invalid", f"antecedent {render(missing[0])} is not known")
        facts.append(ante)
    pool = _pool_of(facts)
    hint = step.hint if (use_hints and step.hint) else None
    try:
        sols, (hits, pfail, sfail, shown_b) = _solve(ax, step.claim, pool, hint, budget, sys.alphabet)
    except BudgetExceeded as e:
        raise MatchBudgetExceeded(str(e)) from e
    if sols:
        first = min(sols, key=Substitution.sort_key)
        return Verdict("valid", matches=len(sols), instance=_show_instance(ax, first),
                       sigma=repr(first))
    if not hits:
        b = dict(shown_b) if shown_b else {}
        return Verdict("invalid", f"claim does not match conclusion {render(apply_partial(ax.conclusion, b))}",
                       instance=_show_instance(ax, b))
    if pfail is not None:
        _, p, b = pfail
        return Verdict("invalid", f"no cited fact matches premise {render(apply_partial(p, b))}",
                       instance=_show_instance(ax, b))
    if sfail is not None:
        sc, b = sfail
        return Verdict("invalid", f"side condition {sc} fails",
                       instance=_show_instance(ax, b))
    return Verdict("invalid", "no substitution validates the step")


# ---------------------------------------------------------------- reports

@dataclass(frozen=True)
class StepResult:
    step: DerivationStep
    verdict: Verdict

    @property
    def label(self):
        return self.step.label


@dataclass
class CheckReport:
    system: str
    results: list
    hints: bool = True

    @property
    def valid(self) -> bool:
        return all(r.verdict.valid for r in self.results)

    @property
    def steps(self):
        return [r for r in self.results if not r.step.lemma]

    @property
    def lemmas(self):
        return [r for r in self.results if r.step.lemma]

    def invalid(self):
        return [r for r in self.results if not r.verdict.valid]

    def _groups(self, rows):
        counts: dict = {}
        for r in rows:
            g = re.match(r"[A-Za-z]*", r.step.label).group(0) or "#"
            counts[g] = counts.get(g, 0) + 1
        return counts

    def summary(self) -> str:
        total = self._groups(self.steps)
        good = self._groups([r for r in self.steps if r.verdict.valid])
        tot = "+".join(str(total[g]) for g in total)
        lem = self.lemmas
        tail = ""
        if lem:
            ok = sum(r.verdict.valid for r in lem)
            tail = f", {ok}/{len(lem)} lemmas valid"
        if all(r.verdict.valid for r in self.steps):
            return f"{tot} steps valid{tail}"
        got = "+".join(str(good.get(g, 0)) for g in total)
        return f"{got} of {tot} steps valid{tail}"

    def line(self, r: StepResult) -> str:
        kind = "lemma " if r.step.lemma else ""
        return f"{kind}{r.step.label}: {r.verdict} [{r.step.axiom}]"

    def render_text(self, verbose: bool = False) -> str:
        rows = self.results if verbose else self.invalid()
        return "\n".join([self.line(r) for r in rows] + [self.summary()]) + "\n"

    def to_json(self) -> dict:
        return {
            "version": 1,
            "system": self.system,
            "valid": self.valid,
            "summary": self.summary(),
            "steps": [{
                "label": r.step.label, "lemma": r.step.lemma, "axiom": r.step.axiom,
                "formula": render(r.step.formula), "status": r.verdict.status,
                "matches": r.verdict.matches, "reason": r.verdict.reason,
                "instance": r.verdict.instance, "sigma": r.verdict.sigma,
            } for r in self.results],
        }

    def render_errata(self) -> str:
        """Markdown list of failing lines, stable across runs."""
        out = [f"Checker summary: {self.summary()}.", ""]
        for r in self.invalid():
            kind = "lemma " if r.step.lemma else ""
            out.append(f"- {kind}**{r.step.label}** `{render(r.step.formula)}` by `{r.step.axiom}`")
            out.append(f"  - verdict: {r.verdict.reason}")
            if r.verdict.instance:
                out.append(f"  - axiom instance: `{r.verdict.instance}`")
        return "\n".join(out) + "\n"


def _policy_violation(step, recent_lemmas):
    if step.cites is None:
        return None
    allowed = set(step.cites) | IMPLICIT
    for s in (*recent_lemmas, step):
        if s.axiom not in allowed:
            return f"uses {s.axiom}, which the source does not cite here" + (
                f" (in lemma {s.label})" if s is not step else "")
    return None


def check_proof(proof: Proof, use_hints: bool = True, budget: int = STEP_BUDGET,
                minimal: bool = False) -> CheckReport:
    sys = system(proof.system, minimal)
    prior: list = []
    results = []
    pending: list = []
    lemma_ok: dict = {}
    for step in proof.steps:
        try:
            v = check_step(sys, prior, step, use_hints, budget, proof.givens)
        except UnknownAxiom as e:
            v = Verdict("invalid", f"unknown axiom {e.args[0]}")
        except MatchBudgetExceeded:
            v = Verdict("invalid", "match budget exceeded")
        if step.lemma:
            pending.append(step)
            lemma_ok[step.label] = v.valid
        else:
            bad = _policy_violation(step, pending)
            if bad and v.valid:
                v = Verdict("invalid", bad, v.matches, v.instance)
            broken = [s.label for s in pending if not lemma_ok[s.label]]
            if broken and v.valid:
                v = Verdict("invalid", f"rests on invalid lemma {broken[0]}", v.matches, v.instance)
            pending = []
        results.append(StepResult(step, v))
        prior.append(step.formula)
    return CheckReport(proof.system, results, use_hints)


# ---------------------------------------------------------------- search

DEFAULT_SEARCH_BUDGET = 2_000_000


@dataclass
class SearchResult:
    facts: list
    complete: bool
    provenance: dict = field(repr=False, default_factory=dict)
    system: str = ""

    def __contains__(self, f):
        if isinstance(f, str):
            f = parse_formula(f, allow_meta=False)
        return f in self.provenance

    def __iter__(self):
        return iter(self.facts)

    def __len__(self):
        return len(self.facts)

    def derivation(self, target) -> Proof:
        """Extract a checkable proof of ``target`` from the provenance."""
        if isinstance(target, str):
            target = parse_formula(target, allow_meta=False)
        if target not in self.provenance:
            raise KeyError(render(target))
        order: list = []
        seen: set = set()

        def visit(f):
            if f in seen:
                return
            seen.add(f)
            _, used, _ = self.provenance[f]
            for g in used:
                visit(g)
            order.append(f)

        visit(target)
        steps, index, givens = [], {}, []
        for n, f in enumerate(order, 1):
            aid, used, sigma = self.provenance[f]
            index[f] = n
            if aid == "given":
                givens.append(f)
            refs = tuple(index[g] for g in used)
            hint = Substitution(sigma) if sigma else None
            steps.append(DerivationStep(n, f"S{n}", f, aid, refs, hint))
        return Proof(self.system, steps, tuple(givens))


def _fact_key(f):
    return (sum(len(s) for s in sides_of(f)), render(f))


def _usable(ax) -> bool:
    if ax.kind != "axiom" or not ax.premises:
        return False
    if isinstance(ax.formula, Iff) or isinstance(ax.conclusion, Or):
        return False
    covered = set().union(*(metavars_of(p) for p in ax.premises))
    return metavars_of(ax.conclusion) <= covered


def _size_ok(f, max_tokens):
    return all(len(s) <= max_tokens for s in sides_of(f))


def _seeds(sys: SystemDef) -> list:
    out = []
    for a in sys.particular:
        if a.is_fact:
            out.append((a.conclusion, a.id))
    return out


def _terminal(f, variables) -> bool:
    """False for a production whose right side still contains a variable."""
    if isinstance(f, Atom) and f.pred == "->":
        return not any(t in variables for t in f.right)
    return True


def _size_bound(concl, max_tokens):
    """Predicate rejecting bindings that already make every conjunct too long."""
    shapes = [sides_of(g) for g in _conjuncts(concl)]

    def fits(b):
        for sides in shapes:
            if all(sum(len(b.get(t, ())) if isinstance(t, Metavar) else 1 for t in side)
                   <= max_tokens for side in sides):
                return True
        return False
    return fits


def _chain(sys, axioms, facts, prov, rounds, max_tokens, budget_box, alphabet,
           terminal_only=False):
    """Forward chaining rounds over ``axioms``; mutates ``facts`` and ``prov``.

    Returns False when the budget ran out.
    """
    variables = frozenset(sys.variables)
    fresh = set(facts)  # semi-naive: a combination must use a fact from last round
    for _ in range(rounds):
        pool = sorted(facts, key=_fact_key)
        if terminal_only:
            pool = [f for f in pool if _terminal(f, variables)]
        new: dict = {}
        for ax in axioms:
            solver = _Solver(pool, budget_box[0], alphabet,
                             prune=_size_bound(ax.conclusion, max_tokens))
            exhausted = False
            try:
                for b, used in solver.premises(list(ax.premises), {}):
                    if not any(u in fresh for u in used):
                        continue
                    if solver.sides_ok(ax.sides, b) is not None:
                        continue
                    try:
                        concl = apply(ax.conclusion, b, check_balance=True)
                    except (ParseError, KeyError, ValueError):
                        continue
                    for g in _conjuncts(concl):
                        if g in facts or g in new or not _size_ok(g, max_tokens):
                            continue
                        if isinstance(g, Or) or not is_ground(g):
                            continue
                        new[g] = (ax.id, used, Substitution(b))
            except BudgetExceeded:
                exhausted = True
            finally:
                budget_box[0] -= solver.search.cuts
            if exhausted or budget_box[0] <= 0:
                for g, p in new.items():
                    facts.add(g)
                    prov[g] = p
                return False
        if not new:
            return True
        for g, p in new.items():
            facts.add(g)
            prov[g] = p
        fresh = set(new)
    return True


def search(sys: SystemDef, seeds=None, depth: int = 3, budget: int = DEFAULT_SEARCH_BUDGET,
           max_tokens: int = 12, producer_tokens: int = 9) -> SearchResult:
    """Bounded forward chaining over PSI and the system's axioms.

    Depth 0 returns the seeds. For depth ``d >= 1`` the producer axioms
    (alternation split and composition) are first saturated for ``d``
    rounds with right-hand sides of at most ``producer_tokens`` tokens; then
    ``d`` rounds of the remaining axioms run over the result, drawing
    production premises only from terminal productions. A round fires
    every applicable axiom instance once. Whether the budget sufficed is
    reported in ``complete``.
    """
    if isinstance(sys, str):
        sys = system(sys)
    if seeds is None:
        start = _seeds(sys)
    else:
        known = {a.conclusion: a.id for a in sys.particular if a.is_fact}
        start = []
        for s in seeds:
            f = parse_formula(s, allow_meta=False) if isinstance(s, str) else s
            start.append((f, known.get(f, "given")))
    facts = set()
    prov: dict = {}
    for f, aid in start:
        if f not in prov:
            facts.add(f)
            prov[f] = (aid, (), None)
    box = [budget]
    complete = True
    if depth > 0:
        prod = [sys.axiom(a) for a in PRODUCER_AXIOMS]
        complete = _chain(sys, prod, facts, prov, depth, producer_tokens, box, sys.alphabet)
        if complete:
            logic = [a for a in sys.axioms if _usable(a) and a.id not in PRODUCER_AXIOMS]
            complete = _chain(sys, logic, facts, prov, depth, max_tokens, box, sys.alphabet,
                              terminal_only=True)
    out = sorted(facts, key=_fact_key)
    res = SearchResult(out, complete, prov)
    res.system = sys.name
    return res


# ---------------------------------------------------------------- enumeration

@dataclass(frozen=True)
class Certified:
    term: Term
    proof: Proof | None

    def __str__(self):
        return str(self.term)


def _bracket_terms(ops, max_tokens):
    """Size-indexed tables of ``A ::= 1 | [A (op A)+]``."""
    A = {n: [] for n in range(max_tokens + 1)}
    S2 = {n: [] for n in range(max_tokens + 1)}   # A op A (op A)*, at least two operands
    op_t = [tuple(o) for o in ops]
    for n in range(1, max_tokens + 1):
        if n == 1:
            A[1].append(("1",))
        for i in range(1, n):
            for o in op_t:
                j = n - i - len(o)
                if j < 1:
                    continue
                for x in A[i]:
                    for rest in A[j] + S2[j]:
                        S2[n].append(x + o + rest)
        if n >= 2:
            A[n].extend(("[",) + s + ("]",) for s in S2[n - 2])
    return A


def number_terms(sys: SystemDef, max_tokens: int) -> list:
    if max_tokens < 1:
        raise ValueError("max_tokens must be >= 1")
    if sys.name == "N":
        terms = [tuple(("1+" * k + "1")) for k in range((max_tokens - 1) // 2 + 1)]
        terms = [tuple(t) for t in terms]
    else:
        table = _bracket_terms(sys.operator_words(max_tokens), max_tokens)
        terms = [t for n in range(1, max_tokens + 1) for t in table[n]]
    toks = [tuple(t) for t in terms]
    return sorted(set(toks), key=lambda t: (len(t), "".join(t)))


def enumerate_numbers(sys: SystemDef, max_tokens: int, certify: bool = False,
                      depth: int = 4, budget: int = DEFAULT_SEARCH_BUDGET):
    """Ground number terms of the system grammar, size then lexicographic.

    With ``certify`` each entry carries a search-derived proof of its
    numberhood, or ``None`` when none was found within the limits.
    """
    if isinstance(sys, str):
        sys = system(sys)
    terms = [Term(t) for t in number_terms(sys, max_tokens)]
    if not certify:
        return terms
    res = search(sys, depth=depth, budget=budget, max_tokens=max(max_tokens + 8, 20))
    out = []
    for t in terms:
        f = Bare(t.tokens)
        out.append(Certified(t, res.derivation(f) if f in res.provenance else None))
    return out
