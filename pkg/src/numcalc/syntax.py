"""Token alphabet, terms, formulas and their concrete ASCII syntax.

Terms are stored as tuples of single-symbol tokens. Multi-glyph operator
runs such as ``---`` stay as separate ``-`` tokens; grouping runs into
operator levels is left to :mod:`numcalc.semantics`.

Formulas are small immutable trees. Sides of atoms are token tuples that may
also contain :class:`Metavar` placeholders, which is how axiom schemas are
written (``?a`` bar, ``??a`` doublebar, ``^a`` hat).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

CONSTANTS = ("1", "+", "-", "/", "[", "]", "T", "B", "_")
VARIABLES = tuple("abcdefghijkl")
PREDICATES = ("->", "|", "=", "<", "in", "subset", "||")
CONNECTIVES = ("not", "and", "or", "=>", "<=>")
CLASSES = ("V", "C", "VC", "CC", "VCP")

_CONST_SET = frozenset(CONSTANTS)
_VAR_SET = frozenset(VARIABLES)
_KEYWORDS = {"and", "or", "not", "in", "subset", "eps"}


class ParseError(ValueError):
    """Base for all concrete-syntax errors; carries a character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnbalancedBracket(ParseError):
    pass


class UnknownGlyph(ParseError):
    pass


class FormulaSyntaxError(ParseError):
    pass


def kind_of(token: str) -> str:
    """Return 'constant', 'variable' or 'predicate' for a ground token."""
    if token in _CONST_SET:
        return "constant"
    if token in _VAR_SET:
        return "variable"
    if token in PREDICATES:
        return "predicate"
    raise KeyError(token)


@dataclass(frozen=True, order=True)
class Metavar:
    """A schema placeholder. ``tier`` is 'bar', 'doublebar' or 'hat'."""

    base: str
    tier: str = "bar"

    def __str__(self) -> str:
        return {"bar": "?", "doublebar": "??", "hat": "^"}[self.tier] + self.base


Item = Union[str, Metavar]
Side = tuple  # tuple of Item


def render_side(side: Iterable[Item]) -> str:
    text = "".join(str(x) for x in side)
    return text if text else "eps"


def balanced(tokens: Iterable[Item]) -> bool:
    depth = 0
    for t in tokens:
        if t == "[":
            depth += 1
        elif t == "]":
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


@dataclass(frozen=True)
class Term:
    """A bracket-balanced sequence of constant and variable tokens."""

    tokens: tuple = ()

    def __post_init__(self):
        for t in self.tokens:
            if t not in _CONST_SET and t not in _VAR_SET:
                raise UnknownGlyph(f"token {t!r} is not a term symbol", 0)
        if not balanced(self.tokens):
            raise UnbalancedBracket("unbalanced brackets in term", 0)

    def __len__(self) -> int:
        return len(self.tokens)

    def __str__(self) -> str:
        return render_side(self.tokens)

    @property
    def is_ground(self) -> bool:
        return all(t in _CONST_SET for t in self.tokens)


# ---------------------------------------------------------------- formulas

@dataclass(frozen=True)
class Atom:
    pred: str
    left: tuple
    right: tuple


@dataclass(frozen=True)
class Bare:
    """A term used as a formula; asserting it means the term is a number."""

    side: tuple


@dataclass(frozen=True)
class Sync:
    left: Atom
    right: Atom


@dataclass(frozen=True)
class Member:
    side: tuple
    cls: str


@dataclass(frozen=True)
class Subset:
    side: tuple
    targets: tuple  # tuple of sides
    braced: bool = True


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Iff:
    lhs: "Formula"
    rhs: "Formula"


Formula = Union[Atom, Bare, Sync, Member, Subset, Not, And, Or, Implies, Iff]


def conj(args) -> Formula:
    """Build a flattened conjunction (a single argument is returned as is)."""
    flat = []
    for a in args:
        flat.extend(a.args if isinstance(a, And) else (a,))
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(args) -> Formula:
    flat = []
    for a in args:
        flat.extend(a.args if isinstance(a, Or) else (a,))
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def render(f: Formula) -> str:
    if isinstance(f, Atom):
        return f"({render_side(f.left)} {f.pred} {render_side(f.right)})"
    if isinstance(f, Bare):
        return render_side(f.side)
    if isinstance(f, Sync):
        return f"({render(f.left)} || {render(f.right)})"
    if isinstance(f, Member):
        return f"({render_side(f.side)} in {f.cls})"
    if isinstance(f, Subset):
        if f.braced:
            inner = "{" + ",".join(render_side(s) for s in f.targets) + "}"
        else:
            inner = render_side(f.targets[0])
        return f"({render_side(f.side)} subset {inner})"
    if isinstance(f, Not):
        return f"not {_wrap(f.arg)}"
    if isinstance(f, And):
        return " and ".join(_wrap(a) for a in f.args)
    if isinstance(f, Or):
        return " or ".join(_wrap(a) for a in f.args)
    if isinstance(f, Implies):
        return f"{_wrap(f.lhs)} => {_wrap(f.rhs)}"
    if isinstance(f, Iff):
        return f"{_wrap(f.lhs)} <=> {_wrap(f.rhs)}"
    raise TypeError(f)


def _wrap(f: Formula) -> str:
    if isinstance(f, (And, Or, Implies, Iff, Not)):
        return f"({render(f)})"
    return render(f)


def sides_of(f: Formula):
    """Yield every token side in a formula, depth first."""
    if isinstance(f, Atom):
        yield f.left
        yield f.right
    elif isinstance(f, (Bare, Member)):
        yield f.side
    elif isinstance(f, Subset):
        yield f.side
        yield from f.targets
    elif isinstance(f, Sync):
        yield from sides_of(f.left)
        yield from sides_of(f.right)
    elif isinstance(f, Not):
        yield from sides_of(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from sides_of(a)
    elif isinstance(f, (Implies, Iff)):
        yield from sides_of(f.lhs)
        yield from sides_of(f.rhs)


def metavars_of(f: Formula) -> set:
    return {x for s in sides_of(f) for x in s if isinstance(x, Metavar)}


def is_ground(f: Formula) -> bool:
    return not metavars_of(f)


def token_count(f: Formula) -> int:
    return sum(len(s) for s in sides_of(f))


# ---------------------------------------------------------------- tokenizer

@dataclass(frozen=True)
class _Tok:
    kind: str  # sym, meta, pred, kw, class, lp, rp, lbrace, rbrace, comma
    value: object
    pos: int


def _lex(text: str, allow_meta: bool = True) -> list:
    out = []
    i, n = 0, len(text)
    expect_class = False
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if expect_class:
            j = i
            while j < n and text[j].isalpha():
                j += 1
            if text[i:j] not in CLASSES:
                raise FormulaSyntaxError(f"unknown symbol class {text[i:j]!r}", start)
            out.append(_Tok("class", text[i:j], start))
            expect_class = False
            i = j
            continue
        if text.startswith("<=>", i):
            out.append(_Tok("kw", "<=>", start)); i += 3; continue
        if text.startswith("=>", i):
            out.append(_Tok("kw", "=>", start)); i += 2; continue
        if text.startswith("->", i):
            out.append(_Tok("pred", "->", start)); i += 2; continue
        if text.startswith("||", i):
            out.append(_Tok("pred", "||", start)); i += 2; continue
        if ch in "|=<":
            out.append(_Tok("pred", ch, start)); i += 1; continue
        if ch == "(":
            out.append(_Tok("lp", ch, start)); i += 1; continue
        if ch == ")":
            out.append(_Tok("rp", ch, start)); i += 1; continue
        if ch == "{":
            out.append(_Tok("lbrace", ch, start)); i += 1; continue
        if ch == "}":
            out.append(_Tok("rbrace", ch, start)); i += 1; continue
        if ch == ",":
            out.append(_Tok("comma", ch, start)); i += 1; continue
        if ch in "?^":
            if not allow_meta:
                raise UnknownGlyph(f"metavariable marker {ch!r} not allowed here", start)
            tier = "hat" if ch == "^" else "bar"
            j = i + 1
            if ch == "?" and j < n and text[j] == "?":
                tier = "doublebar"
                j += 1
            if j >= n or text[j] not in _VAR_SET:
                raise UnknownGlyph("metavariable needs a base letter a..l", start)
            out.append(_Tok("meta", Metavar(text[j], tier), start))
            i = j + 1
            continue
        if ch in _CONST_SET:
            out.append(_Tok("sym", ch, start)); i += 1; continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalpha() and text[j].islower():
                j += 1
            word = text[i:j]
            if word in _KEYWORDS:
                if word == "eps":
                    pass  # the empty sequence contributes no token
                elif word in ("in", "subset"):
                    out.append(_Tok("pred", word, start))
                    expect_class = word == "in"
                else:
                    out.append(_Tok("kw", word, start))
                i = j
                continue
            if j == i:  # uppercase letter that is not T or B
                raise UnknownGlyph(f"unknown glyph {ch!r}", start)
            for k, c in enumerate(word):
                if c not in _VAR_SET:
                    raise UnknownGlyph(f"unknown glyph {c!r}", i + k)
                out.append(_Tok("sym", c, i + k))
            i = j
            continue
        raise UnknownGlyph(f"unknown glyph {ch!r}", start)
    return out


def _check_balance(toks, text_len: int):
    depth = 0
    opened = []
    for t in toks:
        if t.value == "[":
            depth += 1
            opened.append(t.pos)
        elif t.value == "]":
            depth -= 1
            if depth < 0:
                raise UnbalancedBracket("unmatched ']'", t.pos)
            opened.pop()
    if depth:
        raise UnbalancedBracket("unclosed '['", opened[-1])


def parse_term(text: str) -> Term:
    """Parse a ground-or-open term (constants and variables only)."""
    toks = _lex(text, allow_meta=False)
    for t in toks:
        if t.kind != "sym":
            raise UnknownGlyph(f"{t.value!s} is not a term symbol", t.pos)
    _check_balance(toks, len(text))
    return Term(tuple(t.value for t in toks))


def parse_side(text: str, allow_meta: bool = True, check_balance: bool = True) -> tuple:
    """Parse a token side that may contain metavariables and ``|``."""
    toks = _lex(text, allow_meta=allow_meta)
    for t in toks:
        if t.kind not in ("sym", "meta") and not (t.kind == "pred" and t.value == "|"):
            raise UnknownGlyph(f"{t.value!s} is not allowed in a side", t.pos)
    if check_balance:
        _check_balance(toks, len(text))
    return tuple(t.value for t in toks)


def canonical(text: str) -> str:
    """Whitespace-free spelling with ``eps`` dropped; the empty term is 'eps'."""
    return str(parse_term(text))


class _Parser:
    def __init__(self, text: str, allow_meta: bool):
        self.text = text
        self.toks = _lex(text, allow_meta=allow_meta)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def pos(self):
        t = self.peek()
        return t.pos if t else len(self.text)

    def take(self, kind=None, value=None):
        t = self.peek()
        if t is None or (kind and t.kind != kind) or (value and t.value != value):
            want = value or kind
            raise FormulaSyntaxError(f"expected {want}", self.pos())
        self.i += 1
        return t

    def at(self, kind, value=None):
        t = self.peek()
        return t is not None and t.kind == kind and (value is None or t.value == value)

    def parse(self):
        if not self.toks:
            raise FormulaSyntaxError("empty formula", 0)
        f = self.iff()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"unexpected {self.peek().value!s}", self.pos())
        return f

    def iff(self):
        lhs = self.imp()
        if self.at("kw", "<=>"):
            self.take()
            return Iff(lhs, self.imp())
        return lhs

    def imp(self):
        lhs = self.disj()
        if self.at("kw", "=>"):
            self.take()
            return Implies(lhs, self.imp())
        return lhs

    def disj(self):
        args = [self.conj()]
        while self.at("kw", "or"):
            self.take()
            args.append(self.conj())
        return disj(args)

    def conj(self):
        args = [self.unary()]
        while self.at("kw", "and"):
            self.take()
            args.append(self.unary())
        return conj(args)

    def unary(self):
        if self.at("kw", "not"):
            self.take()
            return Not(self.unary())
        return self.sync()

    def sync(self):
        start = self.pos()
        left = self.primary()
        if self.at("pred", "||"):
            self.take()
            right = self.primary()
            if not (isinstance(left, Atom) and isinstance(right, Atom)
                    and left.pred == "->" and right.pred == "->"):
                raise FormulaSyntaxError("'||' must pair two '->' atoms", start)
            return Sync(left, right)
        return left

    def primary(self):
        if self.at("lp"):
            self.take()
            f = self.iff()
            self.take("rp")
            return f
        return self.relation()

    def side(self):
        start = self.pos()
        toks = []
        while self.peek() is not None and (
            self.peek().kind in ("sym", "meta")
            or (self.peek().kind == "pred" and self.peek().value == "|")
        ):
            toks.append(self.take())
        _check_balance(toks, len(self.text))
        return tuple(t.value for t in toks), start

    def relation(self):
        # 'eps' is dropped by the lexer, so sides of atoms may come out empty
        left, start = self.side()
        t = self.peek()
        if t is not None and t.kind == "pred" and t.value in ("->", "=", "<"):
            self.take()
            right, rstart = self.side()
            if t.value != "->" and ("|" in left or "|" in right):
                raise FormulaSyntaxError("'|' may only appear in producer sides", start)
            return Atom(t.value, left, right)
        if t is not None and t.kind == "pred" and t.value == "in":
            self.take()
            return Member(left, self.take("class").value)
        if t is not None and t.kind == "pred" and t.value == "subset":
            self.take()
            if self.at("lbrace"):
                self.take()
                targets = [self.side()[0]]
                while self.at("comma"):
                    self.take()
                    targets.append(self.side()[0])
                self.take("rbrace")
                return Subset(left, tuple(targets), True)
            return Subset(left, (self.side()[0],), False)
        if "|" in left:
            raise FormulaSyntaxError("'|' outside a producer atom", start)
        if not left:
            raise FormulaSyntaxError("expected a formula", start)
        return Bare(left)


def parse_formula(text: str, allow_meta: bool = True) -> Formula:
    """Parse the ASCII formula syntax (see docs/syntax.md)."""
    return _Parser(text, allow_meta).parse()


# ---------------------------------------------------------------- classes

def member_of(t, cls: str, alphabet=None) -> bool:
    """Class membership by generating alphabet; eps belongs to every class.

    ``alphabet`` optionally restricts V and C to a system's declared symbols
    (a pair of variable and constant collections).
    """
    tokens = t.tokens if isinstance(t, Term) else tuple(t)
    if cls not in CLASSES:
        raise ValueError(f"unknown class {cls!r}")
    vs, cs = (alphabet if alphabet is not None else (VARIABLES, CONSTANTS))
    allowed = set()
    if "V" in cls:
        allowed |= set(vs)
    if "C" in cls:
        allowed |= set(cs)
    if "P" in cls:
        allowed |= set(PREDICATES)
    return all(tok in allowed for tok in tokens)
