"""Values of ground terms under the hyperoperation reading.

A run of ``n`` equal signs is an operator of level ``n``:

=====  ==============  =====================  ======================
level  ``+``           ``-`` (left inverse)   ``/`` (right inverse)
=====  ==============  =====================  ======================
1      addition        subtraction            subtraction
2      multiplication  division               division
3      power           root ``x**(1/y)``      logarithm ``log_y x``
4      tetration       super-root             super-logarithm
=====  ==============  =====================  ======================

Flat brackets associate to the left. Evaluation is exact over the
rationals whenever every operation stays rational; otherwise the
value is an :class:`Interval` with dyadic endpoints computed with outward
rounding, refined until it is narrow enough.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd

import gmpy2
from gmpy2 import mpfr, mpq

from . import farey
from .syntax import Term, parse_term

__all__ = [
    "Family", "OperatorLevel", "Interval", "EvalConfig", "Order",
    "EvalError", "MixedRun", "NotGround", "DivisionByZero", "DomainError",
    "LevelUnsupported", "PrecisionExhausted", "ValueTooLarge",
    "op_of", "evaluate", "eval", "compare", "normalize", "decimal_string", "value_json",
]


# ---------------------------------------------------------------- errors

class EvalError(ArithmeticError):
    pass


class MixedRun(EvalError, ValueError):
    pass


class NotGround(EvalError, ValueError):
    pass


class DivisionByZero(EvalError, ZeroDivisionError):
    pass


class DomainError(EvalError):
    pass


class LevelUnsupported(EvalError):
    pass


class PrecisionExhausted(EvalError):
    pass


class ValueTooLarge(EvalError):
    """An exact result would exceed the configured size bound."""


class _Refine(Exception):
    """Raised inside the interval pass when the precision is too low to decide."""


# ---------------------------------------------------------------- operators

class Family(Enum):
    ADD = "add"
    FIRST_INVERSE = "first-inverse"
    EXP_INVERSE = "exp-inverse"


_GLYPH = {"+": Family.ADD, "-": Family.FIRST_INVERSE, "/": Family.EXP_INVERSE}
_SIGN = {v: k for k, v in _GLYPH.items()}


@dataclass(frozen=True)
class OperatorLevel:
    family: Family
    level: int

    @property
    def glyph(self) -> str:
        return _SIGN[self.family]

    def __str__(self):
        return self.glyph * self.level


def op_of(run) -> OperatorLevel:
    """``"+++"`` -> (add, 3). The run must repeat a single sign."""
    run = "".join(run)
    if not run or run[0] not in _GLYPH:
        raise MixedRun(f"{run!r} is not an operator run")
    if any(c != run[0] for c in run):
        raise MixedRun(f"operator run {run!r} mixes signs")
    return OperatorLevel(_GLYPH[run[0]], len(run))


# ---------------------------------------------------------------- values

@dataclass(frozen=True)
class Interval:
    """Closed interval with dyadic rational endpoints."""

    lo: Fraction
    hi: Fraction
    precision: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def __float__(self):
        return float(self.mid)

    def __str__(self):
        return f"[{float(self.lo)!r}, {float(self.hi)!r}]"


@dataclass(frozen=True)
class EvalConfig:
    precision: int = 128
    max_precision: int = 4096
    max_level: int = 4
    recursion_cap: int = 400
    max_bits: int = 1 << 16  # bound on exact numerators/denominators

    def __post_init__(self):
        if min(self.precision, self.max_precision, self.max_level, self.recursion_cap,
               self.max_bits) < 1:
            raise ValueError("configuration values must be positive")
        if self.max_precision < self.precision:
            raise ValueError("max_precision must be at least precision")

    @classmethod
    def from_env(cls, **kw) -> "EvalConfig":
        env = os.environ.get("NUMCALC_PRECISION")
        if env and "precision" not in kw:
            kw["precision"] = int(env)
            kw.setdefault("max_precision", max(4096, kw["precision"]))
        return cls(**kw)


class Order(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


# ---------------------------------------------------------------- parsing

@dataclass(eq=False)
class _One:
    def render(self):
        return "1"


@dataclass(eq=False)
class _Op:
    op: OperatorLevel
    left: object
    right: object
    bracketed: bool = True

    def render(self):
        s = f"{self.left.render()}{self.op}{self.right.render()}"
        return f"[{s}]" if self.bracketed else s


@dataclass(eq=False)
class _Cell:
    kind: str  # "T" or "B"
    k: object
    pos: object

    def render(self):
        return f"{self.kind}_{self.k.render()}_{self.pos.render()}_"


class _Reader:
    def __init__(self, toks, cap):
        self.toks = toks
        self.i = 0
        self.cap = cap

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        t = self.peek()
        if t is None or (want is not None and t != want):
            raise NotGround(f"expected {want or 'a token'} at token {self.i}")
        self.i += 1
        return t

    def seq(self, depth, bracketed):
        """``item (op item)*`` folded to the left."""
        if depth > self.cap:
            raise EvalError("term nests too deeply")
        node = self.item(depth)
        first = True
        while self.peek() in _GLYPH:
            j = self.i
            while self.peek() in _GLYPH:
                self.i += 1
            op = op_of(self.toks[j:self.i])
            rhs = self.item(depth)
            node = _Op(op, node, rhs, True)
            first = False
        if not first and not bracketed:
            node.bracketed = False
        return node

    def item(self, depth):
        t = self.peek()
        if t == "1":
            self.i += 1
            return _One()
        if t == "[":
            self.i += 1
            node = self.seq(depth + 1, True)
            self.take("]")
            return node
        if t in ("T", "B"):
            self.i += 1
            self.take("_")
            k = self.seq(depth + 1, True)
            self.take("_")
            pos = self.seq(depth + 1, True)
            self.take("_")
            return _Cell(t, k, pos)
        if t is None:
            raise NotGround("term ends where an operand is expected")
        raise NotGround(f"token {t!r} at {self.i} cannot start an operand")


def _parse(t, cfg) -> object:
    if isinstance(t, str):
        t = parse_term(t)
    toks = t.tokens if isinstance(t, Term) else tuple(t)
    if not toks:
        raise NotGround("the empty term has no value")
    r = _Reader(toks, cfg.recursion_cap)
    node = r.seq(0, False)
    if r.peek() is not None:
        raise NotGround(f"unexpected {r.peek()!r} at token {r.i}")
    return node


def normalize(t) -> Term:
    """Fully left-associated, binary bracket form (eval-equivalent)."""
    return parse_term(_parse(t, EvalConfig()).render())


# ---------------------------------------------------------------- exact layer

def _bits(x: Fraction) -> int:
    return max(abs(x.numerator).bit_length(), x.denominator.bit_length())


def _iroot_exact(n: int, k: int):
    r, exact = gmpy2.iroot(n, k)
    return int(r) if exact else None


def _root_of(r: Fraction, k: int):
    """Exact ``r**(1/k)`` for ``r > 0`` or None."""
    a = _iroot_exact(r.numerator, k)
    b = _iroot_exact(r.denominator, k) if a is not None else None
    return None if b is None else Fraction(a, b)


def _prime_factors(n: int):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _canonical_root(r: Fraction, k: int):
    """Reduce ``r**(1/k)`` to the smallest index; returns (r', k')."""
    changed = True
    while changed and k > 1:
        changed = False
        for p in _prime_factors(k):
            s = _root_of(r, p)
            if s is not None:
                r, k = s, k // p
                changed = True
                break
    return r, k


def _coprime_basis(nums):
    """Pairwise coprime integers > 1 generating every input multiplicatively."""
    basis = [n for n in nums if n > 1]
    done = False
    while not done:
        done = True
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                g = gcd(basis[i], basis[j])
                if g > 1:
                    x, y = basis[i] // g, basis[j] // g
                    basis = [b for n, b in enumerate(basis) if n not in (i, j)]
                    basis += [v for v in (x, g, y) if v > 1]
                    done = False
                    break
            if not done:
                break
    return sorted(set(basis))


def _exponents(n: int, basis) -> list:
    out = []
    for b in basis:
        e = 0
        while n % b == 0:
            n //= b
            e += 1
        out.append(e)
    if n != 1:
        raise AssertionError("basis does not generate the input")
    return out


def _log_vectors(values):
    ints = [v for x in values for v in (x.numerator, x.denominator)]
    basis = _coprime_basis(ints)
    return [[a - b for a, b in zip(_exponents(x.numerator, basis), _exponents(x.denominator, basis))]
            for x in values]


def _ratio(u, v):
    """λ with u = λ v, or None."""
    lam = None
    for a, b in zip(u, v):
        if b == 0:
            if a != 0:
                return None
            continue
        c = Fraction(a, b)
        if lam is None:
            lam = c
        elif c != lam:
            return None
    return lam


def _is_int(x) -> bool:
    return isinstance(x, Fraction) and x.denominator == 1


@dataclass(frozen=True)
class _Irrational:
    sym: tuple | None = None  # ("root", r, k) or ("log", a, b)


class _Exact:
    """Exact pass: a Fraction, or an _Irrational marker, per node."""

    def __init__(self, cfg: EvalConfig):
        self.cfg = cfg
        self.memo: dict = {}

    def value(self, node):
        key = id(node)
        if key not in self.memo:
            self.memo[key] = self._value(node)
        return self.memo[key]

    def _guard(self, bits):
        if bits > self.cfg.max_bits:
            raise ValueTooLarge(f"exact result needs about {bits} bits")

    def _value(self, node):
        if isinstance(node, _One):
            return Fraction(1)
        if isinstance(node, _Cell):
            k, pos = self.value(node.k), self.value(node.pos)
            if not (_is_int(k) and _is_int(pos)):
                raise farey.PositionOutOfRange("table indices must be positive integers")
            f = farey.top if node.kind == "T" else farey.bot
            return Fraction(f(int(k), int(pos)))
        a, b = self.value(node.left), self.value(node.right)
        fam, n = node.op.family, node.op.level
        if n > self.cfg.max_level or n >= 5:
            return self._high(fam, n, a, b)
        if n == 4:
            return self._level4(fam, a, b)
        if isinstance(a, _Irrational) or isinstance(b, _Irrational):
            return _Irrational()
        return self._rational(fam, n, a, b)

    def _rational(self, fam, n, a, b):
        if n == 1:
            return a + b if fam is Family.ADD else a - b
        if n == 2:
            if fam is Family.ADD:
                return a * b
            if b == 0:
                raise DivisionByZero("level-2 inverse with zero right operand")
            return a / b
        # n == 3
        if fam is Family.ADD:
            return self.power(a, b)
        if fam is Family.FIRST_INVERSE:
            if b == 0:
                raise DivisionByZero("root of index zero")
            if a <= 0:
                raise DomainError("root of a non-positive number")
            return self.power(a, 1 / b)
        return self.log(a, b)

    def power(self, a: Fraction, b: Fraction):
        if b.denominator == 1:
            e = b.numerator
            if a == 0:
                if e < 0:
                    raise DivisionByZero("zero to a negative power")
                if e == 0:
                    raise DomainError("zero to the zero power")
                return Fraction(0)
            self._guard(_bits(a) * abs(e))
            return a ** e
        if a < 0:
            raise DomainError("negative base with a non-integer exponent")
        if a == 0:
            if b < 0:
                raise DivisionByZero("zero to a negative power")
            return Fraction(0)
        p, q = b.numerator, b.denominator
        self._guard(_bits(a) * abs(p))
        base = a ** p
        r = _root_of(base, q)
        if r is not None:
            return r
        return _Irrational(("root",) + _canonical_root(base, q))

    def log(self, a: Fraction, b: Fraction):
        if a <= 0 or b <= 0:
            raise DomainError("logarithm needs positive operands")
        if b == 1:
            raise DomainError("logarithm to base 1")
        if a == 1:
            return Fraction(0)
        va, vb = _log_vectors([a, b])
        lam = _ratio(va, vb)
        if lam is not None:
            return lam
        return _Irrational(("log", a, b))

    def tower(self, a: Fraction, n: int):
        t = a
        for _ in range(n - 1):
            t = self.power(a, t) if not isinstance(t, _Irrational) else _Irrational()
            if isinstance(t, _Irrational):
                return t
        return t

    def _level4(self, fam, a, b):
        if fam is Family.ADD:
            if not _is_int(b) or b < 1:
                raise LevelUnsupported("level 4 needs a positive integer right operand")
            if isinstance(a, _Irrational):
                return _Irrational()
            if a <= 0:
                raise DomainError("tetration needs a positive base")
            return self.tower(a, int(b))
        if fam is Family.FIRST_INVERSE:
            if not _is_int(b) or b < 1:
                raise LevelUnsupported("super-root needs a positive integer index")
            if isinstance(a, _Irrational):
                return _Irrational()
            if a < 1:
                raise DomainError("super-root needs a value of at least 1")
            n = int(b)
            if n == 1 or a == 1:
                return a
            x = 2
            while True:
                t = self.tower(Fraction(x), n)
                if t == a:
                    return Fraction(x)
                if t > a:
                    return _Irrational()
                x += 1
        # super-logarithm: only exact integer answers are supported
        if isinstance(a, _Irrational) or isinstance(b, _Irrational):
            raise LevelUnsupported("super-logarithm of an irrational value")
        if b <= 1:
            raise DomainError("super-logarithm needs a base above 1")
        if a == 1:
            return Fraction(0)
        t, n = b, 1
        while t < a:
            t = self.power(b, t)
            if isinstance(t, _Irrational):
                break
            n += 1
        if t == a:
            return Fraction(n)
        raise LevelUnsupported("super-logarithm is not an integer")

    def _high(self, fam, n, a, b):
        if fam is not Family.ADD or not (_is_int(a) and _is_int(b)) or a < 1 or b < 1:
            raise LevelUnsupported(f"level {n} needs positive integer operands")
        return Fraction(self.hyper(int(a), n, int(b)))

    def hyper(self, a: int, n: int, b: int) -> int:
        if n == 1:
            return a + b
        if n == 2:
            return a * b
        if n == 3:
            self._guard(a.bit_length() * b)
            return a ** b
        if b == 1:
            return a
        if a == 1:
            return 1
        if a == 2 and b == 2:
            return 4
        return self.hyper(a, n - 1, self.hyper(a, n, b - 1))


# ---------------------------------------------------------------- interval layer

class _Ctx:
    def __init__(self, prec):
        self.down = gmpy2.context(gmpy2.get_context(), precision=prec, round=gmpy2.RoundDown)
        self.up = gmpy2.context(gmpy2.get_context(), precision=prec, round=gmpy2.RoundUp)

    def lo(self, f, *args):
        with self.down:
            return f(*args)

    def hi(self, f, *args):
        with self.up:
            return f(*args)


def _exact_of(x) -> Fraction:
    n, d = x.as_integer_ratio()
    return Fraction(int(n), int(d))


def _mpfr_of(x: Fraction):
    return mpfr(mpq(x.numerator, x.denominator))


class _Intervals:
    def __init__(self, exact: _Exact, prec: int):
        self.exact = exact
        self.c = _Ctx(prec)
        self.memo: dict = {}

    def iv(self, node):
        key = id(node)
        if key not in self.memo:
            self.memo[key] = self._iv(node)
        return self.memo[key]

    def point(self, x: Fraction):
        return self.c.lo(_mpfr_of, x), self.c.hi(_mpfr_of, x)

    def _iv(self, node):
        v = self.exact.value(node)
        if isinstance(v, Fraction):
            return self.point(v)
        a, b = node.left, node.right
        X, Y = self.iv(a), self.iv(b)
        eb = self.exact.value(b)
        fam, n = node.op.family, node.op.level
        if n == 1:
            return self.add(X, Y) if fam is Family.ADD else self.sub(X, Y)
        if n == 2:
            return self.mul(X, Y) if fam is Family.ADD else self.div(X, Y)
        if n == 3:
            if fam is Family.ADD:
                return self.pow(X, Y, eb)
            if fam is Family.FIRST_INVERSE:
                self.positive(X, "root of a non-positive number")
                return self.pow(X, self.div(self.point(Fraction(1)), Y), None)
            self.positive(X, "logarithm needs positive operands")
            self.positive(Y, "logarithm needs positive operands")
            return self.div(self.log(X), self.log(Y))
        # level 4 with an integer right operand (checked in the exact pass)
        if fam is Family.ADD:
            self.positive(X, "tetration needs a positive base")
            return self.tower(X, int(eb))
        return self.superroot(X, int(eb))

    # arithmetic with outward rounding
    def add(self, X, Y):
        return self.c.lo(lambda: X[0] + Y[0]), self.c.hi(lambda: X[1] + Y[1])

    def sub(self, X, Y):
        return self.c.lo(lambda: X[0] - Y[1]), self.c.hi(lambda: X[1] - Y[0])

    def _corners(self, f, X, Y):
        lo = min(self.c.lo(f, x, y) for x in X for y in Y)
        hi = max(self.c.hi(f, x, y) for x in X for y in Y)
        return lo, hi

    def mul(self, X, Y):
        return self._corners(lambda x, y: x * y, X, Y)

    def div(self, X, Y):
        if Y[0] <= 0 <= Y[1]:
            raise _Refine
        return self._corners(lambda x, y: x / y, X, Y)

    def positive(self, X, msg):
        if X[1] <= 0:
            raise DomainError(msg)
        if X[0] <= 0:
            raise _Refine

    def log(self, X):
        return self.c.lo(gmpy2.log, X[0]), self.c.hi(gmpy2.log, X[1])

    def pow(self, X, Y, exact_exp):
        if isinstance(exact_exp, Fraction) and exact_exp.denominator == 1:
            return self.ipow(X, exact_exp.numerator)
        if X[1] <= 0:
            raise DomainError("negative base with a non-integer exponent")
        if X[0] <= 0:
            raise _Refine
        return self._corners(lambda x, y: x ** y, X, Y)

    def ipow(self, X, e: int):
        if e < 0:
            return self.div(self.point(Fraction(1)), self.ipow(X, -e))
        out = self.point(Fraction(1))
        base = X
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    def tower(self, X, n):
        t = X
        for _ in range(n - 1):
            t = self._corners(lambda x, y: x ** y, X, t)
            if gmpy2.is_infinite(t[1]):
                raise ValueTooLarge("tower overflows")
        return t

    def superroot(self, A, n):
        """x >= 1 with x tower n == A, by certified bisection."""
        if A[1] < 1:
            raise DomainError("super-root needs a value of at least 1")
        if A[0] < 1:
            raise _Refine
        one = self.point(Fraction(1))[0]
        lo, hi = one, max(A[1], one * 2)
        prec = self.c.down.precision
        for _ in range(prec + 8):
            mid = self.c.lo(lambda: (lo + hi) / 2)
            if not lo < mid < hi:
                break
            T = self.tower((mid, mid), n)
            if T[1] < A[0]:
                lo = mid
            elif T[0] > A[1]:
                hi = mid
            else:
                break
        return lo, hi


# ---------------------------------------------------------------- public API

def _config(cfg):
    return cfg if cfg is not None else EvalConfig.from_env()


@dataclass
class _Analysis:
    node: object
    exact: _Exact
    value: object = field(default=None)

    def interval(self, prec):
        lo, hi = _Intervals(self.exact, prec).iv(self.node)
        return _exact_of(lo), _exact_of(hi)


def _analyze(t, cfg) -> _Analysis:
    node = _parse(t, cfg)
    ex = _Exact(cfg)
    a = _Analysis(node, ex)
    a.value = ex.value(node)
    return a


def _narrow_enough(lo, hi, precision):
    return hi - lo <= Fraction(2) ** (1 - precision) * max(Fraction(1), abs(lo))


def _refined(an: _Analysis, cfg, accept):
    """Yield intervals at increasing working precision until ``accept``."""
    p = cfg.precision
    while True:
        try:
            lo, hi = an.interval(p + 32)
            if accept(lo, hi):
                return lo, hi, p
        except _Refine:
            pass
        if p >= cfg.max_precision:
            raise PrecisionExhausted(f"undecided at {cfg.max_precision} bits")
        p = min(2 * p, cfg.max_precision)


def evaluate(t, cfg: EvalConfig | None = None):
    """Exact :class:`~fractions.Fraction` or an :class:`Interval`."""
    cfg = _config(cfg)
    an = _analyze(t, cfg)
    if isinstance(an.value, Fraction):
        return an.value
    lo, hi, _ = _refined(an, cfg, lambda lo, hi: _narrow_enough(lo, hi, cfg.precision))
    return Interval(lo, hi, cfg.precision)


eval = evaluate  # noqa: A001  (the public name of the operation)


def _sym_equal(s, t) -> bool:
    if s is None or t is None or s[0] != t[0]:
        return False
    if s[0] == "root":
        return s == t
    va, vb, vc, vd = _log_vectors([s[1], s[2], t[1], t[2]])
    lam = _ratio(va + vb, vc + vd)
    return lam is not None and lam != 0


def compare(t, u, cfg: EvalConfig | None = None) -> Order:
    cfg = _config(cfg)
    a, b = _analyze(t, cfg), _analyze(u, cfg)
    x, y = a.value, b.value
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return Order.LESS if x < y else Order.GREATER if x > y else Order.EQUAL
    if isinstance(x, _Irrational) and isinstance(y, _Irrational) and _sym_equal(x.sym, y.sym):
        return Order.EQUAL
    p = cfg.precision
    while True:
        try:
            xl, xh = (x, x) if isinstance(x, Fraction) else a.interval(p + 32)
            yl, yh = (y, y) if isinstance(y, Fraction) else b.interval(p + 32)
            if xh < yl:
                return Order.LESS
            if yh < xl:
                return Order.GREATER
        except _Refine:
            pass
        if p >= cfg.max_precision:
            return Order.UNKNOWN
        p = min(2 * p, cfg.max_precision)


def _truncate(x: Fraction, digits: int) -> str:
    sign = "-" if x < 0 else ""
    scaled = abs(x.numerator) * 10 ** digits // x.denominator
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}" + (f".{frac:0{digits}d}" if digits else "")


def decimal_string(t, digits: int, cfg: EvalConfig | None = None) -> str:
    """Decimal digits truncated toward zero; certified for interval values."""
    cfg = _config(cfg)
    an = _analyze(t, cfg)
    if isinstance(an.value, Fraction):
        return _truncate(an.value, digits)

    def agree(lo, hi):
        return (lo > 0 or hi < 0) and _truncate(lo, digits) == _truncate(hi, digits)

    lo, _, _ = _refined(an, cfg, agree)
    return _truncate(lo, digits)


def value_json(t, cfg: EvalConfig | None = None, digits: int = 30) -> dict:
    cfg = _config(cfg)
    term = str(parse_term(t) if isinstance(t, str) else t)
    v = evaluate(t, cfg)
    out = {"term": term}
    if isinstance(v, Fraction):
        out.update(kind="rational", value=str(v))
    else:
        out.update(kind="interval", value=[str(v.lo), str(v.hi), v.precision])
    out["decimal"] = decimal_string(t, digits, cfg)
    return out
