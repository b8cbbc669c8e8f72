"""Decimal digits, continued fractions and base-b expansions.

Everything here is exact rational arithmetic. Real inputs enter only
through interval oracles (callables ``prec -> (lo, hi)``) in
:func:`cf_digits_of_real`, and only finite prefixes are ever produced.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd, isqrt

import gmpy2

__all__ = [
    "OutOfRange", "InvalidQuotient", "PrecisionExhausted", "BaseOutOfRange",
    "DigitOutOfRange", "NotPrime", "NotCoprime",
    "DecimalExtraction", "decimal_digits", "decimal_expansion", "render_decimal",
    "cf_convergents", "cf_value", "rational_to_cf", "euclid_remainders", "cf_digits_of_real",
    "rational_oracle", "surd_oracle", "term_oracle",
    "BaseBExpansion", "parse_baseb", "baseb_to_rational", "rational_to_baseb",
    "terminates", "period", "GapReport", "bbe_gap_check",
]


class OutOfRange(ValueError):
    pass


class InvalidQuotient(ValueError):
    pass


class PrecisionExhausted(ArithmeticError):
    pass


class BaseOutOfRange(ValueError):
    pass


class DigitOutOfRange(ValueError):
    pass


class NotPrime(ValueError):
    pass


class NotCoprime(ValueError):
    pass


# ---------------------------------------------------------------- decimals

@dataclass(frozen=True)
class DecimalExtraction:
    """Digits a_1..a_n of x in [0, 1) with x = x_n + g_{n+1}."""

    x: Fraction
    digits: tuple
    carriers: tuple      # f_1 .. f_{n+1}, each in [0, 1)
    partial: Fraction    # x_n
    remainder: Fraction  # g_{n+1} = f_{n+1} / 10**n

    def __str__(self):
        return "." + "".join(map(str, self.digits))


def decimal_digits(x, n: int) -> DecimalExtraction:
    x = Fraction(x)
    if not 0 <= x < 1:
        raise OutOfRange("decimal_digits needs 0 <= x < 1")
    if n < 1:
        raise OutOfRange("need at least one digit")
    f, digits, carriers = x, [], [x]
    for _ in range(n):
        a = floor(10 * f)
        digits.append(a)
        f = 10 * f - a
        carriers.append(f)
    partial = sum((Fraction(a, 10 ** i) for i, a in enumerate(digits, 1)), Fraction(0))
    return DecimalExtraction(x, tuple(digits), tuple(carriers), partial, f / 10 ** n)


def decimal_expansion(xi, n: int):
    """(sign, integer part X, extraction of the fractional part)."""
    xi = Fraction(xi)
    sign = -1 if xi < 0 else 1
    a = abs(xi)
    whole = floor(a)
    return sign, whole, decimal_digits(a - whole, n)


def render_decimal(xi, n: int) -> str:
    sign, whole, ext = decimal_expansion(xi, n)
    head = ("-" if sign < 0 else "") + (str(whole) if whole else "")
    return head + str(ext)


# ---------------------------------------------------------------- continued fractions

def _check_quotients(a):
    if not a:
        raise InvalidQuotient("empty quotient list")
    for i, q in enumerate(a):
        if not isinstance(q, int):
            raise InvalidQuotient(f"a_{i} = {q!r} is not an integer")
        if i >= 1 and q < 1:
            raise InvalidQuotient(f"a_{i} = {q} must be positive")


def cf_convergents(a) -> tuple:
    """Numerators and denominators of the convergents of ``[a0; a1, ...]``."""
    a = list(a)
    _check_quotients(a)
    p, q = [], []
    p1, p2, q1, q2 = 1, 0, 0, 1  # p_{-1}, p_{-2}, q_{-1}, q_{-2}
    for x in a:
        pn, qn = x * p1 + p2, x * q1 + q2
        p.append(pn)
        q.append(qn)
        p1, p2, q1, q2 = pn, p1, qn, q1
    return p, q


def cf_value(a) -> Fraction:
    p, q = cf_convergents(a)
    return Fraction(p[-1], q[-1])


def euclid_remainders(h: int, k: int) -> list:
    """The strictly decreasing remainders k, k1, k2, ... down to 0."""
    if k < 1:
        raise ValueError("denominator must be positive")
    out = [k]
    while k:
        h, k = k, h % k
        out.append(k)
    return out


def rational_to_cf(h: int, k: int) -> list:
    """Canonical quotients of h/k (last quotient >= 2 unless the list has length 1)."""
    if k < 1:
        raise ValueError("denominator must be positive")
    out = []
    while k:
        a, r = divmod(h, k)
        out.append(a)
        h, k = k, r
    if len(out) > 1 and out[-1] == 1:
        out.pop()
        out[-1] += 1
    return out


def rational_oracle(x):
    x = Fraction(x)
    return lambda prec: (x, x)


def surd_oracle(P: int, D: int, Q: int):
    """Enclosures of (P + sqrt(D)) / Q for D >= 0, Q != 0."""
    if D < 0 or Q == 0:
        raise ValueError("need D >= 0 and Q != 0")

    def at(prec):
        s = isqrt(D << (2 * prec))
        lo, hi = Fraction(s, 1 << prec), Fraction(s + (s * s != D << (2 * prec)), 1 << prec)
        a, b = (P + lo) / Q, (P + hi) / Q
        return (a, b) if a <= b else (b, a)
    return at


def term_oracle(term, cfg=None):
    """Oracle for the value of a ground term."""
    from . import semantics

    base = cfg or semantics.EvalConfig()

    def at(prec):
        c = semantics.EvalConfig(precision=prec, max_precision=max(prec, base.max_precision),
                                 max_level=base.max_level)
        v = semantics.evaluate(term, c)
        return (v, v) if isinstance(v, Fraction) else (v.lo, v.hi)
    return at


def cf_digits_of_real(oracle, n: int, precision: int = 64, max_precision: int = 1 << 14) -> list:
    """First ``n`` partial quotients of the oracle's value.

    A shorter list means the value is rational and its expansion ended.
    """
    prec = precision
    while True:
        lo, hi = oracle(prec)
        out = _cf_of_interval(Fraction(lo), Fraction(hi), n)
        if out is not None:
            return out
        if prec >= max_precision:
            raise PrecisionExhausted(f"quotients undecided at {max_precision} bits")
        prec = min(2 * prec, max_precision)


def _cf_of_interval(lo: Fraction, hi: Fraction, n: int):
    out = []
    while len(out) < n:
        a = floor(lo)
        if floor(hi) != a:
            return None
        out.append(a)
        lo, hi = lo - a, hi - a
        if lo == 0:
            if hi == 0:
                return out  # exact rational, expansion ended
            return None
        lo, hi = 1 / hi, 1 / lo
    return out


# ---------------------------------------------------------------- base b

_DIGITS = string.digits + string.ascii_lowercase


@dataclass(frozen=True)
class BaseBExpansion:
    base: int
    sign: int
    integer: tuple      # most significant first
    fraction: tuple

    def __post_init__(self):
        if self.base < 2:
            raise BaseOutOfRange("base must be at least 2")
        for d in self.integer + self.fraction:
            if not 0 <= d < self.base:
                raise DigitOutOfRange(f"digit {d} outside 0..{self.base - 1}")

    def __str__(self):
        sym = (lambda d: _DIGITS[d]) if self.base <= 36 else (lambda d: f"({d})")
        head = "".join(map(sym, self.integer)) or "0"
        tail = "".join(map(sym, self.fraction))
        return ("-" if self.sign < 0 else "") + head + ("." + tail if tail else "")


def parse_baseb(text: str, base: int) -> BaseBExpansion:
    if not 2 <= base <= 36:
        raise BaseOutOfRange("textual expansions support bases 2..36")
    s = text.strip().lower()
    sign = -1 if s.startswith("-") else 1
    s = s.lstrip("+-")
    head, _, tail = s.partition(".")

    def digs(part):
        out = []
        for ch in part:
            d = _DIGITS.find(ch)
            if d < 0 or d >= base:
                raise DigitOutOfRange(f"{ch!r} is not a base-{base} digit")
            out.append(d)
        return tuple(out)
    return BaseBExpansion(base, sign, digs(head), digs(tail))


def baseb_to_rational(e) -> Fraction:
    """sign * (sum of digit * b**place) as an exact rational."""
    if isinstance(e, tuple):
        e = parse_baseb(*e)
    b, n = e.base, len(e.fraction)
    total = 0
    for d in e.integer + e.fraction:
        total = total * b + d
    return e.sign * Fraction(total, b ** n)


def rational_to_baseb(p: int, q: int, b: int, length: int):
    """Digits of p/q in base b, ``length`` fractional places.

    Returns ``(expansion, terminated)``; ``terminated`` is true when the
    remainder reached zero, i.e. the digits are the whole expansion.
    """
    if b < 2:
        raise BaseOutOfRange("base must be at least 2")
    if q == 0:
        raise ZeroDivisionError("q = 0")
    x = Fraction(p, q)
    sign = -1 if x < 0 else 1
    x = abs(x)
    whole = floor(x)
    r = x - whole
    ints = []
    while whole:
        whole, d = divmod(whole, b)
        ints.append(d)
    fr = []
    while len(fr) < length and r:
        r *= b
        d = floor(r)
        fr.append(d)
        r -= d
    exp = BaseBExpansion(b, sign, tuple(reversed(ints)), tuple(fr))
    return exp, r == 0


def terminates(p: int, q: int, b: int) -> bool:
    """Whether p/q has a finite base-b expansion (q's primes all divide b)."""
    q = q // gcd(p, q)
    g = gcd(q, b)
    while g > 1:
        while q % g == 0:
            q //= g
        g = gcd(q, b)
    return q == 1


def period(p: int, q: int, b: int):
    """(preperiod, period) of the base-b expansion of p/q; period 0 if it ends."""
    x = Fraction(p, q)
    r = abs(x) - floor(abs(x))
    seen, i = {}, 0
    while r and r not in seen:
        seen[r] = i
        r = r * b - floor(r * b)
        i += 1
    if not r:
        return i, 0
    return seen[r], i - seen[r]


@dataclass(frozen=True)
class GapReport:
    base: int
    q: int
    max_len: int
    confirmed: bool
    witness: str | None
    by_enumeration: bool
    by_arithmetic: bool
    candidates: int


def bbe_gap_check(b: int, q: int, max_len: int) -> GapReport:
    """No base-b expansion of at most ``max_len`` places equals 1/q.

    Checked twice: by comparing 1/q against every digit string, and by
    the divisibility argument (q*N = b**n is impossible when q is a prime
    not dividing b).
    """
    if b < 2:
        raise BaseOutOfRange("base must be at least 2")
    if not gmpy2.is_prime(q):
        raise NotPrime(f"{q} is not prime")
    if gcd(q, b) != 1:
        raise NotCoprime(f"{q} divides {b}")
    witness, count = None, 0
    # integer digits are all zero because 1/q < 1
    for n in range(1, max_len + 1):
        scale = b ** n
        stack = [(0, 0)]
        while stack and witness is None:
            depth, value = stack.pop()
            if depth == n:
                count += 1
                if q * value == scale:  # value / b**n == 1/q, cross-multiplied
                    witness = str(BaseBExpansion(b, 1, (), _digits_of(value, b, n)))
                continue
            for d in range(b):
                stack.append((depth + 1, value * b + d))
    by_enum = witness is None
    by_arith = all(pow(b, n, q) != 0 for n in range(1, max_len + 1))
    return GapReport(b, q, max_len, by_enum and by_arith, witness, by_enum, by_arith, count)


def _digits_of(value: int, b: int, n: int) -> tuple:
    out = []
    for _ in range(n):
        value, d = divmod(value, b)
        out.append(d)
    return tuple(reversed(out))
