from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from numcalc.numtheory import (
    BaseOutOfRange, DigitOutOfRange, InvalidQuotient, NotCoprime, NotPrime, OutOfRange,
    baseb_to_rational, bbe_gap_check, cf_convergents, cf_digits_of_real, cf_value,
    decimal_digits, euclid_remainders, parse_baseb, period, rational_oracle, rational_to_baseb,
    rational_to_cf, render_decimal, surd_oracle, term_oracle, terminates,
)


def test_decimal_17_400():
    d = decimal_digits(Fraction(17, 400), 7)
    assert d.digits == (0, 4, 2, 5, 0, 0, 0)
    assert d.remainder == 0
    assert render_decimal(Fraction(17, 400), 7) == ".0425000"


def test_decimal_zero():
    d = decimal_digits(0, 5)
    assert d.digits == (0,) * 5 and d.remainder == 0


def test_decimal_third():
    d = decimal_digits(Fraction(1, 3), 5)
    assert d.digits == (3,) * 5
    assert d.remainder == Fraction(1, 3 * 10 ** 5)


def test_decimal_range():
    with pytest.raises(OutOfRange):
        decimal_digits(1, 3)


@given(st.fractions(min_value=0, max_value=1, max_denominator=10 ** 6).filter(lambda x: x < 1),
       st.integers(1, 30))
def test_decimal_identity(x, n):
    d = decimal_digits(x, n)
    assert d.partial + d.remainder == x
    assert 0 <= d.remainder < Fraction(1, 10 ** n)
    assert (list(d.digits), d.remainder) == oracles.long_division(x.numerator, x.denominator, n)


def test_render_decimal_integer_part():
    assert render_decimal(Fraction(-7, 4), 3) == "-1.750"


def test_cf_examples():
    assert cf_value([1, 2, 2, 2]) == Fraction(17, 12)
    assert cf_value([5]) == 5
    assert rational_to_cf(17, 12) == [1, 2, 2, 2]
    assert rational_to_cf(7, 1) == [7]


def test_cf_invalid():
    with pytest.raises(InvalidQuotient):
        cf_convergents([])
    with pytest.raises(InvalidQuotient):
        cf_convergents([1, 0])


@given(st.lists(st.integers(1, 50), min_size=1, max_size=12), st.integers(-20, 20))
def test_convergents_equal_fold(tail, a0):
    a = [a0] + tail
    assert cf_value(a) == oracles.cf_fold(a)
    p, q = cf_convergents(a)
    for n in range(1, len(a)):
        assert p[n] * q[n - 1] - p[n - 1] * q[n] == (-1) ** (n - 1)


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(1, 10 ** 6))
def test_cf_round_trip(h, k):
    assert cf_value(rational_to_cf(h, k)) == Fraction(h, k)


def test_euclid_remainders():
    assert euclid_remainders(17, 12) == [12, 5, 2, 1, 0]


def test_sqrt2_digits():
    assert cf_digits_of_real(surd_oracle(0, 2, 1), 6) == [1, 2, 2, 2, 2, 2]


def test_rational_oracle_terminates():
    assert cf_digits_of_real(rational_oracle(Fraction(17, 12)), 4) == [1, 2, 2, 2]
    assert cf_digits_of_real(rational_oracle(Fraction(17, 12)), 9) == [1, 2, 2, 2]


def test_term_oracle():
    assert cf_digits_of_real(term_oracle("[[1+1]---[1+1]]"), 8) == [1] + [2] * 7


def test_surd_oracle_encloses():
    lo, hi = surd_oracle(1, 5, 2)(80)
    assert lo <= hi and lo * lo - lo <= 1 <= hi * hi - hi


def test_baseb_examples():
    assert baseb_to_rational(parse_baseb("0.0425", 10)) == Fraction(17, 400)
    assert baseb_to_rational(parse_baseb("1.1", 2)) == Fraction(3, 2)
    e, done = rational_to_baseb(1, 3, 10, 4)
    assert e.fraction == (3, 3, 3, 3) and not done


def test_baseb_errors():
    with pytest.raises(DigitOutOfRange):
        parse_baseb("0.2", 2)
    with pytest.raises(BaseOutOfRange):
        rational_to_baseb(1, 2, 1, 3)


@given(st.sampled_from([2, 3, 10, 16]), st.integers(-10 ** 4, 10 ** 4), st.integers(0, 6))
def test_baseb_round_trip(b, p, n):
    q = b ** n
    e, done = rational_to_baseb(p, q, b, n + 1)
    assert done and baseb_to_rational(e) == Fraction(p, q)
    assert baseb_to_rational(parse_baseb(str(e), b)) == Fraction(p, q)


@given(st.integers(1, 500), st.integers(1, 500), st.sampled_from([2, 3, 10, 16]))
def test_terminates_and_period(p, q, b):
    pre, per = period(p, q, b)
    assert terminates(p, q, b) == (per == 0)
    e, done = rational_to_baseb(p, q, b, 64)
    assert done == terminates(p, q, b) or len(e.fraction) == 64


def test_gap_examples():
    r = bbe_gap_check(10, 3, 6)
    assert r.confirmed and r.witness is None and r.by_enumeration and r.by_arithmetic
    assert bbe_gap_check(2, 5, 10).confirmed
    with pytest.raises(NotCoprime):
        bbe_gap_check(10, 5, 3)
    with pytest.raises(NotPrime):
        bbe_gap_check(10, 9, 3)
