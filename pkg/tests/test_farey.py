from fractions import Fraction
from math import gcd

import pytest

import oracles
from numcalc.farey import (
    PositionOutOfRange, bot, index_term, refine_step, row, row_fractions, row_length, top,
)
from numcalc.semantics import DomainError
from numcalc.syntax import parse_formula


def test_row1():
    assert row(1) == [(0, 1), (1, 1)]


def test_row2():
    assert row(2) == [(0, 1), (1, 2), (1, 1)]
    assert row_fractions(2) == [0, Fraction(1, 2), 1]


def test_row3():
    assert [f"{p}/{q}" for p, q in row(3)] == ["0/1", "1/3", "1/2", "2/3", "1/1"]


def test_top_bot():
    assert (top(3, 2), bot(3, 2)) == (1, 3)


@pytest.mark.parametrize("k,pos", [(0, 1), (2, 0), (2, 4), (3, 6)])
def test_out_of_range(k, pos):
    with pytest.raises(PositionOutOfRange):
        top(k, pos)


@pytest.mark.parametrize("k", range(1, 13))
def test_rows_equal_mediant_tree(k):
    assert row(k) == oracles.mediant_rows(k)[k - 1]
    assert len(row(k)) == row_length(k)


@pytest.mark.parametrize("k", range(1, 12))
def test_row_invariants(k):
    cells = row(k)
    assert all(gcd(p, q) == 1 for p, q in cells)
    assert all(p * s - q * r == -1 for (p, q), (r, s) in zip(cells, cells[1:]))
    assert row(k + 1)[::2] == cells


def test_index_term():
    assert index_term(1) == "1" and index_term(3) == "[1+1+1]"


LEVEL1 = ("([[1+1]+h[T_[1+1]_[1+1]_--B_[1+1]_[1+1]_]] = "
       "[[[1+1]+hT_[1+1]_[1+1]_]-iB_[1+1]_[1+1]_])")


def test_refine_level1_instance():
    assert refine_step("[1+1]", 1, 2, 2) == parse_formula(LEVEL1, allow_meta=False)


def test_refine_level4_shape():
    from numcalc.syntax import render
    text = render(refine_step("[1+1]", 4, 2, 2))
    text = text.replace("T_[1+1]_[1+1]_", str(top(2, 2))).replace("B_[1+1]_[1+1]_", "[1+1]")
    assert parse_formula(text) == parse_formula("([[1+1]++++[1--[1+1]]] = [[[1+1]++++1]----[1+1]])")


def test_refine_domain():
    with pytest.raises(DomainError):
        refine_step("1", 1, 2, 2)
    with pytest.raises(PositionOutOfRange):
        refine_step("[1+1]", 1, 2, 9)
