"""The top/bottom (numerator/denominator) table of the real system.

Row 1 is ``0/1 1/1``. Row ``k`` copies row ``k-1`` into its odd positions and
puts the sum of the two neighbouring cells (the mediant) into each even
position, so row ``k`` has ``2**(k-1) + 1`` cells.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .syntax import Term, parse_formula, parse_term

__all__ = [
    "PositionOutOfRange", "row", "top", "bot", "row_fractions", "row_length",
    "index_term", "refine_step",
]


class PositionOutOfRange(IndexError):
    pass


def row_length(k: int) -> int:
    return 2 ** (k - 1) + 1


@lru_cache(maxsize=None)
def _row(k: int) -> tuple:
    if k == 1:
        return ((0, 1), (1, 1))
    prev = _row(k - 1)
    out = []
    for (p, q), (p2, q2) in zip(prev, prev[1:]):
        out.append((p, q))
        out.append((p + p2, q + q2))
    out.append(prev[-1])
    return tuple(out)


def _check(k: int, pos: int | None = None):
    if not isinstance(k, int) or k < 1:
        raise PositionOutOfRange(f"row index {k!r} must be a positive integer")
    if pos is not None and not (isinstance(pos, int) and 1 <= pos <= row_length(k)):
        raise PositionOutOfRange(f"position {pos!r} outside row {k} (1..{row_length(k)})")


def row(k: int) -> list:
    """Cells ``(top, bot)`` of row ``k``, left to right."""
    _check(k)
    return list(_row(k))


def top(k: int, pos: int) -> int:
    _check(k, pos)
    return _row(k)[pos - 1][0]


def bot(k: int, pos: int) -> int:
    _check(k, pos)
    return _row(k)[pos - 1][1]


def row_fractions(k: int) -> list:
    return [Fraction(p, q) for p, q in row(k)]


def index_term(n: int) -> str:
    """Unary index term: 1, [1+1], [1+1+1], ..."""
    if n < 1:
        raise ValueError("index terms start at 1")
    return "1" if n == 1 else "[" + "+".join("1" * n) + "]"


def _term_text(a) -> str:
    if isinstance(a, Term):
        return str(a)
    return str(parse_term(a))


def refine_step(a, n: int, k: int, pos: int, cfg=None):
    """Instance of the refinement law for cell ``(k, pos)`` at level ``n``.

    ``n = 1`` keeps the lockstep words ``h``/``i`` exactly as the axiom
    states them; ``n >= 2`` spells them out as runs of ``n`` signs.
    """
    from . import semantics

    if n < 1:
        raise ValueError("level must be at least 1")
    _check(k, pos)
    text = _term_text(a)
    if semantics.compare(parse_term(text), parse_term("1"), cfg) is not semantics.Order.GREATER:
        raise semantics.DomainError(f"refinement needs 1 < {text}")
    ki, ci = index_term(k), index_term(pos)
    t, b = f"T_{ki}_{ci}_", f"B_{ki}_{ci}_"
    up, down = ("+h", "-i") if n == 1 else ("+" * n, "-" * n)
    return parse_formula(f"([{text}{up}[{t}--{b}]] = [[{text}{up}{t}]{down}{b}])",
                         allow_meta=False)
