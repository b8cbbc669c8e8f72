"""Figures for the CLI ``--plot`` flags. matplotlib is imported lazily."""
from __future__ import annotations

from fractions import Fraction


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def plot_farey(k: int, path: str) -> None:
    """Rows 1..k of the table as points, row index on the vertical axis."""
    from . import farey

    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 0.4 * k + 2))
    for j in range(1, k + 1):
        xs = [float(x) for x in farey.row_fractions(j)]
        ax.plot(xs, [j] * len(xs), "|", markersize=10, color="C0")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(k + 0.5, 0.5)
    ax.set_xlabel("top / bot")
    ax.set_ylabel("row")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_convergents(oracle, quotients, path: str, label: str = "x") -> None:
    """|x - p_n/q_n| next to the bound 1/(q_n q_{n+1}), log scale."""
    from . import numtheory

    p, q = numtheory.cf_convergents(quotients)
    lo, hi = oracle(4 * max(64, q[-1].bit_length() * 4))
    x = (Fraction(lo) + Fraction(hi)) / 2
    err = [abs(x - Fraction(a, b)) for a, b in zip(p, q)]
    bound = [Fraction(1, q[i] * q[i + 1]) for i in range(len(q) - 1)]
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4))
    ns = range(len(err))
    ax.semilogy([n for n in ns if err[n]], [float(e) for e in err if e], "o-", label="error")
    ax.semilogy(range(len(bound)), [float(b) for b in bound], "s--", label="1/(q_n q_n+1)")
    ax.set_xlabel("n")
    ax.set_title(f"convergents of {label}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
