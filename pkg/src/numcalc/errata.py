"""The errata ledger: hand notes plus checker output for Z, Q and R.

The ledger is a markdown file shipped as package data. Each checked system
owns a block between ``<!-- BEGIN generated:X -->`` and
``<!-- END generated:X -->``; everything outside the blocks is written by
hand. :func:`refresh` rewrites the blocks from the current checker.
"""
from __future__ import annotations

import re
from importlib import resources

from .prover import CheckReport, check_proof, load_proof

__all__ = [
    "GENERATED", "fixture_path", "ledger_text", "section", "generate", "refresh", "drift",
]

GENERATED = ("Z", "Q", "R")
_FIXTURES = {"N": "n_system.proof", "Z": "z_system.proof",
             "Q": "q_system.proof", "R": "r_system.proof"}


def fixture_path(name: str):
    """Path of the packaged proof fixture for system ``name``."""
    return resources.files("numcalc") / "data" / "fixtures" / _FIXTURES[name.upper()]


def ledger_path():
    return resources.files("numcalc") / "data" / "errata.md"


def ledger_text() -> str:
    return ledger_path().read_text(encoding="utf-8")


def _block(name: str):
    return re.compile(rf"(<!-- BEGIN generated:{name} -->\n)(.*?)(<!-- END generated:{name} -->)",
                      re.S)


def section(text: str, name: str) -> str:
    """The generated block for ``name`` in a ledger text."""
    m = _block(name).search(text)
    if m is None:
        raise KeyError(f"ledger has no generated block for {name}")
    return m.group(2)


def report(name: str) -> CheckReport:
    return check_proof(load_proof(fixture_path(name)))


def generate(name: str) -> str:
    return report(name).render_errata()


def refresh(text: str, names=GENERATED) -> str:
    for name in names:
        body = generate(name)
        text = _block(name).sub(lambda m: m.group(1) + body + m.group(3), text)
    return text


def drift(text: str | None = None, names=GENERATED) -> list:
    """Systems whose committed block differs from fresh checker output."""
    text = ledger_text() if text is None else text
    return [n for n in names if section(text, n) != generate(n)]
