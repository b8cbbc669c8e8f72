"""Formal number calculi: syntax, schema matching, proof checking and semantics."""

__version__ = "0.1.0"

from .calculus import system  # noqa: E402
from .prover import check_proof, load_proof, search  # noqa: E402
from .semantics import compare, evaluate, normalize  # noqa: E402
from .syntax import parse_formula, parse_term  # noqa: E402

__all__ = ["system", "check_proof", "load_proof", "search", "compare", "evaluate",
           "normalize", "parse_formula", "parse_term", "__version__"]
