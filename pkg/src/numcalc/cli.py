"""``numcalc`` command line.

Exit status: 0 on success, 1 on a domain failure (invalid proof, evaluation
error, undecided comparison, ledger drift), 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import __version__, calculus, errata, farey, numtheory, prover, sampling, semantics
from .syntax import ParseError, parse_formula, parse_term, render

JSON_VERSION = 1


class UsageError(Exception):
    pass


class DomainFailure(Exception):
    pass


# ---------------------------------------------------------------- helpers

def _config(args) -> semantics.EvalConfig:
    if args.precision is None:
        return semantics.EvalConfig.from_env()
    return semantics.EvalConfig(precision=args.precision,
                                max_precision=max(4096, args.precision))


def _emit(args, text: str, payload) -> None:
    if args.format == "json":
        if isinstance(payload, dict):
            payload = {"version": JSON_VERSION, **payload}
        print(json.dumps(payload, indent=None, sort_keys=False))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"not a rational number: {text!r}") from e


def _system(args) -> calculus.SystemDef:
    return calculus.system(args.system)


# ---------------------------------------------------------------- commands

def cmd_parse(args):
    f = parse_formula(args.text)
    _emit(args, render(f), {"input": args.text, "formula": render(f), "type": type(f).__name__})


def cmd_eval(args):
    cfg = _config(args)
    t = parse_term(args.term)
    v = semantics.evaluate(t, cfg)
    if args.format == "json":
        _emit(args, "", semantics.value_json(t, cfg, args.digits or 30))
    elif args.digits is not None:
        _emit(args, semantics.decimal_string(t, args.digits, cfg), None)
    elif isinstance(v, Fraction):
        _emit(args, str(v), None)
    else:
        _emit(args, semantics.decimal_string(t, 30, cfg), None)


def cmd_compare(args):
    order = semantics.compare(parse_term(args.left), parse_term(args.right), _config(args))
    _emit(args, order.value, {"left": args.left, "right": args.right, "order": order.value})
    if order is semantics.Order.UNKNOWN:
        raise DomainFailure("comparison undecided at the precision limit")


def cmd_normalize(args):
    t = semantics.normalize(parse_term(args.term))
    _emit(args, str(t), {"input": args.term, "normal": str(t)})


def cmd_enumerate(args):
    sysd = _system(args)
    items = prover.enumerate_numbers(sysd, args.max_tokens, certify=args.certify)
    if args.limit is not None:
        items = items[:args.limit]
    if args.certify:
        rows = [(str(c.term), c.proof is not None) for c in items]
        text = "\n".join(f"{t}\t{'certified' if ok else 'uncertified'}" for t, ok in rows)
        payload = {"system": sysd.name, "terms": [{"term": t, "certified": ok} for t, ok in rows]}
    else:
        text = "\n".join(str(t) for t in items)
        payload = {"system": sysd.name, "terms": [str(t) for t in items]}
    _emit(args, text, payload)


def cmd_check(args):
    try:
        proof = prover.load_proof(args.path)
    except OSError as e:
        raise UsageError(str(e)) from e
    rep = prover.check_proof(proof, use_hints=not args.no_hints)
    if args.format == "json":
        _emit(args, "", rep.to_json())
    else:
        _emit(args, rep.render_text(verbose=args.verbose), None)
    if not rep.valid:
        raise DomainFailure(rep.summary())


def cmd_search(args):
    sysd = _system(args)
    res = prover.search(sysd, seeds=args.given or None, depth=args.depth,
                        budget=args.budget, max_tokens=args.max_tokens)
    if args.target:
        target = parse_formula(args.target, allow_meta=False)
        if target not in res:
            _emit(args, f"not found (complete: {'yes' if res.complete else 'no'})",
                  {"system": sysd.name, "target": render(target), "found": False,
                   "complete": res.complete})
            raise DomainFailure("target not derived")
        proof = res.derivation(target)
        _emit(args, proof.render(), {"system": sysd.name, "target": render(target),
                                     "found": True, "complete": res.complete,
                                     "proof": proof.render()})
        return
    facts = [render(f) for f in res.facts]
    lines = facts + [f"# {len(facts)} facts, complete: {'yes' if res.complete else 'no'}"]
    _emit(args, "\n".join(lines), {"system": sysd.name, "complete": res.complete, "facts": facts})


def cmd_farey(args):
    if args.cell:
        k, pos = args.cell
        text = f"{farey.top(k, pos)}/{farey.bot(k, pos)}"
        _emit(args, text, {"row": k, "position": pos, "top": farey.top(k, pos),
                           "bot": farey.bot(k, pos)})
        return
    if args.row is None:
        raise UsageError("farey needs --row K or --cell K POS")
    cells = farey.row(args.row)
    _emit(args, " ".join(f"{p}/{q}" for p, q in cells),
          {"row": args.row, "cells": [[p, q] for p, q in cells]})
    if args.plot:
        from .plotting import plot_farey
        plot_farey(args.row, args.plot)


def _convergent_rows(quotients):
    p, q = numtheory.cf_convergents(quotients)
    return [[a, b] for a, b in zip(p, q)]


def _oracle(text: str, cfg):
    """sqrtD, surd:P,D,Q, a rational p/q, or a ground term."""
    m = re.fullmatch(r"sqrt(\d+)", text)
    if m:
        return numtheory.surd_oracle(0, int(m.group(1)), 1)
    m = re.fullmatch(r"surd:(-?\d+),(\d+),(-?\d+)", text)
    if m:
        return numtheory.surd_oracle(*map(int, m.groups()))
    if re.fullmatch(r"-?\d+(/\d+)?", text):
        return numtheory.rational_oracle(_rational(text))
    return numtheory.term_oracle(parse_term(text), cfg)


def _fmt_cf(a) -> str:
    return f"[{a[0]}" + ("; " + ", ".join(map(str, a[1:])) if len(a) > 1 else "") + "]"


def cmd_cf(args):
    if args.cf_command == "from-rational":
        x = _rational(args.value)
        a = numtheory.rational_to_cf(x.numerator, x.denominator)
        _emit(args, _fmt_cf(a), {"value": str(x), "quotients": a,
                                 "convergents": _convergent_rows(a)})
    elif args.cf_command == "digits":
        oracle = _oracle(args.value, _config(args))
        a = numtheory.cf_digits_of_real(oracle, args.n)
        _emit(args, _fmt_cf(a), {"value": args.value, "quotients": a,
                                 "terminated": len(a) < args.n,
                                 "convergents": _convergent_rows(a)})
        if args.plot:
            from .plotting import plot_convergents
            plot_convergents(oracle, a, args.plot, label=args.value)
    else:  # convergents
        try:
            a = [int(x) for x in args.value.split(",")]
        except ValueError as e:
            raise UsageError("quotients must be comma separated integers") from e
        rows = _convergent_rows(a)
        _emit(args, "\n".join(f"{p}/{q}" for p, q in rows), {"quotients": a, "convergents": rows})


def cmd_baseb(args):
    if args.baseb_command == "encode":
        x = _rational(args.value)
        exp, done = numtheory.rational_to_baseb(x.numerator, x.denominator, args.base, args.len)
        text = str(exp) + ("" if done else "...")
        _emit(args, text, {"value": str(x), "base": args.base, "expansion": str(exp),
                           "terminated": done,
                           "terminates": numtheory.terminates(x.numerator, x.denominator, args.base)})
    elif args.baseb_command == "decode":
        x = numtheory.baseb_to_rational(numtheory.parse_baseb(args.value, args.base))
        _emit(args, str(x), {"expansion": args.value, "base": args.base, "value": str(x)})
    else:
        r = numtheory.bbe_gap_check(args.base, args.q, args.len)
        text = (f"1/{r.q} has no base-{r.base} expansion of at most {r.max_len} places: "
                f"{'confirmed' if r.confirmed else 'refuted'} "
                f"(enumeration {'yes' if r.by_enumeration else 'no'}, "
                f"divisibility {'yes' if r.by_arithmetic else 'no'}, {r.candidates} strings)")
        _emit(args, text, {"base": r.base, "q": r.q, "max_len": r.max_len,
                           "confirmed": r.confirmed, "by_enumeration": r.by_enumeration,
                           "by_arithmetic": r.by_arithmetic, "witness": r.witness,
                           "candidates": r.candidates})
        if not r.confirmed:
            raise DomainFailure("gap refuted")


def cmd_decimal(args):
    x = _rational(args.value)
    sign, whole, ext = numtheory.decimal_expansion(x, args.n)
    text = numtheory.render_decimal(x, args.n)
    if args.verbose:
        text += f"\nremainder {ext.remainder}"
    _emit(args, text, {"value": str(x), "digits": list(ext.digits), "rendered": text,
                       "partial": str(sign * (whole + ext.partial)),
                       "remainder": str(ext.remainder)})


def cmd_errata(args):
    if args.regenerate:
        path = errata.ledger_path()
        new = errata.refresh(errata.ledger_text())
        with open(str(path), "w", encoding="utf-8") as fh:
            fh.write(new)
        print(f"regenerated {', '.join(errata.GENERATED)}")
        return
    if args.check:
        bad = errata.drift()
        if bad:
            print("ledger out of date: " + ", ".join(bad))
            raise DomainFailure("ledger drift")
        print("ledger matches checker output")
        return
    text = errata.ledger_text()
    if args.only:
        text = errata.section(text, args.only)
    sys.stdout.write(text)


def cmd_manifest(args):
    print(calculus.manifest(args.system))


def cmd_soundness(args):
    res = sampling.soundness_run(args.system, args.n, args.seed)
    text = (f"{res['accepted']}/{res['steps']} synthesized steps accepted, "
            f"{res['rejected']}/{res['mutants']} mutants rejected (seed {args.seed}; "
            "accepted mutants may be valid instances)")
    _emit(args, text, res)
    if res["accepted"] != res["steps"]:
        raise DomainFailure("a synthesized valid step was rejected")


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", default="R", choices=["N", "Z", "Q", "R"])
    common.add_argument("--precision", type=int, default=None,
                        help="working precision in bits (default 128 or $NUMCALC_PRECISION)")
    common.add_argument("--format", default="text", choices=["text", "json"])
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="numcalc", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"numcalc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("parse", cmd_parse, "parse a term or formula and print its canonical form")
    p.add_argument("text")
    p = add("eval", cmd_eval, "evaluate a ground term")
    p.add_argument("term")
    p.add_argument("--digits", type=int, default=None)
    p = add("compare", cmd_compare, "order two ground terms")
    p.add_argument("left")
    p.add_argument("right")
    p = add("normalize", cmd_normalize, "make bracket grouping explicit")
    p.add_argument("term")
    p = add("enumerate", cmd_enumerate, "list number terms by size")
    p.add_argument("--max-tokens", type=int, default=7)
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--certify", action="store_true", help="attach search proofs")
    p = add("check", cmd_check, "check a proof file")
    p.add_argument("path")
    p.add_argument("--no-hints", action="store_true")
    p = add("search", cmd_search, "bounded forward chaining")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--budget", type=int, default=prover.DEFAULT_SEARCH_BUDGET)
    p.add_argument("--max-tokens", type=int, default=12)
    p.add_argument("--given", action="append", help="seed formula (repeatable)")
    p.add_argument("--target", default=None, help="print a derivation of this formula")
    p = add("farey", cmd_farey, "top/bottom table rows")
    p.add_argument("--row", type=int, default=None)
    p.add_argument("--cell", type=int, nargs=2, metavar=("K", "POS"))
    p.add_argument("--plot", default=None, metavar="PATH")

    p = add("cf", cmd_cf, "continued fractions")
    cf = p.add_subparsers(dest="cf_command", required=True)
    q = cf.add_parser("from-rational", parents=[common])
    q.add_argument("value")
    q = cf.add_parser("digits", parents=[common])
    q.add_argument("value", help="sqrtD, surd:P,D,Q, p/q or a ground term")
    q.add_argument("--n", type=int, default=10)
    q.add_argument("--plot", default=None, metavar="PATH")
    q = cf.add_parser("convergents", parents=[common])
    q.add_argument("value", help="comma separated quotients")

    p = add("baseb", cmd_baseb, "base-b expansions")
    bb = p.add_subparsers(dest="baseb_command", required=True)
    q = bb.add_parser("encode", parents=[common])
    q.add_argument("value")
    q.add_argument("--base", type=int, default=10)
    q.add_argument("--len", type=int, default=16)
    q = bb.add_parser("decode", parents=[common])
    q.add_argument("value")
    q.add_argument("--base", type=int, default=10)
    q = bb.add_parser("gap", parents=[common])
    q.add_argument("--base", type=int, required=True)
    q.add_argument("--q", type=int, required=True)
    q.add_argument("--len", type=int, default=4)

    p = add("decimal", cmd_decimal, "decimal digits of a rational in a fixed number of places")
    p.add_argument("value")
    p.add_argument("--n", type=int, default=10)
    p = add("errata", cmd_errata, "print the errata ledger")
    p.add_argument("--check", action="store_true", help="compare with fresh checker output")
    p.add_argument("--regenerate", action="store_true", help="rewrite the generated blocks")
    p.add_argument("--only", choices=list(errata.GENERATED), default=None)
    add("manifest", cmd_manifest, "JSON manifest of a system")
    p = add("soundness", cmd_soundness, "checker run on random valid steps and mutants")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.fn(args)
    except (UsageError, ParseError, prover.ProofSyntaxError, calculus.UnknownSystem) as e:
        print(f"numcalc: error: {e}", file=sys.stderr)
        return 2
    except (DomainFailure, semantics.EvalError, ArithmeticError, ValueError,
            farey.PositionOutOfRange, prover.MatchBudgetExceeded) as e:
        if not isinstance(e, DomainFailure):
            print(f"numcalc: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
