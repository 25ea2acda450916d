"""Command-line front end.

Boolean queries exit 0 for yes and 1 for no; transformations print the
canonical document on standard output. Malformed input, alphabet
mismatches and violated preconditions exit 2 with a message on standard
error. Specification operands may be ``nf`` documents, ``naa`` documents
(read through `naa_to_nf`) or guarded ``hmlr`` documents (normalized).
"""

from __future__ import annotations

import argparse
import sys

from .audit import audit, SHIPPED
from .compose import (
    Naa, compose, naa_to_nf, nf_to_naa, quotient_bounded, quotient_nf_det, unit,
)
from .errors import SpecTheoryError
from .generators import GenConfig
from .logic import Hmlr, check_hml
from .models import Lts, as_alphabet, bisimilar, lts_compose
from .specs import (
    NormalForm, bottom, chi, conj, disj, leq, mod_equiv, normalize, satisfies, top,
)
from .textio import parse, serialize


class UsageError(SpecTheoryError):
    pass


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path, *kinds):
    doc = parse(_read(path))
    if not isinstance(doc, kinds):
        names = "/".join(k.__name__ for k in kinds)
        raise UsageError(f"{path}: expected {names}, got {type(doc).__name__}")
    return doc


def _lts(path) -> Lts:
    return _load(path, Lts)


def _spec(path) -> NormalForm:
    doc = _load(path, NormalForm, Naa, Hmlr)
    if isinstance(doc, Naa):
        return naa_to_nf(doc)
    if isinstance(doc, Hmlr):
        return normalize(doc)
    return doc


def _emit(obj):
    sys.stdout.write(serialize(obj))
    return 0


def _answer(yes: bool) -> int:
    print("yes" if yes else "no")
    return 0 if yes else 1


def _cmd(args) -> int:
    c = args.command
    if c == "bisim":
        return _answer(bisimilar(_lts(args.m1), _lts(args.m2)) is not None)
    if c == "chi":
        return _emit(chi(_lts(args.m)))
    if c == "check":
        return _answer(check_hml(_lts(args.m), _load(args.h, Hmlr)))
    if c == "sat":
        return _answer(satisfies(_lts(args.m), _spec(args.s)))
    if c == "refine":
        return _answer(leq(_spec(args.s1), _spec(args.s2)))
    if c == "equiv":
        return _answer(mod_equiv(_spec(args.s1), _spec(args.s2)))
    if c == "normalize":
        return _emit(normalize(_load(args.h, Hmlr)))
    if c == "and":
        return _emit(conj(_spec(args.s1), _spec(args.s2)))
    if c == "or":
        return _emit(disj(_spec(args.s1), _spec(args.s2)))
    if c == "top":
        return _emit(top(args.alphabet))
    if c == "bot":
        return _emit(bottom(args.alphabet))
    if c == "compose":
        return _emit(compose(_spec(args.s1), _spec(args.s2)))
    if c == "quotient":
        s3, s1 = _spec(args.s3), _spec(args.s1)
        if args.bounded is not None:
            if args.bounded < 1:
                raise UsageError("--bounded needs k >= 1")
            return _emit(quotient_bounded(s3, s1, args.bounded))
        return _emit(quotient_nf_det(s3, s1))
    if c == "to-naa":
        return _emit(nf_to_naa(_spec(args.s)))
    if c == "to-dmts":
        return _emit(naa_to_nf(_load(args.a, Naa)))
    if c == "unit":
        return _emit(unit(args.alphabet))
    if c == "lts-compose":
        return _emit(lts_compose(_lts(args.m1), _lts(args.m2)))
    if c == "audit":
        size = len(args.alphabet) if args.alphabet else 2
        if args.alphabet and args.alphabet.labels != ("a", "b", "c")[:size]:
            raise UsageError("--alphabet must be a prefix of a,b,c")
        try:
            cfg = GenConfig(seed=args.seed, cases=args.cases,
                            max_states=args.max_states, alphabet_size=size)
        except ValueError as e:
            raise UsageError(str(e)) from None
        report = audit(cfg, SHIPPED)
        sys.stdout.write(report.to_json() if args.json else report.to_text())
        return 0 if all(r.passed for r in report.laws if r.asserted) else 1
    raise UsageError(f"unknown command {c!r}")


def _alphabet(text):
    try:
        return as_alphabet(text)
    except SpecTheoryError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spectheory", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, *operands, help=None):
        sp = sub.add_parser(name, help=help)
        for o in operands:
            sp.add_argument(o)
        return sp

    cmd("bisim", "m1", "m2", help="are two models bisimilar")
    cmd("chi", "m", help="characteristic normal form of a model")
    cmd("check", "m", "h", help="fixed-point model check of a formula system")
    cmd("sat", "m", "s", help="does a model satisfy a specification")
    cmd("refine", "s1", "s2", help="does s1 refine s2")
    cmd("equiv", "s1", "s2", help="are two specifications equivalent")
    cmd("normalize", "h", help="normal form of a guarded formula system")
    cmd("and", "s1", "s2", help="conjunction")
    cmd("or", "s1", "s2", help="disjunction")
    for name in ("top", "bot", "unit"):
        cmd(name).add_argument("--alphabet", type=_alphabet, required=True)
    cmd("compose", "s1", "s2", help="parallel composition")
    q = cmd("quotient", "s3", "s1", help="quotient of s3 by s1")
    g = q.add_mutually_exclusive_group()
    g.add_argument("--det", action="store_true", help="deterministic construction (default)")
    g.add_argument("--bounded", type=int, metavar="K", help="join over the k-variable family")
    cmd("to-naa", "s", help="acceptance automaton of a specification")
    cmd("to-dmts", "a", help="normal form of an acceptance automaton")
    cmd("lts-compose", "m1", "m2", help="synchronous product of models")
    a = cmd("audit", help="run the law suites and classify the theory")
    a.add_argument("--seed", type=int, default=GenConfig.seed)
    a.add_argument("--cases", type=int, default=GenConfig.cases)
    a.add_argument("--max-states", type=int, default=GenConfig.max_states)
    a.add_argument("--alphabet", type=_alphabet, default=None)
    a.add_argument("--json", action="store_true", help="machine-readable report")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return _cmd(args)
    except (SpecTheoryError, OSError) as e:
        print(f"spectheory: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
