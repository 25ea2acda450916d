"""Line-oriented text formats for every object kind.

Each document starts with a ``kind:`` line (``lts``, ``hmlr``, ``nf``,
``naa`` or ``report``) followed by ``key: value`` lines. Blank lines and
lines starting with ``;`` are ignored. Serialization is canonical: sets are
sorted, labels follow the declared alphabet order, so equal structures
print byte-identically.

    kind: nf
    alphabet: a b
    vars: x y
    initials: x
    must: x = a:y b:x
    box: x a = y
    box: x b = x
"""

from __future__ import annotations

import json
import re

from .errors import SpecTheoryError, UndeclaredName, ValidationError
from .logic import (
    FALSE, TRUE, And, Box, Diamond, Hmlr, Or, Var,
)
from .models import Alphabet, Lts
from .specs import NormalForm
from .compose import Naa

NAME_RE = re.compile(r"[A-Za-z0-9_.'|<>#+\-]+\Z")
KINDS = ("lts", "hmlr", "nf", "naa", "report")


class ParseError(SpecTheoryError):
    def __init__(self, msg, line=None, col=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + msg)
        self.line = line
        self.col = col


# -- serialization -----------------------------------------------------------

def _names(xs):
    return " ".join(xs)


def _pairs_text(s, alphabet):
    return " ".join(f"{a}:{y}" for (a, y) in sorted(s, key=lambda e: (alphabet.index(e[0]), e[1])))


def _set_key(s, alphabet):
    return sorted((alphabet.index(a), y) for (a, y) in s)


def serialize(obj) -> str:
    if isinstance(obj, Lts):
        return _ser_lts(obj)
    if isinstance(obj, Hmlr):
        return _ser_hmlr(obj)
    if isinstance(obj, NormalForm):
        return _ser_nf(obj)
    if isinstance(obj, Naa):
        return _ser_naa(obj)
    from .audit import AuditReport
    if isinstance(obj, AuditReport):
        return _ser_report(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _ser_lts(m: Lts) -> str:
    al = m.alphabet
    lines = ["kind: lts", f"alphabet: {_names(al)}", f"states: {_names(sorted(m.states))}",
             f"initial: {m.initial}"]
    for (p, a, q) in sorted(m.transitions, key=lambda t: (t[0], al.index(t[1]), t[2])):
        lines.append(f"trans: {p} {a} {q}")
    return "\n".join(lines) + "\n"


def format_formula(f) -> str:
    return str(f)


def _ser_hmlr(h: Hmlr) -> str:
    lines = ["kind: hmlr", f"alphabet: {_names(h.alphabet)}", f"vars: {_names(h.vars)}",
             f"initials: {_names(sorted(h.initials))}"]
    for x, body in h.decl:
        lines.append(f"decl: {x} = {format_formula(body)}")
    return "\n".join(lines) + "\n"


def _ser_nf(s: NormalForm) -> str:
    al = s.alphabet
    lines = ["kind: nf", f"alphabet: {_names(al)}", f"vars: {_names(sorted(s.vars))}",
             f"initials: {_names(sorted(s.initials))}"]
    for x in sorted(s.vars):
        for n in sorted(s.diamonds[x], key=lambda n: _set_key(n, al)):
            lines.append(f"must: {x} = {_pairs_text(n, al)}".rstrip())
        for a in al:
            ys = s.boxes[x][a]
            if ys:
                lines.append(f"box: {x} {a} = {_names(sorted(ys))}")
    return "\n".join(lines) + "\n"


def _ser_naa(a: Naa) -> str:
    al = a.alphabet
    lines = ["kind: naa", f"alphabet: {_names(al)}", f"states: {_names(sorted(a.states))}",
             f"initials: {_names(sorted(a.initials))}"]
    for s in sorted(a.states):
        for m in sorted(a.tran[s], key=lambda m: _set_key(m, al)):
            lines.append(f"accept: {s} = {_pairs_text(m, al)}".rstrip())
    return "\n".join(lines) + "\n"


def _ser_report(r) -> str:
    lines = ["kind: report", f"seed: {r.seed}", f"classification: {r.classification}",
             f"structure: {r.structure}",
             "flags: " + " ".join(f"{k}={r.flags[k]}" for k in ("L", "C", "Q")),
             f"caveat: {r.caveat}"]
    for law in r.laws:
        lines.append(
            f"law: {law.law_id} suite={law.suite} cases={law.cases} "
            f"failures={law.failures} asserted={'yes' if law.asserted else 'no'}"
        )
        if law.counterexample is not None:
            lines.append(f"cex: {law.law_id} = {json.dumps(law.counterexample)}")
    return "\n".join(lines) + "\n"


# -- parsing -----------------------------------------------------------------

def _lines(text):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", i, 1)
        key, _, value = line.partition(":")
        yield i, key.strip(), value.strip(), raw


def _name(tok, lineno, what="name"):
    if not NAME_RE.match(tok):
        raise ParseError(f"bad {what} {tok!r}", lineno)
    return tok


def _name_list(value, lineno):
    return [_name(t, lineno) for t in value.split()]


def parse(text: str):
    lines = list(_lines(text))
    if not lines or lines[0][1] != "kind":
        raise ParseError("document must start with 'kind:'", lines[0][0] if lines else 1, 1)
    kind = lines[0][2]
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}", lines[0][0])
    body = lines[1:]
    try:
        return {"lts": _parse_lts, "hmlr": _parse_hmlr, "nf": _parse_nf,
                "naa": _parse_naa, "report": _parse_report}[kind](body)
    except UndeclaredName:
        raise
    except ValidationError as e:
        raise ParseError(str(e)) from e


def _header(body, keys, lineno_default=1):
    """Collect single-occurrence header keys."""
    out = {}
    for lineno, key, value, _ in body:
        if key in keys:
            if key in out:
                raise ParseError(f"duplicate '{key}'", lineno)
            out[key] = (lineno, value)
    missing = [k for k in keys if k not in out and k != "initials"]
    if missing:
        raise ParseError(f"missing '{missing[0]}'", lineno_default)
    return out


def _check_keys(body, allowed):
    for lineno, key, _, _ in body:
        if key not in allowed:
            raise ParseError(f"unexpected key {key!r}", lineno, 1)


def _alphabet(hdr):
    lineno, value = hdr["alphabet"]
    try:
        return Alphabet(_name_list(value, lineno))
    except ValidationError as e:
        raise ParseError(str(e), lineno) from e


def _parse_lts(body):
    _check_keys(body, {"alphabet", "states", "initial", "trans"})
    hdr = _header(body, ("alphabet", "states", "initial"))
    al = _alphabet(hdr)
    states = _name_list(hdr["states"][1], hdr["states"][0])
    initial = hdr["initial"][1]
    if initial not in states:
        raise UndeclaredName("state", initial, f"line {hdr['initial'][0]}")
    trans = []
    for lineno, key, value, _ in body:
        if key != "trans":
            continue
        parts = value.split()
        if len(parts) != 3:
            raise ParseError("transition needs 'source label target'", lineno)
        p, a, q = parts
        if p not in states:
            raise UndeclaredName("state", p, f"line {lineno}")
        if a not in al:
            raise UndeclaredName("label", a, f"line {lineno}")
        if q not in states:
            raise UndeclaredName("state", q, f"line {lineno}")
        trans.append((p, a, q))
    return Lts(al, states, initial, trans)


def _split_def(value, lineno):
    lhs, eq, rhs = value.partition("=")
    if not eq:
        raise ParseError("expected '='", lineno)
    return lhs.split(), rhs.strip()


def _parse_pairs(text, lineno, al, names, what):
    out = []
    for tok in text.split():
        a, colon, y = tok.partition(":")
        if not colon:
            raise ParseError(f"expected 'label:{what}', got {tok!r}", lineno)
        if a not in al:
            raise UndeclaredName("label", a, f"line {lineno}")
        if y not in names:
            raise UndeclaredName(what, y, f"line {lineno}")
        out.append((a, y))
    return frozenset(out)


def _parse_nf(body):
    _check_keys(body, {"alphabet", "vars", "initials", "must", "box"})
    hdr = _header(body, ("alphabet", "vars", "initials"))
    al = _alphabet(hdr)
    vars = set(_name_list(hdr["vars"][1], hdr["vars"][0]))
    inits = _name_list(hdr["initials"][1], hdr["initials"][0]) if "initials" in hdr else []
    for x in inits:
        if x not in vars:
            raise UndeclaredName("variable", x, f"line {hdr['initials'][0]}")
    dia = {x: set() for x in vars}
    box = {x: {} for x in vars}
    for lineno, key, value, _ in body:
        if key == "must":
            lhs, rhs = _split_def(value, lineno)
            if len(lhs) != 1 or lhs[0] not in vars:
                raise UndeclaredName("variable", " ".join(lhs), f"line {lineno}")
            dia[lhs[0]].add(_parse_pairs(rhs, lineno, al, vars, "variable"))
        elif key == "box":
            lhs, rhs = _split_def(value, lineno)
            if len(lhs) != 2:
                raise ParseError("expected 'box: var label = targets'", lineno)
            x, a = lhs
            if x not in vars:
                raise UndeclaredName("variable", x, f"line {lineno}")
            if a not in al:
                raise UndeclaredName("label", a, f"line {lineno}")
            ys = rhs.split()
            for y in ys:
                if y not in vars:
                    raise UndeclaredName("variable", y, f"line {lineno}")
            box[x].setdefault(a, set()).update(ys)
    return NormalForm(al, vars, inits, dia, box)


def _parse_naa(body):
    _check_keys(body, {"alphabet", "states", "initials", "accept"})
    hdr = _header(body, ("alphabet", "states", "initials"))
    al = _alphabet(hdr)
    states = set(_name_list(hdr["states"][1], hdr["states"][0]))
    inits = _name_list(hdr["initials"][1], hdr["initials"][0]) if "initials" in hdr else []
    for s in inits:
        if s not in states:
            raise UndeclaredName("state", s, f"line {hdr['initials'][0]}")
    tran = {s: set() for s in states}
    for lineno, key, value, _ in body:
        if key == "accept":
            lhs, rhs = _split_def(value, lineno)
            if len(lhs) != 1 or lhs[0] not in states:
                raise UndeclaredName("state", " ".join(lhs), f"line {lineno}")
            tran[lhs[0]].add(_parse_pairs(rhs, lineno, al, states, "state"))
    return Naa(al, states, inits, tran)


_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")


def parse_formula(text, lineno=None, vars=None, alphabet=None):
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("bad token", lineno, pos + 1)
        toks.append((m.group(1), m.start(1) + 1))
        pos = m.end()
    i = 0

    def need():
        if i >= len(toks):
            raise ParseError("unexpected end of formula", lineno, len(text) + 1)
        return toks[i]

    def expr():
        nonlocal i
        tok, col = need()
        i += 1
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if tok != "(":
            raise ParseError(f"unexpected {tok!r}", lineno, col)
        op, ocol = need()
        i += 1
        if op in ("and", "or"):
            l = expr()
            r = expr()
            f = And(l, r) if op == "and" else Or(l, r)
        elif op in ("dia", "box"):
            a, acol = need()
            i += 1
            if alphabet is not None and a not in alphabet:
                raise UndeclaredName("label", a, f"line {lineno}, col {acol}")
            sub = expr()
            f = Diamond(a, sub) if op == "dia" else Box(a, sub)
        elif op == "var":
            x, xcol = need()
            i += 1
            if vars is not None and x not in vars:
                raise UndeclaredName("variable", x, f"line {lineno}, col {xcol}")
            f = Var(x)
        else:
            raise ParseError(f"unknown operator {op!r}", lineno, ocol)
        close, ccol = need()
        i += 1
        if close != ")":
            raise ParseError(f"expected ')', got {close!r}", lineno, ccol)
        return f

    f = expr()
    if i != len(toks):
        raise ParseError(f"trailing input {toks[i][0]!r}", lineno, toks[i][1])
    return f


def _parse_hmlr(body):
    _check_keys(body, {"alphabet", "vars", "initials", "decl"})
    hdr = _header(body, ("alphabet", "vars", "initials"))
    al = _alphabet(hdr)
    vars = _name_list(hdr["vars"][1], hdr["vars"][0])
    inits = _name_list(hdr["initials"][1], hdr["initials"][0]) if "initials" in hdr else []
    for x in inits:
        if x not in vars:
            raise UndeclaredName("variable", x, f"line {hdr['initials'][0]}")
    decl = {}
    for lineno, key, value, _ in body:
        if key != "decl":
            continue
        lhs, rhs = _split_def(value, lineno)
        if len(lhs) != 1 or lhs[0] not in vars:
            raise UndeclaredName("variable", " ".join(lhs), f"line {lineno}")
        if lhs[0] in decl:
            raise ParseError(f"duplicate declaration of {lhs[0]}", lineno)
        decl[lhs[0]] = parse_formula(rhs, lineno, set(vars), al)
    for x in vars:
        if x not in decl:
            raise ParseError(f"variable {x!r} has no declaration")
    return Hmlr(al, vars, inits, decl)


_LAW_RE = re.compile(
    r"(\S+) suite=(\S+) cases=(\d+) failures=(\d+) asserted=(yes|no)\Z"
)


def _parse_report(body):
    from .audit import AuditReport, LawResult

    _check_keys(body, {"seed", "classification", "structure", "flags", "caveat", "law", "cex"})
    hdr = _header(body, ("seed", "classification", "structure", "flags", "caveat"))
    try:
        seed = int(hdr["seed"][1])
    except ValueError:
        raise ParseError("seed must be an integer", hdr["seed"][0]) from None
    flags = {}
    for item in hdr["flags"][1].split():
        k, eq, v = item.partition("=")
        if not eq:
            raise ParseError(f"bad flag {item!r}", hdr["flags"][0])
        flags[k] = v
    laws = []
    cex = {}
    for lineno, key, value, _ in body:
        if key == "law":
            m = _LAW_RE.match(value)
            if not m:
                raise ParseError("bad law line", lineno)
            laws.append([m.group(1), m.group(2), int(m.group(3)), int(m.group(4)),
                         m.group(5) == "yes"])
        elif key == "cex":
            lid, rhs = _split_def(value, lineno)
            try:
                cex[lid[0]] = json.loads(rhs)
            except (ValueError, IndexError):
                raise ParseError("bad counterexample line", lineno) from None
    results = tuple(
        LawResult(lid, suite, cases, failures, cex.get(lid), asserted)
        for lid, suite, cases, failures, asserted in laws
    )
    return AuditReport(seed, hdr["classification"][1], hdr["structure"][1], flags,
                       hdr["caveat"][1], results)
