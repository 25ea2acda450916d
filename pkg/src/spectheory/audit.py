"""Executable law suites, counterexample shrinking and the classification
of a specification theory in the spectrum of algebraic structures.

A `Theory` bundles the operations under test. The shipped theory uses the
library's own operations; tests swap single operations for mutants to see
the suites catch them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .compose import (
    compose, enumerate_family, expand_naa, naa_to_nf, nf_to_naa,
    quotient_bounded, quotient_nf_det, unit,
)
from .generators import GenConfig, gen_lts, gen_nf
from .models import Alphabet, Lts, loop_lts
from .specs import (
    NormalForm, bottom, chi, conj, disj, leq, top,
)

CAVEAT = (
    "Q is certified only relative to the bounded candidate family "
    "(enumerate_family, k=1) and to deterministic operands for quotient_det; "
    "completeness over all specifications is not claimed."
)


@dataclass(frozen=True)
class Theory:
    """Operations of a specification theory. ``disj`` or the quotients may
    be None, which removes the laws that need them."""

    name: str = "shipped"
    leq: Callable = leq
    conj: Callable = conj
    disj: Optional[Callable] = disj
    top: Callable = top
    bottom: Callable = bottom
    compose: Callable = compose
    unit: Callable = lambda al: naa_to_nf(unit(al))
    quotient_det: Optional[Callable] = quotient_nf_det
    quotient_bounded: Optional[Callable] = quotient_bounded

    def equiv(self, s1, s2) -> bool:
        return self.leq(s1, s2) and self.leq(s2, s1)

    def without(self, *ops) -> "Theory":
        return replace(self, name=f"{self.name}-no-{'-'.join(ops)}", **{o: None for o in ops})


SHIPPED = Theory()


@dataclass(frozen=True)
class LawResult:
    law_id: str
    suite: str
    cases: int
    failures: int
    counterexample: Optional[str] = None
    asserted: bool = True

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass(frozen=True)
class Law:
    law_id: str
    suite: str
    gen: Callable          # (cfg, index, law_id) -> operands
    check: Callable        # (theory, operands) -> bool
    needs: tuple = ()
    asserted: bool = True


# -- case generators ---------------------------------------------------------

def _lattice_cfg(cfg):
    return replace(cfg, inconsistency=max(cfg.inconsistency, 0.1))


def _nfs(k, det=False, lattice=False):
    def gen(cfg, i, law_id):
        c = _lattice_cfg(cfg) if lattice else cfg
        return tuple(gen_nf(c, i, f"{law_id}/{j}", deterministic=det) for j in range(k))
    return gen


def _below(cfg, i, law_id):
    """(S1, S2, S3) with S1 <= S2 guaranteed via the shipped conjunction."""
    s2, r, s3 = _nfs(3)(cfg, i, law_id)
    return conj(s2, r), s2, s3


def _below_pairs(cfg, i, law_id):
    s3, r1, s4, r2 = _nfs(4)(cfg, i, law_id)
    return conj(s3, r1), conj(s4, r2), s3, s4


def _with_probe(cfg, i, law_id):
    """Two specs plus a candidate: a random spec or the characteristic
    formula of a random model."""
    s1, s2, x = _nfs(3, lattice=True)(cfg, i, law_id)
    if i % 2:
        x = chi(gen_lts(cfg, i, f"{law_id}/m"))
    return s1, s2, x


def _bounded_cfg(cfg):
    return replace(cfg, alphabet_size=min(cfg.alphabet_size, 2))


def _bounded_pair(cfg, i, law_id):
    return _nfs(2)(_bounded_cfg(cfg), i, law_id)


def _alphabet_only(cfg, i, law_id):
    return (Alphabet(cfg.alphabet.labels[: 1 + i % cfg.alphabet_size]),)


# -- law checks --------------------------------------------------------------

def _glb(T, c):
    s1, s2, x = c
    m = T.conj(s1, s2)
    return T.leq(m, s1) and T.leq(m, s2) and (
        T.leq(x, m) == (T.leq(x, s1) and T.leq(x, s2)))


def _lub(T, c):
    s1, s2, x = c
    j = T.disj(s1, s2)
    return T.leq(s1, j) and T.leq(s2, j) and (
        T.leq(j, x) == (T.leq(s1, x) and T.leq(s2, x)))


def _trans(T, c):
    s1, s2, s3 = c
    return not (T.leq(s1, s2) and T.leq(s2, s3)) or T.leq(s1, s3)


def _mono(T, c):
    s1, s2, s3 = c
    return not T.leq(s1, s2) or T.leq(T.compose(s1, s3), T.compose(s2, s3))


def _indep(T, c):
    s1, s2, s3, s4 = c
    return not (T.leq(s1, s3) and T.leq(s2, s4)) or T.leq(
        T.compose(s1, s2), T.compose(s3, s4))


def _residuation_bounded(T, c):
    s1, s3 = c
    q = T.quotient_bounded(s3, s1, 1)
    return all(
        T.leq(T.compose(s1, x), s3) == T.leq(x, q)
        for x in enumerate_family(s1.alphabet, 1)
    )


def _residuation_det(T, c):
    s1, s3, *extra = c
    q = T.quotient_det(s3, s1)
    candidates = list(enumerate_family(s1.alphabet, 1)) + extra
    return all(T.leq(T.compose(s1, x), s3) == T.leq(x, q) for x in candidates)


def _det_with_extras(cfg, i, law_id):
    s1, s3 = _nfs(2, det=True)(_bounded_cfg(cfg), i, law_id)
    c = replace(_bounded_cfg(cfg), inconsistency=0.2)
    extras = tuple(gen_nf(c, i, f"{law_id}/x{j}") for j in range(2))
    return (s1, s3) + extras


def _quotient_law(k):
    def check(T, c):
        q, p = T.quotient_det, T.compose
        s1, s2, s3 = c
        s = s1
        return [
            lambda: T.leq(p(s1, q(s2, s3)), q(p(s1, s2), s3)),
            lambda: T.leq(q(s1, s2), q(p(s1, s3), p(s2, s3))),
            lambda: T.leq(p(q(s1, s2), q(s2, s3)), q(s1, s3)),
            lambda: T.equiv(q(q(s1, s2), s3), q(q(s1, s3), s2)),
            lambda: T.equiv(q(s1, p(s2, s3)), q(q(s1, s2), s3)),
            lambda: T.equiv(p(s, q(s, s)), s),
            lambda: T.equiv(p(q(s, s), q(s, s)), q(s, s)),
        ][k]()
    return check


def _unit_quotient(T, c):
    s1, s2 = c[:2]
    one = T.unit(s1.alphabet)
    return T.leq(T.compose(s1, T.quotient_det(one, s2)), T.quotient_det(s1, s2))


def _laws() -> list:
    L = []

    def law(law_id, suite, gen, check, needs=(), asserted=True):
        L.append(Law(law_id, suite, gen, check, needs, asserted))

    n1, n3 = _nfs(1, lattice=True), _nfs(3, lattice=True)
    law("lattice/refl", "lattice", n1, lambda T, c: T.leq(c[0], c[0]))
    law("lattice/trans", "lattice", _with_probe, _trans)
    law("lattice/glb", "lattice", _with_probe, _glb)
    law("lattice/lub", "lattice", _with_probe, _lub, ("disj",))
    law("lattice/meet-distrib", "lattice", n3, lambda T, c: T.equiv(
        T.conj(c[0], T.disj(c[1], c[2])),
        T.disj(T.conj(c[0], c[1]), T.conj(c[0], c[2]))), ("disj",))
    law("lattice/join-distrib", "lattice", n3, lambda T, c: T.equiv(
        T.disj(c[0], T.conj(c[1], c[2])),
        T.conj(T.disj(c[0], c[1]), T.disj(c[0], c[2]))), ("disj",))
    law("lattice/meet-bot", "lattice", n1, lambda T, c: T.equiv(
        T.conj(c[0], T.bottom(c[0].alphabet)), T.bottom(c[0].alphabet)))
    law("lattice/meet-top", "lattice", n1, lambda T, c: T.equiv(
        T.conj(c[0], T.top(c[0].alphabet)), c[0]))
    law("lattice/join-bot", "lattice", n1, lambda T, c: T.equiv(
        T.disj(c[0], T.bottom(c[0].alphabet)), c[0]), ("disj",))
    law("lattice/join-top", "lattice", n1, lambda T, c: T.equiv(
        T.disj(c[0], T.top(c[0].alphabet)), T.top(c[0].alphabet)), ("disj",))

    law("semigroup/mono", "semigroup", _below, _mono)
    law("semigroup/indep-impl", "semigroup", _below_pairs, _indep)
    law("semigroup/comm", "semigroup", _nfs(2), lambda T, c: T.equiv(
        T.compose(c[0], c[1]), T.compose(c[1], c[0])))
    law("semigroup/assoc", "semigroup", _nfs(3), lambda T, c: T.equiv(
        T.compose(c[0], T.compose(c[1], c[2])), T.compose(T.compose(c[0], c[1]), c[2])))
    law("semigroup/join-distrib", "semigroup", _nfs(3), lambda T, c: T.equiv(
        T.compose(c[0], T.disj(c[1], c[2])),
        T.disj(T.compose(c[0], c[1]), T.compose(c[0], c[2]))), ("disj",))
    law("semigroup/compose-bot", "semigroup", _nfs(1), lambda T, c: T.equiv(
        T.compose(c[0], T.bottom(c[0].alphabet)), T.bottom(c[0].alphabet)))
    law("probe/meet-distrib", "probe", _nfs(3), lambda T, c: T.equiv(
        T.compose(c[0], T.conj(c[1], c[2])),
        T.conj(T.compose(c[0], c[1]), T.compose(c[0], c[2]))), asserted=False)

    law("unital/unit", "unital", _nfs(1), lambda T, c: T.equiv(
        T.compose(c[0], T.unit(c[0].alphabet)), c[0]))
    law("unital/unit-chi", "unital", _alphabet_only, lambda T, c: T.equiv(
        T.unit(c[0]), chi(loop_lts(c[0]))))

    law("residuation/bounded", "residuation", _bounded_pair, _residuation_bounded,
        ("quotient_bounded",))
    law("residuation/det", "residuation", _det_with_extras, _residuation_det,
        ("quotient_det",))
    for k in range(7):
        law(f"residuation/quotient-law-{k + 1}", "residuation", _nfs(3, det=True), _quotient_law(k),
            ("quotient_det",))
    law("residuation/unit-quotient", "residuation", _nfs(2, det=True), _unit_quotient, ("quotient_det",))

    law("bounds/quot-bot", "bounds", _bounded_pair, lambda T, c: T.equiv(
        T.quotient_bounded(c[0], T.bottom(c[0].alphabet), 1), T.top(c[0].alphabet)),
        ("quotient_bounded",))
    law("bounds/top-quot", "bounds", _nfs(1, det=True), lambda T, c: T.equiv(
        T.quotient_det(T.top(c[0].alphabet), c[0]), T.top(c[0].alphabet)),
        ("quotient_det",))
    law("bounds/top-quot-bounded", "bounds", _bounded_pair, lambda T, c: T.equiv(
        T.quotient_bounded(T.top(c[0].alphabet), c[0], 1), T.top(c[0].alphabet)),
        ("quotient_bounded",))
    law("bounds/meet-quot", "bounds", _nfs(3, det=True), lambda T, c: T.equiv(
        T.quotient_det(T.conj(c[0], c[1]), c[2]),
        T.conj(T.quotient_det(c[0], c[2]), T.quotient_det(c[1], c[2]))),
        ("quotient_det",))
    law("bounds/quot-join", "bounds", lambda cfg, i, lid: _nfs(3)(_bounded_cfg(cfg), i, lid),
        _quot_join, ("quotient_bounded", "disj"))
    return L


def _quot_join(T, c):
    # Family-relative: both sides admit exactly the same candidates.
    s1, s2, s3 = c
    lhs = T.quotient_bounded(s1, T.disj(s2, s3), 1)
    rhs = T.conj(T.quotient_bounded(s1, s2, 1), T.quotient_bounded(s1, s3, 1))
    return all(T.leq(x, lhs) == T.leq(x, rhs) for x in enumerate_family(s1.alphabet, 1))


LAWS = _laws()
SUITES = ("lattice", "semigroup", "unital", "residuation", "bounds", "probe")


# -- shrinking ---------------------------------------------------------------

def _nf_reductions(s: NormalForm):
    labels = s.alphabet.labels
    for x in sorted(s.vars):
        if len(s.vars) > 1:
            rest = s.vars - {x}
            yield NormalForm(
                s.alphabet, rest, s.initials - {x},
                {y: [n for n in s.diamonds[y] if all(t != x for (_, t) in n)] for y in rest},
                {y: {a: s.boxes[y][a] - {x} for a in labels} for y in rest},
            )
    for x in sorted(s.vars):
        for n in sorted(s.diamonds[x], key=sorted):
            dia = dict(s.diamonds)
            dia[x] = s.diamonds[x] - {n}
            yield NormalForm(s.alphabet, s.vars, s.initials, dia, s.boxes)
        for a in labels:
            for y in sorted(s.boxes[x][a]):
                dia = dict(s.diamonds)
                dia[x] = [n for n in s.diamonds[x] if (a, y) not in n]
                box = dict(s.boxes)
                box[x] = dict(s.boxes[x])
                box[x][a] = s.boxes[x][a] - {y}
                yield NormalForm(s.alphabet, s.vars, s.initials, dia, box)
    if len(s.initials) > 1:
        for x in sorted(s.initials):
            yield NormalForm(s.alphabet, s.vars, s.initials - {x}, s.diamonds, s.boxes)


def _lts_reductions(m: Lts):
    for s in sorted(m.states - {m.initial}):
        yield Lts(m.alphabet, m.states - {s}, m.initial,
                  [t for t in m.transitions if s not in (t[0], t[2])])
    for t in sorted(m.transitions):
        yield Lts(m.alphabet, m.states, m.initial, m.transitions - {t})


def _reductions(obj):
    if isinstance(obj, NormalForm):
        return _nf_reductions(obj)
    if isinstance(obj, Lts):
        return _lts_reductions(obj)
    return iter(())


def shrink(fails: Callable, case: tuple, budget: int = 300) -> tuple:
    """Greedy deletion: keep any single-step reduction that still fails."""
    case = tuple(case)
    improved = True
    while improved and budget > 0:
        improved = False
        for i, obj in enumerate(case):
            for smaller in _reductions(obj):
                budget -= 1
                cand = case[:i] + (smaller,) + case[i + 1:]
                if fails(cand):
                    case = cand
                    improved = True
                    break
                if budget <= 0:
                    break
            if improved or budget <= 0:
                break
    return case


def _describe(case) -> str:
    from .textio import serialize
    parts = [serialize(c) if not isinstance(c, Alphabet) else f"alphabet: {' '.join(c)}\n"
             for c in case]
    return "---\n".join(parts)


# -- running -----------------------------------------------------------------

def _enabled(law: Law, theory: Theory) -> bool:
    return all(getattr(theory, op) is not None for op in law.needs)


def run_law(law: Law, cfg: GenConfig, theory: Theory = SHIPPED) -> LawResult:
    failures, first = 0, None

    def fails(case):
        try:
            return not law.check(theory, case)
        except Exception:
            # A crashing operation counts against the law.
            return True

    for i in range(cfg.cases):
        case = law.gen(cfg, i, law.law_id)
        if fails(case):
            failures += 1
            if first is None:
                first = case
    cex = _describe(shrink(fails, first)) if first is not None else None
    return LawResult(law.law_id, law.suite, cfg.cases, failures, cex, law.asserted)


def run_suite(suite: str, cfg: GenConfig, theory: Theory = SHIPPED) -> list:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    return [run_law(l, cfg, theory) for l in LAWS if l.suite == suite and _enabled(l, theory)]


# -- classification ----------------------------------------------------------

# Nodes of the spectrum: (label, algebraic structure, required features).
# Features: L logical, C compositional, U unital, Q complete.
NODES = (
    ("logical", "b.d. lattice", {"L"}),
    ("compositional", "po.c. semigroup", {"C"}),
    ("comp. & log.", "b.d.lo.c. semigroup", {"L", "C"}),
    ("unital compositional", "po.c. monoid", {"C", "U"}),
    ("uni. comp. & log.", "b.d.lo.c. monoid", {"L", "C", "U"}),
    ("complete comp.", "residuated po.c. semigroup", {"C", "Q"}),
    ("uni. complete comp.", "c. residuated poset", {"C", "U", "Q"}),
    ("complete comp. & log.", "b.d. residuated lo.c. semigroup", {"L", "C", "Q"}),
    ("uni. complete comp. & log.", "b.d.c. residuated lattice", {"L", "C", "U", "Q"}),
)

# (lower, upper): `upper` is a richer structure than `lower`.
EDGES = (
    ("logical", "comp. & log."), ("compositional", "comp. & log."),
    ("compositional", "unital compositional"), ("unital compositional", "uni. comp. & log."),
    ("comp. & log.", "uni. comp. & log."), ("compositional", "complete comp."),
    ("complete comp.", "uni. complete comp."), ("unital compositional", "uni. complete comp."),
    ("comp. & log.", "complete comp. & log."), ("complete comp.", "complete comp. & log."),
    ("uni. comp. & log.", "uni. complete comp. & log."),
    ("complete comp. & log.", "uni. complete comp. & log."),
    ("uni. complete comp.", "uni. complete comp. & log."),
)


def _above(node) -> set:
    out, todo = set(), [node]
    while todo:
        n = todo.pop()
        for lo, hi in EDGES:
            if lo == n and hi not in out:
                out.add(hi)
                todo.append(hi)
    return out


def classify(features) -> tuple:
    """Greatest node whose required features all hold, as
    (label, structure); ("none", "none") when no node qualifies."""
    ok = [(lab, st) for lab, st, need in NODES if need <= set(features)]
    labels = {lab for lab, _ in ok}
    for lab, st in ok:
        if not (_above(lab) & labels):
            return lab, st
    return "none", "none"


@dataclass(frozen=True)
class AuditReport:
    seed: int
    classification: str
    structure: str
    flags: dict
    caveat: str
    laws: tuple = field(default_factory=tuple)

    def law(self, law_id) -> LawResult:
        for l in self.laws:
            if l.law_id == law_id:
                return l
        raise KeyError(law_id)

    def to_text(self) -> str:
        from .textio import serialize
        return serialize(self)

    def to_json(self) -> str:
        doc = {
            "seed": self.seed,
            "classification": self.classification,
            "structure": self.structure,
            "flags": self.flags,
            "caveat": self.caveat,
            "laws": [
                {"law_id": l.law_id, "suite": l.suite, "cases": l.cases,
                 "failures": l.failures, "asserted": l.asserted,
                 "counterexample": l.counterexample}
                for l in self.laws
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def audit(cfg: GenConfig = GenConfig(), theory: Theory = SHIPPED) -> AuditReport:
    results = []
    for suite in SUITES:
        results.extend(run_suite(suite, cfg, theory))

    def suite_ok(name):
        return all(r.passed for r in results if r.suite == name and r.asserted)

    has_disj = theory.disj is not None
    has_q = theory.quotient_det is not None and theory.quotient_bounded is not None
    features = set()
    if suite_ok("lattice") and has_disj:
        features.add("L")
    if suite_ok("semigroup"):
        features.add("C")
    if suite_ok("unital"):
        features.add("U")
    if has_q and suite_ok("residuation") and suite_ok("bounds"):
        features.add("Q")
    label, structure = classify(features)
    flags = {
        "L": "yes" if "L" in features else ("semi" if suite_ok("lattice") else "no"),
        "C": "yes" if "C" in features else "no",
        "Q": "yes(bounded)" if "Q" in features else "no",
    }
    caveat = CAVEAT if "Q" in features else "none"
    return AuditReport(cfg.seed, label, structure, flags, caveat, tuple(results))


# -- blow-up observation -----------------------------------------------------

@dataclass(frozen=True)
class BlowupRow:
    n: int
    input_size: int       # may-edges of the source normal form
    acceptance_sets: int  # sum over states of |Tran(s)|
    split_vars: int       # variables of the split translation
    closure_vars: int     # variables of naa_to_nf


def blowup_family(n: int) -> NormalForm:
    """n variables over {a}, each allowed to move to every variable and
    obliged to nothing: every subset of its may-set is acceptable."""
    names = [f"y{i}" for i in range(n)]
    return NormalForm(["a"], names, ["y0"], {x: [] for x in names},
                      {x: {"a": set(names)} for x in names})


def blowup_report(n_max: int = 5) -> list:
    rows = []
    for n in range(1, n_max + 1):
        s = blowup_family(n)
        a = nf_to_naa(s)
        rows.append(BlowupRow(
            n,
            sum(len(s.may(x)) for x in s.vars),
            sum(len(a.tran[x]) for x in a.states),
            len(expand_naa(a).vars),
            len(naa_to_nf(a).vars),
        ))
    return rows


def format_blowup(rows) -> str:
    head = "n input_size acceptance_sets split_vars closure_vars"
    return "\n".join([head] + [
        f"{r.n} {r.input_size} {r.acceptance_sets} {r.split_vars} {r.closure_vars}" for r in rows
    ]) + "\n"
