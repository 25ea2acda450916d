"""Normal-form specifications (equivalently DMTS) and their logic.

A `NormalForm` variable ``x`` stands for

    AND_{N in diamonds(x)} (OR_{(a, y) in N} <a>y)  and  AND_a [a](OR Box^a(x))

Refinement is the simulation-like preorder between such systems; modal
equivalence is refinement in both directions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import UndeclaredName, UnguardedError, ValidationError
from .logic import (
    And, Box, Diamond, FalseF, Hmlr, Or, TrueF, Var, boolean_order, flatten,
)
from .models import Alphabet, Lts, as_alphabet, check_same_alphabet, pair_name


@dataclass(frozen=True, eq=True)
class NormalForm:
    alphabet: Alphabet
    vars: frozenset
    initials: frozenset
    diamonds: Mapping
    boxes: Mapping

    def __init__(self, alphabet, vars, initials, diamonds, boxes, check=True):
        alphabet = as_alphabet(alphabet)
        vars = frozenset(vars)
        initials = frozenset(initials)
        dia = {
            x: frozenset(frozenset(tuple(e) for e in n) for n in diamonds.get(x, ()))
            for x in vars
        }
        box = {}
        for x in vars:
            given = boxes.get(x, {})
            box[x] = {a: frozenset(given.get(a, ())) for a in alphabet}
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "initials", initials)
        object.__setattr__(self, "diamonds", dia)
        object.__setattr__(self, "boxes", box)
        if check:
            self.validate(extra_keys=(set(diamonds) | set(boxes)) - vars)

    __hash__ = None

    def validate(self, extra_keys=()):
        for x in extra_keys:
            raise UndeclaredName("variable", x, "declarations")
        for x in self.initials:
            if x not in self.vars:
                raise UndeclaredName("variable", x, "initials")
        for x in self.vars:
            for a, ys in self.boxes[x].items():
                for y in ys:
                    if y not in self.vars:
                        raise UndeclaredName("variable", y, f"box {a} of {x}")
            for n in self.diamonds[x]:
                for (a, y) in n:
                    if a not in self.alphabet:
                        raise UndeclaredName("label", a, f"must set of {x}")
                    if y not in self.vars:
                        raise UndeclaredName("variable", y, f"must set of {x}")
                    if y not in self.boxes[x][a]:
                        raise ValidationError(
                            f"inconsistent: must ({a},{y}) of {x} not in its box set"
                        )

    def may(self, x) -> frozenset:
        return frozenset((a, y) for a in self.alphabet for y in self.boxes[x][a])

    def successors(self, x) -> set:
        return {y for a in self.alphabet for y in self.boxes[x][a]}

    def is_locally_consistent(self) -> bool:
        return all(frozenset() not in self.diamonds[x] for x in self.vars)

    def reachable(self) -> set:
        seen = set(self.initials)
        todo = deque(sorted(seen))
        while todo:
            x = todo.popleft()
            for y in self.successors(x):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    def trimmed(self) -> "NormalForm":
        keep = self.reachable()
        if keep == self.vars:
            return self
        return NormalForm(
            self.alphabet, keep, self.initials,
            {x: self.diamonds[x] for x in keep},
            {x: self.boxes[x] for x in keep},
            check=False,
        )

    def size(self) -> int:
        """Variables plus must-set elements plus box entries."""
        return len(self.vars) + sum(
            sum(len(n) for n in self.diamonds[x]) + len(self.may(x))
            for x in self.vars
        )


@dataclass(frozen=True)
class RefinementWitness:
    pairs: frozenset

    def __contains__(self, pair):
        return pair in self.pairs


def chi(m: Lts) -> NormalForm:
    """Characteristic formula of an LTS."""
    dia = {s: set() for s in m.states}
    box = {s: {a: set() for a in m.alphabet} for s in m.states}
    for (s, a, t) in m.transitions:
        dia[s].add(frozenset({(a, t)}))
        box[s][a].add(t)
    return NormalForm(m.alphabet, m.states, {m.initial}, dia, box)


def top(alphabet, name="tt") -> NormalForm:
    alphabet = as_alphabet(alphabet)
    return NormalForm(alphabet, {name}, {name}, {}, {name: {a: {name} for a in alphabet}})


def bottom(alphabet) -> NormalForm:
    return NormalForm(as_alphabet(alphabet), (), (), {}, {})


def _relation(s1: NormalForm, s2: NormalForm) -> set:
    labels = s1.alphabet.labels
    box1, box2 = s1.boxes, s2.boxes
    dia1 = {x: [tuple(n) for n in s1.diamonds[x]] for x in s1.vars}
    dia2 = {}
    for x in s2.vars:
        groups = []
        for n in s2.diamonds[x]:
            g = {}
            for (a, y) in n:
                g.setdefault(a, set()).add(y)
            groups.append(g)
        dia2[x] = groups

    rel = {(x1, x2) for x1 in s1.vars for x2 in s2.vars}

    def ok(x1, x2):
        for a in labels:
            b2 = box2[x2][a]
            for y1 in box1[x1][a]:
                if not any((y1, y2) in rel for y2 in b2):
                    return False
        for g in dia2[x2]:
            if not any(
                all(any((y1, y2) in rel for y2 in g.get(a, ())) for (a, y1) in n1)
                for n1 in dia1[x1]
            ):
                return False
        return True

    pred1 = {x: set() for x in s1.vars}
    for x in s1.vars:
        for y in s1.successors(x):
            pred1[y].add(x)
    pred2 = {x: set() for x in s2.vars}
    for x in s2.vars:
        for y in s2.successors(x):
            pred2[y].add(x)

    todo = deque(sorted(rel))
    queued = set(rel)
    while todo:
        pair = todo.popleft()
        queued.discard(pair)
        if pair not in rel or ok(*pair):
            continue
        rel.discard(pair)
        y1, y2 = pair
        for p1 in pred1[y1]:
            for p2 in pred2[y2]:
                dep = (p1, p2)
                if dep in rel and dep not in queued:
                    queued.add(dep)
                    todo.append(dep)
    return rel


def refines(s1: NormalForm, s2: NormalForm) -> Optional[RefinementWitness]:
    """Greatest refinement relation from `s1` to `s2`, or None when the
    initial clause fails."""
    check_same_alphabet(s1, s2)
    rel = _relation(s1, s2)
    for x1 in s1.initials:
        if not any((x1, x2) in rel for x2 in s2.initials):
            return None
    return RefinementWitness(frozenset(rel))


def leq(s1, s2) -> bool:
    return refines(s1, s2) is not None


def mod_equiv(s1, s2) -> bool:
    return leq(s1, s2) and leq(s2, s1)


def satisfies(m: Lts, s: NormalForm) -> bool:
    check_same_alphabet(m, s)
    return leq(chi(m), s)


def is_refinement(s1: NormalForm, s2: NormalForm, pairs) -> bool:
    """Independent replay of both transfer clauses and the initial clause."""
    pairs = set(pairs)
    for x1 in s1.initials:
        if not any((x1, x2) in pairs for x2 in s2.initials):
            return False
    for (x1, x2) in pairs:
        for n2 in s2.diamonds[x2]:
            if not any(
                all(
                    any(b == a and (y1, y2) in pairs for (b, y2) in n2)
                    for (a, y1) in n1
                )
                for n1 in s1.diamonds[x1]
            ):
                return False
        for a in s1.alphabet:
            for y1 in s1.boxes[x1][a]:
                if not any((y1, y2) in pairs for y2 in s2.boxes[x2][a]):
                    return False
    return True


def conj(s1: NormalForm, s2: NormalForm) -> NormalForm:
    """Greatest lower bound via the product construction."""
    check_same_alphabet(s1, s2)
    labels = s1.alphabet.labels
    start = {(x1, x2) for x1 in s1.initials for x2 in s2.initials}
    seen = set(start)
    todo = deque(sorted(start))
    dia, box = {}, {}
    while todo:
        x1, x2 = todo.popleft()
        name = pair_name(x1, x2)
        b = {
            a: {(y1, y2) for y1 in s1.boxes[x1][a] for y2 in s2.boxes[x2][a]}
            for a in labels
        }
        musts = set()
        for n1 in s1.diamonds[x1]:
            musts.add(frozenset(
                (a, (y1, y2)) for (a, y1) in n1 for y2 in s2.boxes[x2][a]
            ))
        for n2 in s2.diamonds[x2]:
            musts.add(frozenset(
                (a, (y1, y2)) for (a, y2) in n2 for y1 in s1.boxes[x1][a]
            ))
        dia[name] = {frozenset((a, pair_name(*p)) for (a, p) in n) for n in musts}
        box[name] = {a: {pair_name(*p) for p in ps} for a, ps in b.items()}
        for ps in b.values():
            for p in ps:
                if p not in seen:
                    seen.add(p)
                    todo.append(p)
    return NormalForm(
        s1.alphabet, dia.keys(), {pair_name(*p) for p in start}, dia, box, check=False
    )


def tag(s: NormalForm, prefix: str) -> NormalForm:
    """Rename every variable by prepending `prefix`."""
    r = {x: prefix + x for x in s.vars}
    return NormalForm(
        s.alphabet, r.values(), {r[x] for x in s.initials},
        {r[x]: {frozenset((a, r[y]) for (a, y) in n) for n in s.diamonds[x]}
         for x in s.vars},
        {r[x]: {a: {r[y] for y in ys} for a, ys in s.boxes[x].items()}
         for x in s.vars},
        check=False,
    )


def disj(s1: NormalForm, s2: NormalForm) -> NormalForm:
    """Least upper bound: disjoint union, tagging variables with 1./2."""
    check_same_alphabet(s1, s2)
    l, r = tag(s1, "1."), tag(s2, "2.")
    return NormalForm(
        s1.alphabet, l.vars | r.vars, l.initials | r.initials,
        {**l.diamonds, **r.diamonds}, {**l.boxes, **r.boxes}, check=False,
    )


def join_all(alphabet, specs) -> NormalForm:
    """Disjunction of a sequence; variables are tagged with the position."""
    alphabet = as_alphabet(alphabet)
    vars, inits, dia, box = set(), set(), {}, {}
    for i, s in enumerate(specs):
        t = tag(s, f"{i}.")
        vars |= t.vars
        inits |= t.initials
        dia.update(t.diamonds)
        box.update(t.boxes)
    return NormalForm(alphabet, vars, inits, dia, box, check=False)


def is_deterministic_nf(s: NormalForm) -> bool:
    return len(s.initials) == 1 and all(
        len(ys) <= 1 for x in s.vars for ys in s.boxes[x].values()
    )


# -- normalization -----------------------------------------------------------

_TOP = "\x00top"
_BOT = "\x00bot"


def _minimize(clauses):
    """Drop clauses that contain another clause (absorption)."""
    cs = sorted(set(clauses), key=lambda c: (len(c), sorted(c)))
    out = []
    for c in cs:
        if not any(d <= c for d in out):
            out.append(c)
    return out


def _dnf(h: Hmlr):
    order = boolean_order(h)
    if order is None:
        raise UnguardedError("unguarded recursion through boolean references")
    decl = h.declarations()
    table = {_TOP: [frozenset()], _BOT: []}

    def target(f):
        if isinstance(f, TrueF):
            return _TOP
        if isinstance(f, FalseF):
            return _BOT
        return f.name

    def conv(f):
        if isinstance(f, TrueF):
            return [frozenset()]
        if isinstance(f, FalseF):
            return []
        if isinstance(f, Var):
            return table[f.name]
        if isinstance(f, Or):
            return _minimize(conv(f.left) + conv(f.right))
        if isinstance(f, And):
            return _minimize([c | d for c in conv(f.left) for d in conv(f.right)])
        if isinstance(f, Diamond):
            t = target(f.sub)
            if t == _BOT:
                return []
            return [frozenset({("dia", f.label, t)})]
        if isinstance(f, Box):
            t = target(f.sub)
            if t == _TOP:
                return [frozenset()]
            return [frozenset({("box", f.label, t)})]
        raise TypeError(f"not a formula: {f!r}")

    for x in order:
        table[x] = conv(decl[x])
    return table


def normalize(h: Hmlr) -> NormalForm:
    """Translate a guarded formula system into an equivalent normal form.

    Output variables are DNF clauses (conjunctions of modal atoms). A
    conjunction of input variables becomes the disjunction of the clauses
    of the product of their DNFs; boxes on one label are merged that way
    and must targets are intersected with the box continuation so the
    result is syntactically consistent.
    """
    h = flatten(h)
    table = _dnf(h)
    labels = h.alphabet.labels
    memo = {}

    def clauses_of(ys):
        ys = frozenset(ys)
        if ys not in memo:
            acc = [frozenset()]
            for y in sorted(ys):
                acc = _minimize([c | d for c in acc for d in table[y]])
                if not acc:
                    break
            memo[ys] = acc
        return memo[ys]

    names = {}
    order = []

    def name_of(c):
        if c not in names:
            names[c] = f"n{len(names)}"
            order.append(c)
        return names[c]

    initials = set()
    for x in sorted(h.initials):
        for c in clauses_of({x}):
            initials.add(name_of(c))

    dia, box = {}, {}
    i = 0
    while i < len(order):
        c = order[i]
        i += 1
        me = names[c]
        boxes_on = {a: {t for (k, b, t) in c if k == "box" and b == a} for a in labels}
        musts = []
        targets = {a: set() for a in labels}
        for a in labels:
            for d in clauses_of(boxes_on[a]):
                targets[a].add(name_of(d))
        for (k, a, t) in sorted(c):
            if k != "dia":
                continue
            n = set()
            for d in clauses_of(boxes_on[a] | {t}):
                nm = name_of(d)
                n.add((a, nm))
                targets[a].add(nm)
            musts.append(frozenset(n))
        dia[me] = set(musts)
        box[me] = targets
    return NormalForm(h.alphabet, dia.keys(), initials, dia, box)


def embed(s: NormalForm) -> Hmlr:
    """The formula system a normal form stands for."""
    from .logic import conj_all, disj_all

    decl = {}
    for x in sorted(s.vars):
        parts = [disj_all(Diamond(a, Var(y)) for (a, y) in sorted(n))
                 for n in sorted(s.diamonds[x], key=sorted)]
        parts += [Box(a, disj_all(Var(y) for y in sorted(s.boxes[x][a])))
                  for a in s.alphabet]
        decl[x] = conj_all(parts)
    return Hmlr(s.alphabet, sorted(s.vars), s.initials, decl)
