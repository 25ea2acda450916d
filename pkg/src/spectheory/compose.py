"""Acceptance automata, translations to and from normal forms, CSP-style
composition, and quotients.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import chain, combinations, product
from typing import Iterator, Mapping

from .errors import NotDeterministic, UndeclaredName
from .models import Alphabet, Lts, as_alphabet, check_same_alphabet, pair_name
from .specs import (
    NormalForm, bottom, is_deterministic_nf, join_all, leq,
)


@dataclass(frozen=True)
class Naa:
    """Non-deterministic acceptance automaton.

    ``tran[s]`` is a family of acceptance sets, each a set of
    ``(label, target)`` pairs. An empty family marks a locally inconsistent
    state; an empty acceptance set permits deadlock.
    """

    alphabet: Alphabet
    states: frozenset
    initials: frozenset
    tran: Mapping

    def __init__(self, alphabet, states, initials, tran):
        alphabet = as_alphabet(alphabet)
        states = frozenset(states)
        initials = frozenset(initials)
        for s in initials:
            if s not in states:
                raise UndeclaredName("state", s, "initials")
        for s in tran:
            if s not in states:
                raise UndeclaredName("state", s, "acceptance sets")
        fam = {}
        for s in states:
            fam[s] = frozenset(frozenset(tuple(e) for e in m) for m in tran.get(s, ()))
            for m in fam[s]:
                for (a, t) in m:
                    if a not in alphabet:
                        raise UndeclaredName("label", a, f"acceptance set of {s}")
                    if t not in states:
                        raise UndeclaredName("state", t, f"acceptance set of {s}")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "initials", initials)
        object.__setattr__(self, "tran", fam)

    __hash__ = None


def _subsets(items):
    items = list(items)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def minimal_sets(sets):
    sets = sorted(set(map(frozenset, sets)), key=lambda s: (len(s), sorted(s)))
    out = []
    for s in sets:
        if not any(t <= s for t in out):
            out.append(s)
    return out


def min_transversals(edges) -> list:
    """Minimal sets meeting every edge (Berge's incremental dualization).

    No edges gives ``[∅]``; an empty edge gives ``[]``.
    """
    trans = [frozenset()]
    for e in minimal_sets(edges):
        nxt = []
        for t in trans:
            if t & e:
                nxt.append(t)
            else:
                nxt.extend(t | {x} for x in e)
        trans = minimal_sets(nxt)
        if not trans:
            break
    return trans


def nf_to_naa(s: NormalForm) -> Naa:
    """Tran(x) = subsets of the may-set of x meeting every must set."""
    tran = {}
    for x in s.vars:
        may = sorted(s.may(x))
        musts = list(s.diamonds[x])
        tran[x] = [
            frozenset(m) for m in _subsets(may)
            if all(set(m) & n for n in musts)
        ]
    return Naa(s.alphabet, s.vars, s.initials, tran)


def naa_to_nf(a: Naa) -> NormalForm:
    """One variable per state: boxes are the union of the acceptance sets,
    musts are the minimal sets meeting every acceptance set.

    Exact whenever Tran(s) is the family of sets meeting some must sets, as
    for every `nf_to_naa` image; otherwise it closes the family upward
    under those constraints.
    """
    dia, box = {}, {}
    for s in a.states:
        fam = a.tran[s]
        b = {l: set() for l in a.alphabet}
        if not fam:
            dia[s] = [frozenset()]
        else:
            for m in fam:
                for (l, t) in m:
                    b[l].add(t)
            dia[s] = min_transversals(fam)
        box[s] = b
    return NormalForm(a.alphabet, a.states, a.initials, dia, box)


def _acceptance_key(m):
    return (len(m), sorted(m))


def expand_naa(a: Naa) -> NormalForm:
    """Split translation: one variable per (state, acceptance set).

    Model-exact for every NAA, at the price of one variable per
    acceptance set.
    """
    order = {s: sorted(a.tran[s], key=_acceptance_key) for s in a.states}
    name = {(s, m): f"{s}#{i}" for s in a.states for i, m in enumerate(order[s])}
    vars, dia, box = [], {}, {}
    for s in sorted(a.states):
        for m in order[s]:
            v = name[(s, m)]
            vars.append(v)
            b = {l: set() for l in a.alphabet}
            musts = []
            for (l, t) in sorted(m):
                tgt = [name[(t, m2)] for m2 in order[t]]
                b[l].update(tgt)
                musts.append(frozenset((l, y) for y in tgt))
            dia[v] = musts
            box[v] = b
    inits = [name[(s, m)] for s in a.initials for m in order[s]]
    return NormalForm(a.alphabet, vars, inits, dia, box)


def naa_satisfies(m: Lts, a: Naa) -> bool:
    """Direct satisfaction check of an LTS against an NAA (greatest
    fixpoint over state pairs)."""
    check_same_alphabet(m, a)
    rel = {(p, s) for p in m.states for s in a.states}
    moves = {p: [(l, q) for l in m.alphabet for q in m.successors(p, l)]
             for p in m.states}

    def ok(p, s):
        for acc in a.tran[s]:
            if all(any(l2 == l and (q, t) in rel for (l2, t) in acc)
                   for (l, q) in moves[p]) and \
               all(any(l2 == l and (q, t) in rel for (l2, q) in moves[p])
                   for (l, t) in acc):
                return True
        return False

    changed = True
    while changed:
        changed = False
        for pair in list(rel):
            if not ok(*pair):
                rel.discard(pair)
                changed = True
    return any((m.initial, s) in rel for s in a.initials)


def _sync(m1, m2):
    return frozenset(
        (a, (t1, t2)) for (a, t1) in m1 for (b, t2) in m2 if a == b
    )


def naa_compose(a1: Naa, a2: Naa) -> Naa:
    check_same_alphabet(a1, a2)
    start = {(s1, s2) for s1 in a1.initials for s2 in a2.initials}
    seen = set(start)
    todo = deque(sorted(start))
    tran = {}
    while todo:
        s1, s2 = todo.popleft()
        fam = set()
        for m1 in a1.tran[s1]:
            for m2 in a2.tran[s2]:
                acc = _sync(m1, m2)
                fam.add(frozenset((a, pair_name(*t)) for (a, t) in acc))
                for (_, t) in acc:
                    if t not in seen:
                        seen.add(t)
                        todo.append(t)
        tran[pair_name(s1, s2)] = fam
    return Naa(a1.alphabet, tran.keys(), {pair_name(*p) for p in start}, tran)


def unit(alphabet, name="u") -> Naa:
    alphabet = as_alphabet(alphabet)
    return Naa(alphabet, {name}, {name}, {name: [frozenset((a, name) for a in alphabet)]})


def compose(s1: NormalForm, s2: NormalForm) -> NormalForm:
    """CSP-style composition of normal forms.

    Boxes are paired label-wise; the must sets of a product variable are
    the minimal sets meeting every synchronized product of acceptance sets
    of its components. For locally consistent operands this coincides with
    ``naa_to_nf(naa_compose(nf_to_naa(s1), nf_to_naa(s2)))`` without
    enumerating acceptance sets.
    """
    check_same_alphabet(s1, s2)
    labels = s1.alphabet.labels
    mins1, mins2 = {}, {}

    def accept_mins(s, x, cache):
        if x not in cache:
            cache[x] = min_transversals(s.diamonds[x])
        return cache[x]

    start = {(x1, x2) for x1 in s1.initials for x2 in s2.initials}
    seen = set(start)
    todo = deque(sorted(start))
    dia, box = {}, {}
    while todo:
        x1, x2 = todo.popleft()
        me = pair_name(x1, x2)
        b = {}
        for a in labels:
            b[a] = {(y1, y2) for y1 in s1.boxes[x1][a] for y2 in s2.boxes[x2][a]}
            for p in b[a]:
                if p not in seen:
                    seen.add(p)
                    todo.append(p)
        accs = [
            _sync(m1, m2)
            for m1 in accept_mins(s1, x1, mins1)
            for m2 in accept_mins(s2, x2, mins2)
        ]
        musts = min_transversals(accs)
        dia[me] = [frozenset((a, pair_name(*t)) for (a, t) in n) for n in musts]
        box[me] = {a: {pair_name(*p) for p in ps} for a, ps in b.items()}
    return NormalForm(s1.alphabet, dia.keys(), {pair_name(*p) for p in start}, dia, box)


def compose_via_naa(s1: NormalForm, s2: NormalForm) -> NormalForm:
    """Reference route through acceptance automata (exponential)."""
    return naa_to_nf(naa_compose(nf_to_naa(s1), nf_to_naa(s2)))


def is_deterministic(a: Naa) -> bool:
    if len(a.initials) != 1:
        return False
    for s in a.states:
        target = {}
        for m in a.tran[s]:
            for (l, t) in m:
                if target.setdefault(l, t) != t:
                    return False
    return True


def _delta(s: NormalForm, x, a):
    ys = s.boxes[x][a]
    return next(iter(ys)) if ys else None


def quotient_nf_det(s3: NormalForm, s1: NormalForm, sink="tt") -> NormalForm:
    """Residual of `s3` by `s1` for deterministic normal forms.

    Every X satisfies ``compose(s1, X) <= s3`` iff ``X <= result``.
    Labels `s1` can never take lead to a sink that allows everything.
    """
    check_same_alphabet(s3, s1)
    if not (is_deterministic_nf(s3) and is_deterministic_nf(s1)):
        raise NotDeterministic("quotient_det needs deterministic operands")
    labels = s1.alphabet.labels
    (i3,), (i1,) = s3.initials, s1.initials
    start = (i3, i1)
    seen = {start}
    todo = deque([start])
    dia = {sink: []}
    box = {sink: {a: {sink} for a in labels}}
    while todo:
        x3, x1 = todo.popleft()
        me = pair_name(x3, x1)
        b = {}
        for a in labels:
            d1 = _delta(s1, x1, a)
            d3 = _delta(s3, x3, a)
            if d1 is None:
                b[a] = {sink}
            elif d3 is None:
                b[a] = set()
            else:
                b[a] = {pair_name(d3, d1)}
                if (d3, d1) not in seen:
                    seen.add((d3, d1))
                    todo.append((d3, d1))
        divisor_choices = min_transversals(
            {l for (l, _) in n} for n in s1.diamonds[x1]
        )
        musts = set()
        for n3 in s3.diamonds[x3]:
            need = {l for (l, _) in n3}
            for choice in divisor_choices:
                musts.add(frozenset(
                    (a, pair_name(_delta(s3, x3, a), _delta(s1, x1, a)))
                    for a in need & choice
                ))
        dia[me] = musts
        box[me] = b
    return NormalForm(s1.alphabet, dia.keys(), {pair_name(*start)}, dia, box)


def quotient_det(s3: Naa, s1: Naa) -> Naa:
    if not (is_deterministic(s3) and is_deterministic(s1)):
        raise NotDeterministic("quotient_det needs deterministic operands")
    return nf_to_naa(quotient_nf_det(naa_to_nf(s3), naa_to_nf(s1)))


def family_size(alphabet, k: int) -> int:
    """Number of structures `enumerate_family` yields."""
    alphabet = as_alphabet(alphabet)
    if k < 1:
        raise ValueError("k must be at least 1")
    total = 1
    for n in range(1, k + 1):
        per_var = 0
        for may_sizes in product(range(n + 1), repeat=len(alphabet)):
            ways = 1
            for m in may_sizes:
                ways *= _binom(n, m)
            per_var += ways * 2 ** (2 ** sum(may_sizes))
        total += (2 ** n) * per_var ** n
    return total


def _binom(n, r):
    from math import comb
    return comb(n, r)


def enumerate_family(alphabet, k: int) -> Iterator[NormalForm]:
    """Every consistent normal form over at most `k` variables ``q0..``.

    Starts with bottom; then, for each variable count, every box map,
    every family of must sets inside the may-sets, and every initial set.
    """
    alphabet = as_alphabet(alphabet)
    if k < 1:
        raise ValueError("k must be at least 1")
    labels = alphabet.labels
    yield bottom(alphabet)
    for n in range(1, k + 1):
        names = [f"q{i}" for i in range(n)]
        box_options = [list(_subsets(names)) for _ in labels]
        per_var = []
        for boxes in product(*box_options):
            bmap = {a: frozenset(ys) for a, ys in zip(labels, boxes)}
            may = [(a, y) for a in labels for y in bmap[a]]
            musts = [frozenset(m) for m in _subsets(may)]
            for fam in _subsets(musts):
                per_var.append((bmap, fam))
        for combo in product(per_var, repeat=n):
            dia = {x: c[1] for x, c in zip(names, combo)}
            box = {x: c[0] for x, c in zip(names, combo)}
            for inits in _subsets(names):
                yield NormalForm(alphabet, names, inits, dia, box, check=False)


def quotient_bounded(s3: NormalForm, s1: NormalForm, k: int = 1) -> NormalForm:
    """Join of every family member X with ``compose(s1, X) <= s3``."""
    check_same_alphabet(s3, s1)
    good = [x for x in enumerate_family(s3.alphabet, k) if leq(compose(s1, x), s3)]
    if not good:
        return bottom(s3.alphabet)
    return join_all(s3.alphabet, good)
