"""Finite labeled transition systems and bisimilarity."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import AlphabetMismatch, UndeclaredName, ValidationError


def pair_name(p: str, q: str) -> str:
    """Canonical name of a product state.

    Components that are themselves pairs are wrapped in angle brackets so
    the encoding stays injective under nesting.
    """
    def wrap(n):
        return f"<{n}>" if "|" in n else n

    return f"{wrap(p)}|{wrap(q)}"


@dataclass(frozen=True)
class Alphabet:
    labels: tuple

    def __init__(self, labels: Iterable[str]):
        labels = tuple(labels)
        if not labels:
            raise ValidationError("alphabet must be nonempty")
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate labels in alphabet {list(labels)}")
        for a in labels:
            if not isinstance(a, str) or not a:
                raise ValidationError(f"bad label {a!r}")
        object.__setattr__(self, "labels", labels)

    def __iter__(self):
        return iter(self.labels)

    def __len__(self):
        return len(self.labels)

    def __contains__(self, a):
        return a in self.labels

    def index(self, a):
        return self.labels.index(a)


def as_alphabet(alphabet) -> Alphabet:
    if isinstance(alphabet, Alphabet):
        return alphabet
    if isinstance(alphabet, str):
        alphabet = [a for a in alphabet.split(",") if a]
    return Alphabet(alphabet)


def check_same_alphabet(x, y):
    if x.alphabet != y.alphabet:
        raise AlphabetMismatch(x.alphabet, y.alphabet)


@dataclass(frozen=True)
class Lts:
    alphabet: Alphabet
    states: frozenset
    initial: str
    transitions: frozenset

    def __init__(self, alphabet, states, initial, transitions):
        alphabet = as_alphabet(alphabet)
        states = frozenset(states)
        transitions = frozenset(tuple(t) for t in transitions)
        if initial not in states:
            raise UndeclaredName("state", initial, "initial")
        for (p, a, q) in transitions:
            if p not in states:
                raise UndeclaredName("state", p, "transition source")
            if q not in states:
                raise UndeclaredName("state", q, "transition target")
            if a not in alphabet:
                raise UndeclaredName("label", a, "transition")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "transitions", transitions)
        succ = {s: {a: set() for a in alphabet} for s in states}
        for (p, a, q) in transitions:
            succ[p][a].add(q)
        object.__setattr__(
            self, "_succ",
            {s: {a: frozenset(ts) for a, ts in d.items()} for s, d in succ.items()},
        )

    def successors(self, state: str, label: str) -> frozenset:
        return self._succ[state][label]

    def with_initial(self, state: str) -> "Lts":
        return Lts(self.alphabet, self.states, state, self.transitions)


@dataclass(frozen=True)
class BisimWitness:
    pairs: frozenset

    def __contains__(self, pair):
        return pair in self.pairs


def _bisim_relation(m1: Lts, m2: Lts) -> set:
    rel = {(p, q) for p in m1.states for q in m2.states}

    def transfer(p, q):
        for a in m1.alphabet:
            s1 = m1.successors(p, a)
            s2 = m2.successors(q, a)
            for p2 in s1:
                if not any((p2, q2) in rel for q2 in s2):
                    return False
            for q2 in s2:
                if not any((p2, q2) in rel for p2 in s1):
                    return False
        return True

    changed = True
    while changed:
        changed = False
        for pair in list(rel):
            if not transfer(*pair):
                rel.discard(pair)
                changed = True
    return rel


def bisimilar(m1: Lts, m2: Lts) -> Optional[BisimWitness]:
    """Greatest bisimulation between `m1` and `m2`, or None.

    Computed by deleting violators of the forth/back transfer conditions
    from the full relation until nothing changes.
    """
    check_same_alphabet(m1, m2)
    rel = _bisim_relation(m1, m2)
    if (m1.initial, m2.initial) not in rel:
        return None
    return BisimWitness(frozenset(rel))


def is_bisimulation(m1: Lts, m2: Lts, pairs) -> bool:
    """Replays the transfer conditions over an explicit relation."""
    pairs = set(pairs)
    if (m1.initial, m2.initial) not in pairs:
        return False
    for (p, q) in pairs:
        for (p0, a, p2) in m1.transitions:
            if p0 == p and not any(
                (p2, q2) in pairs for q2 in m2.successors(q, a)
            ):
                return False
        for (q0, a, q2) in m2.transitions:
            if q0 == q and not any(
                (p2, q2) in pairs for p2 in m1.successors(p, a)
            ):
                return False
    return True


def reachable_states(m: Lts) -> set:
    seen = {m.initial}
    todo = deque([m.initial])
    while todo:
        s = todo.popleft()
        for a in m.alphabet:
            for t in m.successors(s, a):
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
    return seen


def trim(m: Lts) -> Lts:
    keep = reachable_states(m)
    if keep == set(m.states):
        return m
    return Lts(
        m.alphabet, keep, m.initial,
        [(p, a, q) for (p, a, q) in m.transitions if p in keep],
    )


def lts_compose(m1: Lts, m2: Lts) -> Lts:
    """Fully synchronized product, restricted to the reachable part."""
    check_same_alphabet(m1, m2)
    start = (m1.initial, m2.initial)
    seen = {start}
    todo = deque([start])
    trans = []
    while todo:
        p, q = todo.popleft()
        for a in m1.alphabet:
            for p2 in m1.successors(p, a):
                for q2 in m2.successors(q, a):
                    trans.append((pair_name(p, q), a, pair_name(p2, q2)))
                    if (p2, q2) not in seen:
                        seen.add((p2, q2))
                        todo.append((p2, q2))
    return Lts(
        m1.alphabet, [pair_name(p, q) for p, q in seen], pair_name(*start), trans
    )


def loop_lts(alphabet, labels=None, name="s") -> Lts:
    """One state carrying a self-loop for each of `labels` (default: all)."""
    alphabet = as_alphabet(alphabet)
    labels = alphabet.labels if labels is None else labels
    return Lts(alphabet, [name], name, [(name, a, name) for a in labels])
