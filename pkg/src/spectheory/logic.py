"""Hennessy-Milner formulae with variables, recursive formula systems, and
the maximal fixed-point model checker.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .errors import UndeclaredName, ValidationError
from .models import Alphabet, Lts, as_alphabet, check_same_alphabet


@dataclass(frozen=True)
class TrueF:
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class FalseF:
    def __str__(self):
        return "false"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"(and {self.left} {self.right})"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"(or {self.left} {self.right})"


@dataclass(frozen=True)
class Diamond:
    label: str
    sub: "Formula"

    def __str__(self):
        return f"(dia {self.label} {self.sub})"


@dataclass(frozen=True)
class Box:
    label: str
    sub: "Formula"

    def __str__(self):
        return f"(box {self.label} {self.sub})"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return f"(var {self.name})"


Formula = Union[TrueF, FalseF, And, Or, Diamond, Box, Var]
TRUE = TrueF()
FALSE = FalseF()


def conj_all(fs):
    fs = list(fs)
    if not fs:
        return TRUE
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj_all(fs):
    fs = list(fs)
    if not fs:
        return FALSE
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def subformulae(f):
    """Pre-order traversal."""
    yield f
    if isinstance(f, (And, Or)):
        yield from subformulae(f.left)
        yield from subformulae(f.right)
    elif isinstance(f, (Diamond, Box)):
        yield from subformulae(f.sub)


@dataclass(frozen=True)
class Hmlr:
    """A recursive formula system (vars, initial vars, declarations)."""

    alphabet: Alphabet
    vars: tuple
    initials: frozenset
    decl: Mapping

    def __init__(self, alphabet, vars, initials, decl):
        alphabet = as_alphabet(alphabet)
        vars = tuple(vars)
        initials = frozenset(initials)
        if len(set(vars)) != len(vars):
            raise ValidationError("duplicate variables")
        for x in initials:
            if x not in vars:
                raise UndeclaredName("variable", x, "initials")
        decl = dict(decl)
        for x in vars:
            if x not in decl:
                raise ValidationError(f"variable {x!r} has no declaration")
        for x, body in decl.items():
            if x not in vars:
                raise UndeclaredName("variable", x, "declarations")
            for g in subformulae(body):
                if isinstance(g, Var) and g.name not in vars:
                    raise UndeclaredName("variable", g.name, f"declaration of {x}")
                if isinstance(g, (Diamond, Box)) and g.label not in alphabet:
                    raise UndeclaredName("label", g.label, f"declaration of {x}")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "initials", initials)
        object.__setattr__(self, "decl", tuple((x, decl[x]) for x in vars))

    def body(self, x) -> Formula:
        return dict(self.decl)[x]

    def declarations(self) -> dict:
        return dict(self.decl)


@dataclass(frozen=True)
class SatRelation:
    pairs: frozenset

    def __contains__(self, pair):
        return pair in self.pairs


def holds(m: Lts, f: Formula, s: str, rel) -> bool:
    """Evaluate `f` at state `s`, reading variables from `rel`."""
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Var):
        return (s, f.name) in rel
    if isinstance(f, And):
        return holds(m, f.left, s, rel) and holds(m, f.right, s, rel)
    if isinstance(f, Or):
        return holds(m, f.left, s, rel) or holds(m, f.right, s, rel)
    if isinstance(f, Diamond):
        return any(holds(m, f.sub, t, rel) for t in m.successors(s, f.label))
    if isinstance(f, Box):
        return all(holds(m, f.sub, t, rel) for t in m.successors(s, f.label))
    raise TypeError(f"not a formula: {f!r}")


def eval_step(m: Lts, h: Hmlr, r) -> SatRelation:
    pairs = r.pairs if isinstance(r, SatRelation) else frozenset(r)
    decl = h.declarations()
    return SatRelation(
        frozenset((s, x) for (s, x) in pairs if holds(m, decl[x], s, pairs))
    )


def greatest_fixpoint(m: Lts, h: Hmlr):
    """Returns (fixpoint relation, number of iterations)."""
    r = SatRelation(frozenset((s, x) for s in m.states for x in h.vars))
    steps = 0
    while True:
        nxt = eval_step(m, h, r)
        steps += 1
        if nxt == r:
            return r, steps
        r = nxt


def check_hml(m: Lts, h: Hmlr) -> bool:
    check_same_alphabet(m, h)
    if not h.initials:
        return False
    r, _ = greatest_fixpoint(m, h)
    return any((m.initial, x) in r for x in h.initials)


def _is_atomic_arg(f) -> bool:
    return isinstance(f, (Var, TrueF, FalseF))


def is_flat(h: Hmlr) -> bool:
    return all(
        _is_atomic_arg(g.sub)
        for _, body in h.decl
        for g in subformulae(body)
        if isinstance(g, (Diamond, Box))
    )


def flatten(h: Hmlr, prefix: str = "_f") -> Hmlr:
    """Name every compound modal argument with a fresh variable.

    Fresh names are ``<prefix><n>`` with `n` counted in pre-order over the
    declarations, skipping names already in use.
    """
    used = set(h.vars)
    counter = [0]

    def fresh():
        while True:
            name = f"{prefix}{counter[0]}"
            counter[0] += 1
            if name not in used:
                used.add(name)
                return name

    new_vars = list(h.vars)
    new_decl = {}
    pending = []

    def walk(f):
        if isinstance(f, (And, Or)):
            return type(f)(walk(f.left), walk(f.right))
        if isinstance(f, (Diamond, Box)):
            if _is_atomic_arg(f.sub):
                return f
            z = fresh()
            new_vars.append(z)
            pending.append((z, f.sub))
            return type(f)(f.label, Var(z))
        return f

    for x, body in h.decl:
        new_decl[x] = walk(body)
        # Nested arguments are expanded right after their parent body so
        # numbering follows pre-order.
        while pending:
            z, sub = pending.pop(0)
            new_decl[z] = walk(sub)
    if len(new_vars) == len(h.vars):
        return h
    return Hmlr(h.alphabet, new_vars, h.initials, new_decl)


def boolean_refs(f) -> set:
    """Variables occurring in `f` outside every modality."""
    if isinstance(f, Var):
        return {f.name}
    if isinstance(f, (And, Or)):
        return boolean_refs(f.left) | boolean_refs(f.right)
    return set()


def boolean_order(h: Hmlr):
    """Topological order of the boolean-reference graph (dependencies
    first), or None if that graph has a cycle."""
    graph = {x: boolean_refs(body) for x, body in h.decl}
    order, state = [], {}

    def visit(x):
        st = state.get(x)
        if st == 1:
            return False
        if st == 2:
            return True
        state[x] = 1
        for y in sorted(graph[x]):
            if not visit(y):
                return False
        state[x] = 2
        order.append(x)
        return True

    for x in h.vars:
        if not visit(x):
            return None
    return order


def is_guarded(h: Hmlr) -> bool:
    return boolean_order(h) is not None
