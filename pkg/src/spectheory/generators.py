"""Seeded random instances for the law suites."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .logic import (
    FALSE, TRUE, And, Box, Diamond, Hmlr, Or, Var,
)
from .models import Alphabet, Lts
from .specs import NormalForm

LABELS = ("a", "b", "c")


@dataclass(frozen=True)
class GenConfig:
    seed: int = 2024
    alphabet_size: int = 2
    max_vars: int = 3
    max_states: int = 3
    box_density: float = 0.5
    diamond_density: float = 0.5
    cases: int = 100
    inconsistency: float = 0.0

    def __post_init__(self):
        if not 1 <= self.alphabet_size <= 3:
            raise ValueError("alphabet_size must be in 1..3")
        if not 1 <= self.max_vars <= 4:
            raise ValueError("max_vars must be in 1..4")
        if not 1 <= self.max_states <= 4:
            raise ValueError("max_states must be in 1..4")
        for d in (self.box_density, self.diamond_density, self.inconsistency):
            if not 0.0 <= d <= 1.0:
                raise ValueError("densities must lie in [0, 1]")
        if self.cases < 0:
            raise ValueError("cases must be nonnegative")

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(LABELS[: self.alphabet_size])


def rng_for(cfg: GenConfig, stream: str, index: int) -> random.Random:
    # str seeds hash through sha512, so streams are stable across runs.
    return random.Random(f"{cfg.seed}/{stream}/{index}")


def gen_lts(cfg: GenConfig, index: int, stream: str = "lts") -> Lts:
    rng = rng_for(cfg, stream, index)
    n = rng.randint(1, cfg.max_states)
    states = [f"s{i}" for i in range(n)]
    trans = [
        (p, a, q)
        for p in states for a in cfg.alphabet for q in states
        if rng.random() < cfg.box_density / n
    ]
    return Lts(cfg.alphabet, states, "s0", trans)


def gen_nf(cfg: GenConfig, index: int, stream: str = "nf",
           deterministic: bool = False) -> NormalForm:
    """Random consistent normal form.

    Must sets are drawn from the may-set of each variable, so targets are
    always inside the box sets. Empty must sets (local inconsistency) only
    appear with probability ``cfg.inconsistency`` per variable.
    """
    rng = rng_for(cfg, stream, index)
    labels = cfg.alphabet.labels
    n = rng.randint(1, cfg.max_vars)
    names = [f"x{i}" for i in range(n)]
    box, dia = {}, {}
    for x in names:
        b = {}
        for a in labels:
            if deterministic:
                b[a] = {rng.choice(names)} if rng.random() < cfg.box_density else set()
            else:
                b[a] = {y for y in names if rng.random() < cfg.box_density}
        may = sorted((a, y) for a in labels for y in b[a])
        musts = set()
        if may:
            for _ in range(2):
                if rng.random() < cfg.diamond_density:
                    k = rng.randint(1, min(len(may), 2))
                    musts.add(frozenset(rng.sample(may, k)))
        if rng.random() < cfg.inconsistency:
            musts.add(frozenset())
        box[x], dia[x] = b, musts
    if deterministic:
        inits = ["x0"]
    else:
        r = rng.random()
        if r < 0.05:
            inits = []
        elif r < 0.8:
            inits = ["x0"]
        else:
            inits = rng.sample(names, min(n, 2))
    return NormalForm(cfg.alphabet, names, inits, dia, box).trimmed()


def _gen_formula(rng, labels, depth, guarded_vars, free_vars):
    """Random HML(X) formula. Variables in `free_vars` may occur outside
    modalities; `guarded_vars` only below one."""
    r = rng.random()
    if depth <= 0 or r < 0.2:
        choices = [TRUE, FALSE] + [Var(v) for v in free_vars]
        return rng.choice(choices) if rng.random() < 0.5 or not free_vars else Var(rng.choice(free_vars))
    if r < 0.45:
        op = rng.choice([Diamond, Box])
        a = rng.choice(labels)
        if rng.random() < 0.6:
            sub = Var(rng.choice(guarded_vars))
        else:
            sub = _gen_formula(rng, labels, depth - 1, guarded_vars, guarded_vars)
        return op(a, sub)
    op = rng.choice([And, Or])
    return op(
        _gen_formula(rng, labels, depth - 1, guarded_vars, free_vars),
        _gen_formula(rng, labels, depth - 1, guarded_vars, free_vars),
    )


def gen_hmlr(cfg: GenConfig, index: int, stream: str = "hmlr", depth: int = 3) -> Hmlr:
    """Random guarded formula system: a boolean-level reference from
    variable i only targets variables with a larger index."""
    rng = rng_for(cfg, stream, index)
    labels = list(cfg.alphabet.labels)
    n = rng.randint(1, min(cfg.max_vars, 3))
    names = [f"y{i}" for i in range(n)]
    decl = {}
    for i, x in enumerate(names):
        decl[x] = _gen_formula(rng, labels, depth, names, names[i + 1:])
    k = 1 if rng.random() < 0.85 else min(2, n)
    inits = rng.sample(names, k)
    return Hmlr(cfg.alphabet, names, inits, decl)
