"""Independent reference implementations used only by the tests."""

from itertools import chain, combinations

from spectheory.logic import holds


def partition_bisimilar(m1, m2) -> bool:
    """Naive partition refinement on the disjoint union of both models:
    split blocks by the set of (label, block) signatures until stable."""
    states = [(1, s) for s in m1.states] + [(2, s) for s in m2.states]
    models = {1: m1, 2: m2}
    labels = list(m1.alphabet)

    def succ(st, a):
        side, s = st
        return [(side, t) for t in models[side].successors(s, a)]

    block = {st: 0 for st in states}
    while True:
        sig = {
            st: (block[st], tuple(frozenset(block[t] for t in succ(st, a)) for a in labels))
            for st in states
        }
        ids = {}
        new = {st: ids.setdefault(sig[st], len(ids)) for st in states}
        if len(ids) == len(set(block.values())):
            return new[(1, m1.initial)] == new[(2, m2.initial)]
        block = new


def _powerset(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, r) for r in range(len(xs) + 1))


def knaster_tarski_check(m, h) -> bool:
    """Greatest fixpoint as the union of all post-fixed relations
    R <= step(R). Exponential; only for tiny inputs."""
    decl = h.declarations()
    pairs = [(s, x) for s in sorted(m.states) for x in h.vars]
    union = set()
    for r in _powerset(pairs):
        r = frozenset(r)
        if all(holds(m, decl[x], s, r) for (s, x) in r):
            union |= r
    return any((m.initial, x) in union for x in h.initials)


def naive_refines(s1, s2) -> bool:
    """Modal refinement by recomputing the whole relation until stable."""
    rel = {(x1, x2) for x1 in s1.vars for x2 in s2.vars}
    labels = list(s1.alphabet)
    while True:
        keep = set()
        for (x1, x2) in rel:
            ok = all(
                any(y2 in s2.boxes[x2][a] and (y1, y2) in rel for y2 in s2.vars)
                for a in labels for y1 in s1.boxes[x1][a]
            )
            ok = ok and all(
                any(
                    all(any(b == a and (y1, y2) in rel for (b, y2) in n2) for (a, y1) in n1)
                    for n1 in s1.diamonds[x1]
                )
                for n2 in s2.diamonds[x2]
            )
            if ok:
                keep.add((x1, x2))
        if keep == rel:
            break
        rel = keep
    return all(any((x1, x2) in rel for x2 in s2.initials) for x1 in s1.initials)


def brute_transversals(edges, universe):
    """Inclusion-minimal subsets of `universe` meeting every edge."""
    edges = [set(e) for e in edges]
    hits = [frozenset(c) for c in _powerset(sorted(universe, key=repr))
            if all(set(c) & e for e in edges)]
    return {h for h in hits if not any(o < h for o in hits)}


def all_ltss(alphabet, n):
    """Every LTS over states s0..s(n-1) with initial s0."""
    from spectheory.models import Lts
    states = [f"s{i}" for i in range(n)]
    slots = [(p, a, q) for p in states for a in alphabet for q in states]
    for trans in _powerset(slots):
        yield Lts(alphabet, states, "s0", trans)
