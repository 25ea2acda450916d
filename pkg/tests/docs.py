"""Generated documents of every kind, for round-trip tests."""

from spectheory.audit import AuditReport, LawResult
from spectheory.compose import nf_to_naa
from spectheory.generators import GenConfig, gen_hmlr, gen_lts, gen_nf, rng_for
from spectheory.logic import Hmlr

CFG = GenConfig(seed=31, max_vars=4, max_states=4, alphabet_size=3, inconsistency=0.1)


def _lts(i):
    return gen_lts(CFG, i)


def _hmlr(i):
    h = gen_hmlr(CFG, i, depth=4)
    if i % 3 == 0:
        # Initial sets of any size, including none.
        rng = rng_for(CFG, "inits", i)
        h = Hmlr(h.alphabet, h.vars, rng.sample(h.vars, rng.randint(0, len(h.vars))),
                 h.declarations())
    return h


def _nf(i):
    return gen_nf(CFG, i)


def _naa(i):
    return nf_to_naa(gen_nf(CFG, i, "naa"))


def _report(i):
    rng = rng_for(CFG, "report", i)
    laws = tuple(
        LawResult(f"suite{k % 3}/law-{k}", f"suite{k % 3}", rng.randint(0, 600),
                  rng.randint(0, 3),
                  rng.choice([None, "kind: nf\nalphabet: a\nvars:\ninitials:\n", "x \"q\"\n---\n"]),
                  rng.random() < 0.8)
        for k in range(rng.randint(0, 6))
    )
    return AuditReport(rng.randint(0, 2**63), rng.choice(["logical", "uni. comp. & log."]),
                       "b.d. lattice", {"L": "yes", "C": rng.choice(["yes", "no"]), "Q": "no"},
                       "none", laws)


DOC_GENERATORS = {"lts": _lts, "hmlr": _hmlr, "nf": _nf, "naa": _naa, "report": _report}


def golden_corpus() -> str:
    """A fixed set of documents of every kind plus a small audit report."""
    from spectheory.audit import audit
    from spectheory.textio import serialize

    parts = [serialize(DOC_GENERATORS[k](i)) for k in sorted(DOC_GENERATORS) for i in range(12)]
    parts.append(serialize(audit(GenConfig(seed=2024, cases=3))))
    return "".join(p + "===\n" for p in parts)
