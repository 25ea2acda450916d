"""Acceptance criteria at their stated case counts and tolerances.

Each test records one verdict line; the lines are repeated in the pytest
terminal summary.
"""

import os
import subprocess
import sys
from pathlib import Path

from spectheory.audit import LAWS, audit, blowup_report, format_blowup, run_law
from spectheory.compose import enumerate_family, family_size, naa_to_nf, nf_to_naa
from spectheory.generators import GenConfig, gen_hmlr, gen_lts, gen_nf
from spectheory.logic import check_hml
from spectheory.models import bisimilar, is_bisimulation, loop_lts, lts_compose
from spectheory.specs import chi, leq, mod_equiv, normalize, satisfies
from spectheory.textio import parse, serialize

from acceptance_log import record
from docs import DOC_GENERATORS, golden_corpus
from oracles import partition_bisimilar

HERE = Path(__file__).parent


def _law(law_id):
    return next(l for l in LAWS if l.law_id == law_id)


def _run_laws(ids, cases, cfg=GenConfig()):
    results = [run_law(_law(i), GenConfig(seed=cfg.seed, cases=cases)) for i in ids]
    bad = {r.law_id: r.failures for r in results if r.failures}
    return results, bad


def test_criterion_01_semantics_agreement():
    cfg = GenConfig(seed=101, max_states=4, max_vars=3)
    n, bad, sat = 1000, 0, 0
    for i in range(n):
        m, h = gen_lts(cfg, i), gen_hmlr(cfg, i, depth=3 + i % 2)
        expected = check_hml(m, h)
        sat += expected
        bad += satisfies(m, normalize(h)) != expected
    record(1, bad == 0, f"normalize vs fixed point: {n} pairs, {bad} disagreements "
                        f"({sat} satisfied)")
    assert bad == 0
    assert 0 < sat < n


def test_criterion_02_characterization():
    cfg = GenConfig(seed=102, max_states=4)
    n, bad, oracle_bad, bisim = 1000, 0, 0, 0
    for i in range(n):
        m1 = gen_lts(cfg, i, "left")
        if i % 2:
            m2 = gen_lts(cfg, i, "right")
        else:
            # A relabelled, possibly unfolded copy keeps bisimilar pairs common.
            m2 = lts_compose(m1, loop_lts(m1.alphabet))
            if i % 4 == 0:
                m2 = lts_compose(m2, gen_lts(cfg, i, "unfold"))
        w = bisimilar(m1, m2)
        bisim += w is not None
        bad += (w is not None) != leq(chi(m1), chi(m2))
        oracle_bad += (w is not None) != partition_bisimilar(m1, m2)
        if w is not None:
            oracle_bad += not is_bisimulation(m1, m2, w.pairs)
    ok = bad == 0 and oracle_bad == 0
    record(2, ok, f"bisimilar <=> chi refinement: {n} pairs ({bisim} bisimilar), "
                  f"{bad} disagreements, {oracle_bad} oracle disagreements")
    assert ok
    assert 0 < bisim < n


LATTICE = ["lattice/glb", "lattice/lub", "lattice/meet-distrib", "lattice/join-distrib",
           "lattice/meet-bot", "lattice/meet-top", "lattice/join-bot", "lattice/join-top",
           "lattice/refl", "lattice/trans"]


def test_criterion_03_lattice():
    results, bad = _run_laws(LATTICE, 500)
    record(3, not bad, f"lattice suite: {len(results)} laws x 500 cases, failures {bad or 0}")
    assert not bad


SEMIGROUP = ["semigroup/mono", "semigroup/indep-impl", "semigroup/comm", "semigroup/assoc",
             "unital/unit", "semigroup/compose-bot", "semigroup/join-distrib"]


def test_criterion_04_semigroup():
    results, bad = _run_laws(SEMIGROUP, 500)
    record(4, not bad, f"semigroup/monoid suite: {len(results)} laws x 500 cases, "
                       f"failures {bad or 0}")
    assert not bad


def test_criterion_05_residuation():
    size = family_size(["a", "b"], 1)
    assert size == sum(1 for _ in enumerate_family(["a", "b"], 1))
    (a,), bad_a = _run_laws(["residuation/bounded"], 200)
    (b,), bad_b = _run_laws(["residuation/det"], 200)
    ok = not bad_a and not bad_b
    record(5, ok, f"(a) bounded: {a.cases} pairs x {size} family members, {a.failures} failures; "
                  f"(b) deterministic: {b.cases} pairs x ({size} members + 2 random), "
                  f"{b.failures} failures")
    assert ok


def test_criterion_06_quotient_law():
    ids = [f"residuation/quotient-law-{k}" for k in range(1, 8)]
    results, bad = _run_laws(ids, 100)
    record(6, not bad, f"seven quotient laws x 100 deterministic cases, failures {bad or 0}")
    assert not bad


def test_criterion_07_translation_round_trip():
    n, bad = 0, 0
    for cfg in (GenConfig(seed=107), GenConfig(seed=207, max_vars=4, alphabet_size=3)):
        for i in range(300):
            s = gen_nf(cfg, i, deterministic=i % 5 == 0)
            n += 1
            bad += not mod_equiv(naa_to_nf(nf_to_naa(s)), s)
    record(7, bad == 0, f"naa_to_nf(nf_to_naa(S)) == S: {n} specs, {bad} failures")
    assert bad == 0


def test_criterion_08_audit_reproduction():
    r = audit()
    failed = [l.law_id for l in r.laws if l.asserted and not l.passed]
    ok = (r.flags == {"L": "yes", "C": "yes", "Q": "yes(bounded)"}
          and r.classification == "uni. complete comp. & log." and not failed
          and "bounded candidate family" in r.caveat)
    record(8, ok, f"default audit: L={r.flags['L']} C={r.flags['C']} Q={r.flags['Q']}, "
                  f"'{r.classification}' ({r.structure}), {len(r.laws)} laws")
    probe = r.law("probe/meet-distrib")
    print(f"  probe composition over conjunction (not asserted): "
          f"{probe.failures}/{probe.cases} counterexamples")
    assert ok


def test_criterion_09_blowup_report():
    rows = blowup_report(6)
    print(format_blowup(rows))
    ratios = [r.split_vars / r.input_size for r in rows]
    superlinear_input = (all(b >= a for a, b in zip(ratios, ratios[1:]))
                         and ratios[-1] > 2 * ratios[0])
    vs_tran = {r.split_vars / r.acceptance_sets for r in rows}
    record(9, superlinear_input,
           f"split vars grow super-linearly in input size (ratio {ratios[0]:.1f} -> {ratios[-1]:.1f}); "
           f"vs sum |Tran| the ratio is {sorted(vs_tran)} (one variable per acceptance set); "
           f"reported, not asserted with a constant")
    assert superlinear_input


def _golden_run(hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    code = ("import sys; sys.path.insert(0, sys.argv[1]); from docs import golden_corpus; "
            "sys.stdout.write(golden_corpus())")
    return subprocess.run([sys.executable, "-c", code, str(HERE)], env=env, check=True,
                          capture_output=True, text=True).stdout


def test_criterion_10_formats():
    n_per_kind, bad = 1000, {}
    for kind, gen in sorted(DOC_GENERATORS.items()):
        for i in range(n_per_kind):
            doc = gen(i)
            text = serialize(doc)
            if parse(text) != doc or serialize(parse(text)) != text:
                bad[kind] = bad.get(kind, 0) + 1
    first, second = _golden_run(1), _golden_run(2)
    stored = (HERE / "golden" / "corpus.txt").read_text(encoding="utf-8")
    stable = first == second == stored == golden_corpus()
    ok = not bad and stable
    record(10, ok, f"round trip: {n_per_kind} documents x {len(DOC_GENERATORS)} kinds, "
                   f"failures {bad or 0}; golden corpus byte-stable across runs: {stable}")
    assert ok
