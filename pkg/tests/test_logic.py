import pytest
from hypothesis import given, settings, strategies as st

from spectheory.errors import AlphabetMismatch, UndeclaredName
from spectheory.generators import GenConfig, gen_hmlr, gen_lts, rng_for
from spectheory.logic import (
    FALSE, TRUE, And, Box, Diamond, Hmlr, Or, SatRelation, Var, check_hml,
    eval_step, flatten, greatest_fixpoint, is_flat, is_guarded,
)
from spectheory.models import Alphabet, Lts, loop_lts

from oracles import knaster_tarski_check

AB = Alphabet(["a", "b"])
A_LOOP = loop_lts(AB, ["a"])
indices = st.integers(min_value=0, max_value=10**6)


def sys1(body, alphabet=AB, **more):
    return Hmlr(alphabet, ["x", *more], ["x"], {"x": body, **more})


def test_undeclared_references():
    with pytest.raises(UndeclaredName):
        Hmlr(AB, ["x"], ["x"], {"x": Var("y")})
    with pytest.raises(UndeclaredName):
        Hmlr(AB, ["x"], ["x"], {"x": Diamond("c", TRUE)})
    with pytest.raises(UndeclaredName):
        Hmlr(AB, ["x"], ["z"], {"x": TRUE})


def test_eval_step_examples():
    h = sys1(Diamond("a", Var("x")))
    assert eval_step(A_LOOP, h, SatRelation(frozenset())).pairs == frozenset()
    assert eval_step(A_LOOP, h, {("s", "x")}).pairs == {("s", "x")}
    h = sys1(Diamond("b", Var("x")))
    assert eval_step(A_LOOP, h, {("s", "x")}).pairs == frozenset()


def test_check_examples():
    assert check_hml(A_LOOP, sys1(Diamond("a", Var("x"))))
    assert check_hml(A_LOOP, sys1(Box("b", FALSE)))
    assert not check_hml(A_LOOP, sys1(Diamond("b", TRUE)))
    deadlock = Lts(AB, ["s"], "s", [])
    assert not check_hml(deadlock, sys1(Diamond("a", Var("x"))))
    assert not check_hml(A_LOOP, Hmlr(AB, ["x"], [], {"x": TRUE}))


def test_check_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        check_hml(loop_lts(["a"]), sys1(TRUE))


def test_flatten_examples():
    h = sys1(Diamond("a", Var("x")))
    assert flatten(h) == h
    f = flatten(sys1(Diamond("a", Diamond("b", TRUE))))
    assert f.vars == ("x", "_f0")
    assert f.body("x") == Diamond("a", Var("_f0"))
    assert f.body("_f0") == Diamond("b", TRUE)
    h = Hmlr(AB, ["x", "y"], ["x"], {"x": Box("a", Or(Var("x"), Var("y"))), "y": TRUE})
    f = flatten(h)
    assert f.body("x") == Box("a", Var("_f0"))
    assert f.body("_f0") == Or(Var("x"), Var("y"))
    assert is_flat(f)


def test_flatten_avoids_used_names():
    h = Hmlr(AB, ["_f0"], ["_f0"], {"_f0": Diamond("a", And(TRUE, Var("_f0")))})
    assert flatten(h).vars == ("_f0", "_f1")


def test_guardedness_examples():
    assert is_guarded(sys1(Diamond("a", Var("x"))))
    assert not is_guarded(sys1(Var("x")))
    h = Hmlr(AB, ["x", "y"], ["x"], {"x": And(Var("y"), Diamond("a", Var("x"))), "y": Var("x")})
    assert not is_guarded(h)
    assert not is_guarded(sys1(Or(Var("x"), Diamond("a", Var("x")))))


def test_formula_text():
    assert str(Or(Diamond("a", Var("x")), TRUE)) == "(or (dia a (var x)) true)"


CFG = GenConfig(seed=11, max_states=3)


@settings(max_examples=150, deadline=None)
@given(indices, indices)
def test_flatten_preserves_verdict(i, j):
    m, h = gen_lts(CFG, i), gen_hmlr(CFG, j)
    f = flatten(h)
    assert is_flat(f)
    assert check_hml(m, h) == check_hml(m, f)


@settings(max_examples=100, deadline=None)
@given(indices, indices)
def test_eval_step_monotone(i, j):
    m, h = gen_lts(CFG, i), gen_hmlr(CFG, j)
    rng = rng_for(CFG, "mono", i + j)
    full = [(s, x) for s in sorted(m.states) for x in h.vars]
    small = frozenset(p for p in full if rng.random() < 0.4)
    big = small | frozenset(p for p in full if rng.random() < 0.4)
    assert eval_step(m, h, small).pairs <= eval_step(m, h, big).pairs


@settings(max_examples=100, deadline=None)
@given(indices, indices)
def test_iteration_bound(i, j):
    m, h = gen_lts(CFG, i), gen_hmlr(CFG, j)
    _, steps = greatest_fixpoint(m, h)
    # Each non-final step deletes at least one pair; one more confirms.
    assert steps <= len(m.states) * len(h.vars) + 1


TINY = GenConfig(seed=3, max_states=2, max_vars=2)


@settings(max_examples=120, deadline=None)
@given(indices, indices)
def test_agrees_with_knaster_tarski(i, j):
    m, h = gen_lts(TINY, i), gen_hmlr(TINY, j, depth=2)
    assert check_hml(m, h) == knaster_tarski_check(m, h)


def test_unguarded_systems_still_checked():
    # x = x has every pair as a post-fixpoint.
    assert check_hml(A_LOOP, sys1(Var("x")))
    assert knaster_tarski_check(A_LOOP, sys1(Var("x")))
