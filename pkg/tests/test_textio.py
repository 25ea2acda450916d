import pytest

from spectheory.audit import audit
from spectheory.errors import UndeclaredName
from spectheory.generators import GenConfig
from spectheory.logic import Diamond, Or, TRUE, Var
from spectheory.models import Lts, loop_lts
from spectheory.textio import ParseError, parse, parse_formula, serialize

from docs import DOC_GENERATORS

A_LOOP_TEXT = """kind: lts
alphabet: a b
states: s
initial: s
trans: s a s
"""


def test_loop_round_trip():
    m = loop_lts(["a", "b"], ["a"])
    assert serialize(m) == A_LOOP_TEXT
    assert parse(A_LOOP_TEXT) == m


def test_undeclared_target_named():
    text = A_LOOP_TEXT.replace("trans: s a s", "trans: s a ghost")
    with pytest.raises(UndeclaredName) as e:
        parse(text)
    assert e.value.name == "ghost"
    assert "ghost" in str(e.value)


def test_undeclared_label_and_variable():
    with pytest.raises(UndeclaredName) as e:
        parse(A_LOOP_TEXT.replace("trans: s a s", "trans: s c s"))
    assert e.value.name == "c"
    with pytest.raises(UndeclaredName) as e:
        parse("kind: hmlr\nalphabet: a\nvars: x\ninitials: x\ndecl: x = (dia a (var y))\n")
    assert e.value.name == "y"


def test_permuted_transitions_serialize_identically():
    trans = [("s0", "a", "s1"), ("s1", "b", "s0"), ("s0", "b", "s0"), ("s1", "a", "s1")]
    m1 = Lts(["a", "b"], ["s0", "s1"], "s0", trans)
    m2 = Lts(["a", "b"], ["s1", "s0"], "s0", list(reversed(trans)))
    assert serialize(m1) == serialize(m2)
    shuffled = "kind: lts\nalphabet: a b\nstates: s1 s0\ninitial: s0\n" + "".join(
        f"trans: {p} {a} {q}\n" for p, a, q in reversed(trans))
    assert serialize(parse(shuffled)) == serialize(m1)


def test_alphabet_keeps_declared_order():
    m = loop_lts(["b", "a"])
    assert serialize(m).splitlines()[1] == "alphabet: b a"
    assert parse(serialize(m)) == m


def test_syntax_errors_carry_positions():
    with pytest.raises(ParseError) as e:
        parse("kind: lts\nalphabet: a\nstates s\n")
    assert e.value.line == 3
    with pytest.raises(ParseError) as e:
        parse_formula("(dia a (var x)", lineno=4)
    assert e.value.line == 4 and e.value.col == 15
    with pytest.raises(ParseError) as e:
        parse_formula("(nope a true)", lineno=1)
    assert e.value.col == 2
    with pytest.raises(ParseError):
        parse("kind: tree\n")
    with pytest.raises(ParseError):
        parse("alphabet: a\n")


def test_formula_syntax():
    f = parse_formula("(or (dia a (var x)) true)")
    assert f == Or(Diamond("a", Var("x")), TRUE)


def test_empty_must_and_accept_lines():
    text = "kind: nf\nalphabet: a\nvars: x\ninitials: x\nmust: x =\n"
    s = parse(text)
    assert s.diamonds["x"] == {frozenset()}
    assert serialize(s) == text
    text = "kind: naa\nalphabet: a\nstates: s\ninitials: s\naccept: s =\n"
    a = parse(text)
    assert a.tran["s"] == {frozenset()}
    assert serialize(a) == text


def test_empty_initials_allowed():
    s = parse("kind: nf\nalphabet: a\nvars:\ninitials:\n")
    assert not s.vars and not s.initials


def test_report_round_trip_and_stability():
    cfg = GenConfig(cases=2)
    r = audit(cfg)
    text = serialize(r)
    assert parse(text) == r
    assert serialize(audit(cfg)) == text


@pytest.mark.parametrize("kind", sorted(DOC_GENERATORS))
def test_round_trip_samples(kind):
    gen = DOC_GENERATORS[kind]
    for i in range(60):
        doc = gen(i)
        text = serialize(doc)
        back = parse(text)
        assert back == doc
        assert serialize(back) == text
