from __future__ import annotations

import pytest
from hypothesis import given

from mptcheck.logic import (TRUE, Always, And, Atom, Const, Domain, Eventually, Iff, Implies,
                            Leads, Next, Not, Or, ParseError, Until, Var, Variable, Vocabulary,
                            parse_formula)
from mptcheck.logic.syntax import render
from mptcheck.oracle import enumerate_lassos, eval_formula

from gen import atom, bools
from test_logic import ABC, formulas

XYZ = bools("x", "y", "z")


def p(text, vocab=XYZ, **kw):
    return parse_formula(text, vocab, **kw)


def test_bool_compared_with_a_literal():
    f = p("G (x >= 0)")
    assert f == Always(Atom(">=", Var("x"), Const(0)))
    v = bools("x")
    assert all(eval_formula(f, w) for w in enumerate_lassos(v, 1, 2))
    assert all(eval_formula(p("x > 0", v), w) == eval_formula(atom("x"), w)
               for w in enumerate_lassos(v, 1, 2))


def test_constants_and_bare_booleans():
    assert p("true") == TRUE
    assert p("x") == atom("x")
    assert p("x L y") == Leads(atom("x"), atom("y"))


@pytest.mark.parametrize("text, tree", [
    ("x -> y -> z", Implies(atom("x"), Implies(atom("y"), atom("z")))),
    ("x U y U z", Until(atom("x"), Until(atom("y"), atom("z")))),
    ("x | y & z", Or((atom("x"), And((atom("y"), atom("z")))))),
    ("!x U y", Until(Not(atom("x")), atom("y"))),
    ("X x & y", And((Next(atom("x")), atom("y")))),
    ("x <-> y -> z", Iff(atom("x"), Implies(atom("y"), atom("z")))),
    ("F G x", Eventually(Always(atom("x")))),
])
def test_precedence_and_associativity(text, tree):
    assert p(text) == tree


@pytest.mark.parametrize("alias, plain", [
    ("x ∧ y", "x & y"), ("x and y", "x & y"), ("x || y", "x | y"), ("x ⇒ y", "x -> y"),
    ("□ ◇ x", "G F x"), ("¬x", "!x"), ("x == 1", "x = 1"), ("x <=> y", "x <-> y"),
])
def test_operator_aliases(alias, plain):
    assert p(alias) == p(plain)


@pytest.mark.parametrize("text, line, col, fragment", [
    ("x &", 1, 4, "end of input"),
    ("x & w", 1, 5, "unknown identifier 'w'"),
    ("x + 1", 1, 3, "integer operands"),
    ("G (x = 1", 1, 9, "expected ')'"),
    ("x @ y", 1, 3, "unexpected character"),
])
def test_errors_carry_positions(text, line, col, fragment):
    with pytest.raises(ParseError) as info:
        p(text)
    assert (info.value.line, info.value.col) == (line, col)
    assert fragment in info.value.message


def test_error_position_is_offset_by_the_start():
    with pytest.raises(ParseError) as info:
        p("x & w", line=7, col=10)
    assert (info.value.line, info.value.col) == (7, 14)


def test_integer_arithmetic_and_enums():
    v = Vocabulary((Variable("n", Domain.int_range(0, 3)),
                    Variable("c", Domain.enum("red", "green"))))
    f = p("n + 1 <= 2 & c = green", v)
    assert isinstance(f, And)
    with pytest.raises(ParseError):
        p("c < 1", v)


def test_macros_expand_in_place():
    sub = p("x & y")
    assert p("G busy", macros={"busy": sub}) == Always(sub)


_WORDS = list(enumerate_lassos(bools("a", "b", "c"), 1, 2))


@given(formulas)
def test_render_reparses_to_an_equivalent_formula(f):
    g = parse_formula(render(f), ABC)
    # the parser folds constants, so compare meaning and then shape after one pass
    assert all(eval_formula(g, w) == eval_formula(f, w) for w in _WORDS)
    assert parse_formula(render(g), ABC) == g
