from __future__ import annotations

import random

import pytest

from mptcheck.automata import (CapExceeded, Lasso, Nba, accepts_lasso, contains, dump,
                               equivalent, extend, find_lasso, intersect, is_empty, limits,
                               ltl_to_nba, project, qptl_to_nba, reduce_bisim,
                               reduce_simulation, satisfiable, union, valid)
from mptcheck.automata.qptl import clear_caches
from mptcheck.logic import (FALSE, TRUE, And, ExistsTrace, ForallTrace, Not, Or, Variable,
                            Vocabulary, parse_formula)
from mptcheck.oracle import enumerate_lassos, eval_formula

from gen import BOOL, bools, random_formula

PQ = bools("p", "q")
WORDS = list(enumerate_lassos(PQ, 2, 2))


def nba(text, vocab=PQ):
    return ltl_to_nba(parse_formula(text, vocab), vocab)


def agrees_with_oracle(a: Nba, f, words=WORDS) -> bool:
    return all(accepts_lasso(a, w) == eval_formula(f, w) for w in words)


@pytest.mark.parametrize("text", [
    "G p", "F p", "G F p", "F G p", "p U q", "p R q", "p L q", "X (p & !q)", "G (p -> F q)",
    "!(p U q) & F q", "true", "false",
])
def test_translation_matches_the_reference_evaluator(text):
    f = parse_formula(text, PQ)
    assert agrees_with_oracle(ltl_to_nba(f, PQ), f)


def test_random_translations_match_the_reference_evaluator():
    rng = random.Random(7)
    for _ in range(60):
        f = random_formula(rng, ["p", "q"])
        assert agrees_with_oracle(ltl_to_nba(f, PQ), f), f


def test_boolean_operations_on_automata():
    rng = random.Random(11)
    for _ in range(30):
        f, g = random_formula(rng, ["p", "q"]), random_formula(rng, ["p", "q"])
        a, b = ltl_to_nba(f, PQ), ltl_to_nba(g, PQ)
        assert agrees_with_oracle(intersect(a, b), And((f, g)))
        assert agrees_with_oracle(union(a, b), Or((f, g)))
        assert agrees_with_oracle(reduce_bisim(a), f)
        assert agrees_with_oracle(reduce_simulation(a), f)


def test_projection_is_existential():
    a = project(nba("G (p <-> q)"), "q")
    assert equivalent(a, nba("true", bools("p"))).holds
    b = project(nba("G (p & !q) | G (q & !p)"), "q")
    assert equivalent(b, nba("G p | G !p", bools("p"))).holds


def test_extend_leaves_new_variables_free():
    a = extend(nba("G p", bools("p")), PQ)
    assert equivalent(a, nba("G p")).holds


def test_second_order_quantifiers():
    xy = bools("x", "y")
    x = Variable("x", BOOL)
    f = ExistsTrace(x, parse_formula("G (y -> x)", xy))
    assert valid(f, bools("y")) is None
    assert satisfiable(ForallTrace(Variable("y", BOOL), FALSE), Vocabulary(())) is None
    # "p holds at even positions" needs a quantifier
    px = bools("p", "x")
    even = ExistsTrace(x, parse_formula("x & G (x -> X !x) & G (!x -> X x) & G (x -> p)", px))
    a = qptl_to_nba(even, bools("p"))
    v = bools("p")
    for w in enumerate_lassos(v, 2, 2):
        positions = len(w.stem) + 2 * len(w.loop)
        expected = all(w.letter_at(i)[0] == 1 for i in range(0, positions, 2))
        assert accepts_lasso(a, w) == expected, w


def test_emptiness_and_witnesses():
    assert is_empty(nba("false")) is None
    w = is_empty(nba("F (p & !q) & G F q"))
    assert w is not None
    assert eval_formula(parse_formula("F (p & !q) & G F q", PQ), w)
    assert find_lasso(Nba.empty(PQ)) is None


def test_containment_and_equivalence():
    assert contains(nba("G p"), nba("F p")).holds
    v = contains(nba("F p"), nba("G p"))
    assert not v.holds
    assert accepts_lasso(nba("F p"), v.witness) and not accepts_lasso(nba("G p"), v.witness)
    e = equivalent(nba("F p"), nba("G p"))
    assert not e.holds and e.direction == "left-not-in-right"
    assert equivalent(nba("!(p U q)"), nba("!p R !q")).holds


def test_lasso_round_trip():
    w = Lasso.from_indices(PQ, [0, 3], [1])
    assert w.stem_indices() == [0, 3] and w.loop_indices() == [1]
    assert accepts_lasso(nba("X (p & q) & X X G (p & !q)"), w) == \
        eval_formula(parse_formula("X (p & q) & X X G (p & !q)", PQ), w)


def test_dump_format():
    text = dump(nba("G p", bools("p")), "G p")
    assert text == ("automaton G p\nvocabulary: p: bool\nstates: 1\ninitial: 0\n"
                    "accepting: 0\n0 --[p = 1]--> 0\n")


def test_cap_error_names_the_cap():
    clear_caches()
    big = bools(*"abcdef")
    f = parse_formula("G F a & G F b & G F c & G F d & G F e & G F f", big)
    with limits(max_states=3):
        with pytest.raises(CapExceeded) as info:
            ltl_to_nba(f, big)
    assert info.value.cap == "max-states" and info.value.limit == 3
    assert "max-states=3" in str(info.value)
    clear_caches()


def test_zero_variable_vocabulary():
    v = Vocabulary(())
    assert valid(TRUE, v) is None
    assert satisfiable(FALSE, v) is None
    assert is_empty(ltl_to_nba(Not(TRUE), v)) is None
    assert len(list(enumerate_lassos(v, 0, 1))) == 1  # the single empty letter
