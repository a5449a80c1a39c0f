from __future__ import annotations

import random
import warnings

import pytest

from mptcheck.automata import Lasso, accepts_lasso, equivalent, is_empty, ltl_to_nba
from mptcheck.logic import TRUE, Domain, Variable, Vocabulary, parse_formula
from mptcheck.oracle import enumerate_lassos, eval_quantified, explore_sts
from mptcheck.sts import (GuardedSts, Sts, StsError, StsWarning, compose_guarded,
                          compose_guarded_stateless, compose_local, compose_stateless, globalize,
                          guarded_repr, guarded_stateless, illegal, proj_at, refines_sts,
                          stateless_repr)
from mptcheck.transformers import (Demonic, Fail, LocalSts, Magic, Seq, Skip, equal, fail,
                                   is_guarded, normalize, refines)

from gen import BOOL

x, y, z = (Variable(n, BOOL) for n in "xyz")
u, v = Variable("u", BOOL, "state"), Variable("v", BOOL, "state")


def V(*vs):
    return Vocabulary(tuple(vs))


def P(text, *vs):
    return parse_formula(text, V(*vs))


# -- random small systems ----------------------------------------------------------

INITS = ["true", "{s}", "!{s}"]
PRES = ["true", "{s}", "{i} | {s}", "!{i}"]
STEPS = ["{o} = {i}", "{s}' = {i}", "{s}' != {s}", "{o} = {s}", "{o} != {s}'", "{s}' = {s}",
         "{o}", "{i} -> !{o}"]


def _pick(rng, options, **names):
    return rng.choice(options).format(**names)


def random_sts(rng, s, i, o, stateful=True, guarded=False):
    names = dict(s=s.name, i=i.name, o=o.name)
    states = V(s) if stateful else V()
    steps = [t for t in STEPS if stateful or "{s}" not in t]
    r = " & ".join(_pick(rng, steps, **names) for _ in range(rng.randint(1, 2)))
    init = _pick(rng, INITS, **names) if stateful else "true"
    every = (s, i, o) if stateful else (i, o)
    rel = P(r, *every)
    if guarded:
        return GuardedSts(states, V(i), V(o), P(init, *every), rel)
    pres = [t for t in PRES if stateful or "{s}" not in t]
    return Sts(states, V(i), V(o), P(init, *every), P(_pick(rng, pres, **names), *every), rel)


def _seq(a, b):
    return normalize(Seq(LocalSts(a), LocalSts(b)))


CASES = 12


def test_compose_local_agrees_with_sequential_composition():
    rng = random.Random(1)
    for _ in range(CASES):
        a, b = random_sts(rng, u, x, y), random_sts(rng, v, y, z)
        assert equal(compose_local(a, b), _seq(a, b)).holds, (a, b)


def test_compose_guarded_agrees_with_sequential_composition():
    rng = random.Random(2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StsWarning)
        for _ in range(CASES):
            a, b = random_sts(rng, u, x, y, guarded=True), random_sts(rng, v, y, z, guarded=True)
            c = compose_guarded(a, b)
            assert equal(guarded_repr(c), _seq(a, b)).holds, (a, b)


def test_stateless_closed_forms_agree_with_sequential_composition():
    rng = random.Random(3)
    for _ in range(CASES):
        a, b = random_sts(rng, u, x, y, False), random_sts(rng, v, y, z, False)
        assert equal(stateless_repr(a), globalize(a)).holds
        assert equal(compose_stateless(a, b), _seq(a, b)).holds, (a, b)
        ga, gb = (random_sts(rng, u, x, y, False, True), random_sts(rng, v, y, z, False, True))
        assert equal(guarded_stateless(ga), globalize(ga)).holds
        c = compose_guarded_stateless(ga, gb)
        assert equal(guarded_stateless(c), _seq(ga, gb)).holds, (ga, gb)


def test_guarded_representation_matches_globalization():
    rng = random.Random(4)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StsWarning)
        for _ in range(CASES):
            g = random_sts(rng, u, x, y, guarded=True)
            assert equal(guarded_repr(g), globalize(g)).holds, g
            assert is_guarded(guarded_repr(g)).holds


def test_illegal_inputs_match_explicit_exploration():
    rng = random.Random(5)
    words = list(enumerate_lassos(V(x), 2, 2))
    for _ in range(CASES):
        s = random_sts(rng, u, x, y)
        il = illegal(s)
        assert equivalent(il, fail(globalize(s))).holds, s
        for w in words:
            ex = explore_sts(s, w, 32)
            assert ex.verdict != "diverged"
            assert accepts_lasso(il, w) == ex.illegal, (s, w)


# -- fixed examples ----------------------------------------------------------------


def test_trivial_precondition_has_no_illegal_inputs():
    s = Sts(V(u), V(x), V(y), P("u", u), TRUE, P("y = x & u' = u", u, x, y))
    assert is_empty(illegal(s)) is None


def test_unsatisfiable_step_relation_fails_everywhere():
    s = GuardedSts(V(u), V(x), V(y), TRUE, P("false", u, x, y))
    assert equal(guarded_repr(s), normalize(Fail(V(x), V(y)))).holds


def test_empty_initial_states_are_flagged():
    g = GuardedSts(V(u), V(x), V(y), P("false", u), P("y = x", x, y))
    with pytest.warns(StsWarning):
        c = guarded_repr(g)
    assert equal(c, normalize(Magic(V(x), V(y)))).holds


def test_copy_system_is_skip():
    s = GuardedSts(V(), V(x), V(y), TRUE, P("y = x", x, y))
    assert equal(guarded_stateless(s), normalize(Skip(V(x)))).holds
    t = GuardedSts(V(), V(y), V(z), TRUE, P("z = y", y, z))
    assert equal(guarded_stateless(compose_guarded_stateless(s, t)), normalize(Skip(V(x)))).holds


def test_stateless_step_system_weakest_preconditions():
    d = Domain.int_range(0, 12)
    xn, yn = Variable("x", d), Variable("y", d)
    g = GuardedSts(V(), V(xn), V(yn), TRUE, P("x > 0 & (y = x | y = x + 1)", xn, yn))
    c = guarded_stateless(g)
    assert equal(c, stateless_repr(g.as_sts())).holds
    from mptcheck.transformers import same_language, wp_formula
    q1 = P("G F (y < 10)", xn, yn)
    assert same_language(wp_formula(c, q1), P("G (x > 0) & G F (x < 9)", xn), V(xn)).holds
    q2 = P("G F (y = 10)", xn, yn)
    assert same_language(wp_formula(c, q2), P("false", xn), V(xn)).holds


def test_state_names_must_be_distinct():
    with pytest.raises(StsError):
        Sts(V(Variable("x", BOOL, "state")), V(x), V(y), TRUE, TRUE, TRUE)
    with pytest.raises(StsError):
        Sts(V(u), V(x), V(y), TRUE, P("F x", x), TRUE)


# -- refinement of systems ----------------------------------------------------------


def test_system_refinement_agrees_with_contract_refinement():
    rng = random.Random(6)
    specs = [normalize(Demonic(P(r, x, y), V(x), V(y)))
             for r in ("G (y = x)", "true", "G F y", "G (y -> x)")]
    specs.append(globalize(random_sts(rng, u, x, y)))
    agreed = 0
    for _ in range(CASES):
        impl = random_sts(rng, u, x, y)
        for spec in specs + [globalize(impl)]:
            fast = refines_sts(spec, impl)
            slow = refines(spec, globalize(impl))
            assert fast.holds == slow.holds, (spec, impl)
            agreed += 1
    assert agreed == CASES * (len(specs) + 1)


# -- projections ------------------------------------------------------------------


def test_projection_of_always_is_the_step_predicate():
    xy = V(x, y)
    q = ltl_to_nba(P("G (x -> y)", x, y), xy)
    expected = {a for a in xy.letter_list if a != (1, 0)}
    for i in range(4):
        assert proj_at(q, i) == expected


def test_projection_of_a_liveness_property_is_everything():
    q = ltl_to_nba(P("G F x", x), V(x))
    for i in range(3):
        assert proj_at(q, i) == {(0,), (1,)}


def test_projection_of_a_run_language():
    q = ltl_to_nba(P("x & G (x <-> X !x)", x), V(x))
    assert [proj_at(q, i) for i in range(4)] == [{(1,)}, {(0,)}, {(1,)}, {(0,)}]
    with pytest.raises(StsError):
        proj_at(q, -1)


def test_outputs_of_a_guarded_stateless_system_are_stepwise_in_the_projection():
    """Every output allowed on an input lies, step by step, in the projection."""
    xy = V(x, y)
    q = ltl_to_nba(P("G (y != x) & G F y", x, y), xy)
    projections = [proj_at(q, i) for i in range(4)]
    for w in enumerate_lassos(xy, 1, 2):
        if eval_quantified(P("G (y != x) & G F y", x, y), w):
            for i in range(4):
                assert w.letter_at(i) in projections[i]
