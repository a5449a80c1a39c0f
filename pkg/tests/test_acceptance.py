"""Acceptance gate: one or more tests per criterion; the terminal summary
prints a PASS/FAIL line per criterion.  Every check runs under
``max_states=100000`` and must finish within ten seconds."""

from __future__ import annotations

import time
from pathlib import Path

import pytest

from mptcheck.automata import Lasso, accepts_lasso, equivalent, limits
from mptcheck.cli import Options, parse_spec, render, run_checks
from mptcheck.logic import FALSE, TRUE, Domain, Variable, Vocabulary, parse_formula
from mptcheck.oracle import explore_sts
from mptcheck.sts import Sts, compose_local, globalize, illegal, naive_compose, refines_sts
from mptcheck.transformers import (Assert, ConstrainOutputs, Demonic, Fail, Given, Guarded,
                                   Havoc, LocalSts, Magic, Relational, Seq, assert_live,
                                   compatible, equal, fail, fail_formula, guard_formula, live_havoc,
                                   normalize, refines, req_resp, same_language, wp_formula)

import suites

SPEC = Path(__file__).resolve().parent.parent / "specs" / "worked_examples.spec"
LIMIT = 10.0
BOOL = Domain.boolean()


def V(*vs):
    return Vocabulary(tuple(vs))


def P(text, *vs):
    return parse_formula(text, V(*vs))


def timed(fn, *args):
    with limits(max_states=100_000):
        start = time.perf_counter()
        out = fn(*args)
        elapsed = time.perf_counter() - start
    assert elapsed < LIMIT, f"check took {elapsed:.1f}s"
    return out


x, y, z = (Variable(n, BOOL) for n in "xyz")
I3 = Domain.int_range(0, 2)
xi, yi, zi = (Variable(n, I3) for n in "xyz")


def test_criterion_01_incompatible_producer_and_consumer():
    a = Guarded(P("G (x >= 0)", xi), V(), V(xi))
    b = Relational(P("G F (x = 1)", xi), P("G (y = x)", xi, yi), V(xi), V(yi))
    v = timed(compatible, a, b)
    assert not v.holds
    assert v.witness is None


def _responder():
    c = Guarded(P("G (y -> F x)", x, y), V(y), V(x))
    b = Relational(P("G F x", x), P("G (y = x)", x, y), V(x), V(y))
    return c, b


def test_criterion_02_compatible_responder_with_witness():
    c, b = _responder()
    v = timed(compatible, c, b)
    assert v.holds
    # the witness is a legal input: it keeps the composition out of fail
    comp = normalize(Seq(c, b))
    assert accepts_lasso(comp.pre_nba(), v.witness)


def test_criterion_02_derived_assumption():
    c, b = _responder()
    comp = normalize(Seq(c, b))
    v = timed(same_language, fail_formula(comp), P("!(G F (y = 1))", y), comp.in_vocab)
    assert v.holds


def test_criterion_02_refinement_of_responder():
    d = normalize(Guarded(P("G F y & G (y -> F x)", x, y), V(y), V(x)))
    e = normalize(Demonic(P("G (y = 1 -> x = 1)", x, y), V(y), V(x)))
    assert timed(refines, d, e).holds


def test_criterion_03_builtin_identities():
    h = Havoc(V(x), V(y))
    lh = live_havoc(V(y), V(z))
    assert timed(equal, normalize(Seq(h, assert_live(V(y)))), normalize(Fail(V(x), V(y)))).holds
    assert timed(equal, normalize(Seq(h, lh)), normalize(Fail(V(x), V(z)))).holds
    rr = req_resp(V(x), V(y))
    assert timed(equal, normalize(Seq(rr, lh)), normalize(live_havoc(V(x), V(z)))).holds


def test_criterion_04_division_fail_and_guard():
    r = P("G (y != 0 & z = x / y)", xi, yi, zi)
    s1 = normalize(Demonic(r, V(xi, yi), V(zi)))
    s2 = normalize(Seq(Assert(P("G (y != 0)", xi, yi), V(xi, yi)), Demonic(r, V(xi, yi), V(zi))))
    iv = s1.in_vocab
    assert timed(same_language, fail_formula(s1), FALSE, iv).holds
    assert timed(same_language, fail_formula(s2), P("F (y = 0)", xi, yi), iv).holds
    assert timed(same_language, guard_formula(s1), P("G (y != 0)", xi, yi), iv).holds
    assert timed(same_language, guard_formula(s2), TRUE, iv).holds


def test_criterion_05_nondeterministic_system_fails():
    u = Variable("u", BOOL, "state")
    s = Sts(V(u), V(x), V(y), P("u", u), P("u", u), P("y = x", x, y))
    assert timed(equal, globalize(s), normalize(Fail(V(x), V(y)))).holds


def _bcounter():
    c = Variable("u", I3, "state")
    return Sts(V(c), V(x), V(yi), P("u = 0", c), P("u <= 1", c),
               P("u' = (if x then u + 1 else u) & y = u'", c, x, yi))


def test_criterion_06_bounded_counter_illegal_inputs():
    s = _bcounter()
    il = timed(illegal, s)
    all_true = Lasso(s.in_vocab, (), ((1,),))
    all_false = Lasso(s.in_vocab, (), ((0,),))
    assert accepts_lasso(il, all_true)
    assert not accepts_lasso(il, all_false)
    # the explicit exploration oracle agrees on both words
    assert explore_sts(s, all_true, 6).illegal
    assert explore_sts(s, all_false, 6).verdict == "legal"
    assert timed(lambda: equivalent(il, fail(globalize(s))).holds)


def test_criterion_07_local_composition_is_not_closed():
    u, v = (Variable(n, Domain.int_range(0, 1), "state") for n in "uv")
    s = Sts(V(u), V(x), V(y), P("u = 0", u), TRUE, P("u = 0 & u' = 1", u))
    t = Sts(V(v), V(y), V(z), TRUE, FALSE, TRUE)
    seq_path = normalize(Seq(LocalSts(s), LocalSts(t)))
    naive = globalize(naive_compose(s, t))
    assert timed(equal, seq_path, normalize(Magic(V(x), V(z)))).holds
    assert timed(equal, naive, normalize(Fail(V(x), V(z)))).holds
    verdict = timed(equal, seq_path, naive)
    assert not verdict.holds and verdict.witness is not None
    assert timed(equal, compose_local(s, t), seq_path).holds


def test_criterion_08_weakest_preconditions_of_stepwise_relation():
    d = Domain.int_range(0, 12)
    xw, yw = Variable("x", d), Variable("y", d)
    s = normalize(Guarded(P("G (x > 0 & (y = x | y = x + 1))", xw, yw), V(xw), V(yw)))
    got = wp_formula(s, P("G F (y < 10)", yw))
    assert timed(same_language, got, P("G (x > 0 & F (x < 9))", xw), s.in_vocab).holds
    got = wp_formula(s, P("G F (y = 10)", yw))
    assert timed(same_language, got, FALSE, s.in_vocab).holds


def _example():
    u = Variable("u", Domain.int_range(-2, 4), "state")
    s = Sts(V(u), V(x), V(y), P("u = 0", u), P("-1 <= u & u <= 3", u),
            P("((x & u' = u + 1) | (!x & u' = u - 1) | u' = 0) & (y <-> u' = 0)", u, x, y))
    return s, ConstrainOutputs(LocalSts(s), P("G F y", y))


def test_criterion_09_liveness_example_weakest_precondition():
    s, ex = _example()
    c = normalize(ex)
    prec_g = normalize(LocalSts(s)).pre
    assert timed(same_language, wp_formula(c, P("G F y", y)), prec_g, c.in_vocab).holds


def test_criterion_09_liveness_example_refinements():
    s, ex = _example()
    c = normalize(ex)
    assert timed(refines, c, normalize(Demonic(P("G y", y), V(x), V(y)))).holds
    alt = Assert(P("G (x <-> !X x)", x), V(x))
    a1 = normalize(Seq(alt, ex))
    a2 = normalize(Seq(alt, LocalSts(s)))
    assert timed(refines, a1, a2).holds
    assert timed(refines, a2, normalize(LocalSts(s))).holds
    assert timed(refines_sts, a2, s).holds
    assert timed(equal, c, normalize(Seq(Given(c), Assert(P("G F y", y), V(y))))).holds


@pytest.mark.parametrize("name", list(suites.algebra_laws()))
def test_criterion_10_algebra_laws(name):
    start = time.perf_counter()
    with limits(max_states=100_000):
        agreed, total, failures = suites.run_law(suites.algebra_laws()[name], 200, seed=10)
    assert total >= 200 and agreed == total, failures[:1]
    assert (time.perf_counter() - start) / total < LIMIT


def test_criterion_10_guarded_systems_never_miraculous():
    with limits(max_states=100_000):
        agreed, total, failures = suites.run_guarded_total(200, seed=11)
    assert total >= 200 and agreed == total, failures[:1]


def test_criterion_11_automata_agree_with_reference_evaluator():
    with limits(max_states=100_000):
        agreed, total, failures = suites.run_soundness(1000, seed=12)
    assert total >= 1000 and agreed == total, failures[:3]


def test_criterion_11_complement_coherence():
    with limits(max_states=100_000):
        agreed, total, failures = suites.run_complement_coherence(200, seed=13)
    assert total >= 200 and agreed == total, failures[:3]


def test_criterion_11_projection_commutes_with_always():
    with limits(max_states=100_000):
        agreed, total, failures = suites.run_projection_commutes(50, seed=14)
    assert total >= 50 and agreed == total, failures[:3]


def _run_spec(fmt):
    spec = parse_spec(SPEC.read_text(encoding="utf-8"))
    results = run_checks(spec, Options(max_states=100_000))
    return results, render(results, fmt, spec.warnings)


def test_criterion_12_worked_examples_are_deterministic():
    from mptcheck.automata import clear_caches
    from mptcheck.transformers import _normalize
    first_results, first_text = _run_spec("text")
    _, first_json = _run_spec("json")
    clear_caches()
    _normalize.cache_clear()
    _, second_text = _run_spec("text")
    _, second_json = _run_spec("json")
    assert first_text == second_text
    assert first_json == second_json
    assert all(r.ok for r in first_results), [r.id for r in first_results if not r.ok]


def test_criterion_12_command_line_output_is_byte_identical():
    import subprocess
    import sys
    runs = [subprocess.run([sys.executable, "-m", "mptcheck.cli", str(SPEC), *flags],
                           capture_output=True, check=False)
            for flags in ([], [], ["--json"], ["--json"])]
    assert runs[0].returncode == 0, runs[0].stderr
    assert runs[0].stdout == runs[1].stdout
    assert runs[2].stdout == runs[3].stdout


# the same verdicts through the command-line front end

_SPEC_CACHE = {}


def _spec():
    if "spec" not in _SPEC_CACHE:
        _SPEC_CACHE["spec"] = parse_spec(SPEC.read_text(encoding="utf-8"))
    return _SPEC_CACHE["spec"]


def cli_check(check_id, verdict):
    spec = _spec()
    assert spec.check(check_id) is not None
    (r,) = run_checks(spec, Options(max_states=100_000, only=check_id, timing=True))
    assert r.verdict == verdict and r.ok, (r.verdict, r.detail)
    assert r.timing < LIMIT


def test_criterion_01_spec_file():
    cli_check("incompatible_producer", "INCOMPATIBLE")


@pytest.mark.parametrize("check_id,verdict", [("responder_compatible", "COMPATIBLE"),
                                              ("responder_assumption", "HOLDS"),
                                              ("responder_refinement", "HOLDS")])
def test_criterion_02_spec_file(check_id, verdict):
    cli_check(check_id, verdict)


@pytest.mark.parametrize("check_id", ["havoc_then_live", "havoc_then_live_havoc",
                                      "request_response_live"])
def test_criterion_03_spec_file(check_id):
    cli_check(check_id, "HOLDS")


@pytest.mark.parametrize("check_id", ["div_fail", "div2_fail", "div_grd", "div2_grd"])
def test_criterion_04_spec_file(check_id):
    cli_check(check_id, "HOLDS")


def test_criterion_05_spec_file():
    cli_check("nondet_fails", "HOLDS")


def test_criterion_07_spec_file():
    cli_check("local_composition_magic", "HOLDS")


@pytest.mark.parametrize("check_id", ["wp_often_small", "wp_often_ten"])
def test_criterion_08_spec_file(check_id):
    cli_check(check_id, "HOLDS")


@pytest.mark.parametrize("check_id", ["example_wp", "example_refines_always",
                                      "example_chain_constrained", "example_chain_local",
                                      "example_assert_redundant"])
def test_criterion_09_spec_file(check_id):
    cli_check(check_id, "HOLDS")
