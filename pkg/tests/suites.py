"""Randomized, seed-fixed property suites.

Each suite returns ``(agreed, total, failures)`` so that module tests and the
acceptance gate can share the instances.  Reference sides are built directly
from the closed forms, never through :func:`normalize`'s composition code.
"""

from __future__ import annotations

import random

from mptcheck.automata import accepts_lasso, complement, equivalent, ltl_to_nba, project
from mptcheck.automata import qptl_to_nba
from mptcheck.logic import Always, ExistsValue, Not, Variable, nnf
from mptcheck.logic.syntax import conj, disj, exists_trace, forall_trace, implies
from mptcheck.oracle import eval_formula
from mptcheck.sts import compose_guarded, compose_local, guarded_repr, GuardedSts, Sts
from mptcheck.transformers import (Assert, Demonic, Guarded, Meet, Relational, Seq, Skip,
                                   contract, equal, is_guarded, normalize)

from gen import BOOL, bools, random_formula, random_lasso

X, Y, Z, W = bools("x"), bools("y"), bools("z"), bools("w")
XY = bools("x", "y")
YV = Variable("y", BOOL)


def _case(rng):
    p = random_formula(rng, ["x"], 3)
    p2 = random_formula(rng, ["y"], 3)
    r = random_formula(rng, ["x", "y"], 4)
    r2 = random_formula(rng, ["y", "z"], 4)
    return p, p2, r, r2


def _ex_y(f):
    return exists_trace([YV], f)


def _all_y(f):
    return forall_trace([YV], f)


def algebra_laws():
    """name -> function(rng) returning (lhs contract, rhs contract)."""

    def seq_closed(rng):
        p, p2, r, r2 = _case(rng)
        lhs = normalize(Seq(Relational(p, r, X, Y), Relational(p2, r2, Y, Z)))
        rhs = contract(X, Z, conj(p, _all_y(implies(r, p2))), _ex_y(conj(r, r2)))
        return lhs, rhs

    def meet_closed(rng):
        p, _, r, _ = _case(rng)
        q, _, s, _ = _case(rng)
        lhs = normalize(Meet(Relational(p, r, X, Y), Relational(q, s, X, Y)))
        return lhs, contract(X, Y, conj(p, q), disj(r, s))

    def pre_absorption(rng):
        p, _, r, _ = _case(rng)
        return normalize(Relational(p, r, X, Y)), normalize(Relational(p, conj(p, r), X, Y))

    def assert_into_guarded(rng):
        p, _, r, _ = _case(rng)
        lhs = normalize(Seq(Assert(p, X), Guarded(r, X, Y)))
        return lhs, normalize(Guarded(conj(p, r), X, Y))

    def guarded_seq_closed(rng):
        _, _, r, r2 = _case(rng)
        lhs = normalize(Seq(Guarded(r, X, Y), Guarded(r2, Y, Z)))
        in_r = _ex_y(r)
        in_r2 = exists_trace([Variable("z", BOOL)], r2)
        rel = conj(in_r, _all_y(implies(r, in_r2)), _ex_y(conj(r, r2)))
        return lhs, normalize(Guarded(rel, X, Z))

    def guarded_meet_closed(rng):
        _, _, r, _ = _case(rng)
        _, _, s, _ = _case(rng)
        lhs = normalize(Meet(Guarded(r, X, Y), Guarded(s, X, Y)))
        return lhs, normalize(Guarded(conj(_ex_y(r), _ex_y(s), disj(r, s)), X, Y))

    def skip_unit(rng):
        p, _, r, _ = _case(rng)
        c = Relational(p, r, X, Y)
        return [(normalize(Seq(Skip(X), c)), normalize(c)),
                (normalize(Seq(c, Skip(Y))), normalize(c))]

    def seq_assoc(rng):
        p, p2, r, r2 = _case(rng)
        p3 = random_formula(rng, ["z"], 3)
        r3 = random_formula(rng, ["z", "w"], 4)
        a, b, c = Relational(p, r, X, Y), Relational(p2, r2, Y, Z), Relational(p3, r3, Z, W)
        return normalize(Seq(Seq(a, b), c)), normalize(Seq(a, Seq(b, c)))

    def assert_seq(rng):
        p = random_formula(rng, ["x"], 4)
        q = random_formula(rng, ["x"], 4)
        return normalize(Seq(Assert(p, X), Assert(q, X))), normalize(Assert(conj(p, q), X))

    def demonic_seq(rng):
        _, _, r, r2 = _case(rng)
        lhs = normalize(Seq(Demonic(r, X, Y), Demonic(r2, Y, Z)))
        return lhs, contract(X, Z, conj(), _ex_y(conj(r, r2)))

    return {
        "sequential composition closed form": seq_closed,
        "demonic choice closed form": meet_closed,
        "precondition absorption": pre_absorption,
        "assert moves into guarded system": assert_into_guarded,
        "guarded sequential closed form": guarded_seq_closed,
        "guarded demonic choice closed form": guarded_meet_closed,
        "skip is a two-sided unit": skip_unit,
        "sequential composition is associative": seq_assoc,
        "asserts compose by conjunction": assert_seq,
        "demonic updates compose relationally": demonic_seq,
    }


def run_law(law, cases: int, seed: int):
    rng = random.Random(seed)
    failures = []
    for i in range(cases):
        pairs = law(rng)
        for lhs, rhs in pairs if isinstance(pairs, list) else [pairs]:
            v = equal(lhs, rhs)
            if not v.holds:
                failures.append((i, lhs, rhs, v))
                break
    return cases - len(failures), cases, failures


def run_guarded_total(cases: int, seed: int):
    rng = random.Random(seed)
    failures = []
    for i in range(cases):
        r = random_formula(rng, ["x", "y"], 5)
        v = is_guarded(normalize(Guarded(r, X, Y)))
        if not v.holds:
            failures.append((i, r, v))
    return cases - len(failures), cases, failures


# ---------------------------------------------------------------------------
# automata against the reference evaluator


def run_soundness(cases: int, seed: int):
    """Automaton membership equals reference evaluation on random pairs."""
    rng = random.Random(seed)
    v = bools("a", "b", "c")
    failures = []
    for i in range(cases):
        f = random_formula(rng, ["a", "b", "c"], 6)
        w = random_lasso(rng, v)
        if accepts_lasso(ltl_to_nba(f, v), w) != eval_formula(f, w):
            failures.append((i, f, w))
    return cases - len(failures), cases, failures


def run_complement_coherence(cases: int, seed: int, samples: int = 8, method: str = "construct"):
    """The constructed complement equals the translation of the negation, and
    both agree with the reference evaluator on sampled lassos."""
    rng = random.Random(seed)
    v = bools("a", "b", "c")
    failures = []
    for i in range(cases):
        f = random_formula(rng, ["a", "b", "c"], 6)
        comp = complement(ltl_to_nba(f, v), method=method)
        neg = ltl_to_nba(nnf(Not(f)), v)
        ok = equivalent(comp, neg).holds
        for _ in range(samples):
            w = random_lasso(rng, v)
            ok = ok and accepts_lasso(comp, w) == (not eval_formula(f, w))
        if not ok:
            failures.append((i, f))
    return cases - len(failures), cases, failures


def random_state_formula(rng, names, max_size: int = 5):
    """A formula without temporal operators."""
    from gen import atom
    from mptcheck.logic import And, Iff, Implies, Or

    def grow(budget):
        if budget <= 1:
            return atom(rng.choice(names), rng.choice((0, 1)))
        if budget == 2 or rng.random() < 0.3:
            return Not(grow(budget - 1))
        left = rng.randint(1, budget - 2)
        cls = rng.choice((And, Or, Implies, Iff))
        a, b = grow(left), grow(budget - 1 - left)
        return cls((a, b)) if cls in (And, Or) else cls(a, b)
    return grow(rng.randint(1, max_size))


def run_projection_commutes(cases: int, seed: int):
    """Projecting a variable out of ``G p`` equals ``G`` of the value-level
    existential of ``p``."""
    rng = random.Random(seed)
    v = bools("x", "y", "z")
    rest = bools("y", "z")
    xv = Variable("x", BOOL)
    failures = []
    for i in range(cases):
        p = random_state_formula(rng, ["x", "y", "z"])
        lhs = project(ltl_to_nba(Always(p), v), "x")
        rhs = qptl_to_nba(Always(ExistsValue(xv, p)), rest)
        if not equivalent(lhs, rhs).holds:
            failures.append((i, p))
    return cases - len(failures), cases, failures
