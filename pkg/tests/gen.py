"""Seeded random generators shared by the test suites."""

from __future__ import annotations

import random

from mptcheck.automata import Lasso
from mptcheck.logic import (Always, And, Atom, Const, Domain, Eventually, Formula, Iff, Implies,
                            Leads, Next, Not, Or, Release, Until, Var, Variable, Vocabulary)
from mptcheck.logic.syntax import size

BOOL = Domain.boolean()


def bools(*names: str, role: str = "input") -> Vocabulary:
    return Vocabulary(tuple(Variable(n, BOOL, role) for n in names))


def vocab(*variables: Variable) -> Vocabulary:
    return Vocabulary(tuple(variables))


def atom(name: str, value: int = 1) -> Formula:
    return Atom("=", Var(name), Const(value))


_UNARY = (Not, Next, Always, Eventually)
_BINARY = (And, Or, Implies, Iff, Until, Release, Leads)


def random_formula(rng: random.Random, names, max_size: int = 6) -> Formula:
    """A quantifier-free LTL formula over boolean ``names`` with ``size <= max_size``."""
    while True:
        f = _grow(rng, names, rng.randint(1, max_size))
        if size(f) <= max_size:
            return f


def _grow(rng: random.Random, names, budget: int) -> Formula:
    if budget <= 1:
        return atom(rng.choice(names), rng.choice((0, 1)))
    if budget == 2 or rng.random() < 0.4:
        return rng.choice(_UNARY)(_grow(rng, names, budget - 1))
    left = rng.randint(1, budget - 2)
    cls = rng.choice(_BINARY)
    a, b = _grow(rng, names, left), _grow(rng, names, budget - 1 - left)
    return cls((a, b)) if cls in (And, Or) else cls(a, b)


def random_lasso(rng: random.Random, v: Vocabulary, max_stem: int = 4, max_loop: int = 4) -> Lasso:
    n = v.num_letters
    stem = [rng.randrange(n) for _ in range(rng.randint(0, max_stem))]
    loop = [rng.randrange(n) for _ in range(rng.randint(1, max_loop))]
    return Lasso.from_indices(v, stem, loop)
