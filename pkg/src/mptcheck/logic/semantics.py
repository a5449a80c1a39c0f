"""Evaluation of terms and temporal-free formulas on single assignments.

Arithmetic that leaves the hull of the integer ranges of the variables it
mentions (or divides by zero) is *undefined*; an atom with an undefined side
is false.
"""

from __future__ import annotations

import operator
from typing import Callable, Mapping

from .syntax import (And, Arith, Atom, Const, ExistsValue, ForallValue, Iff, Implies,
                     Ite, NextVar, Not, Or, Term, Truth, Var, Formula, TEMPORAL,
                     TRACE_QUANTIFIERS, term_vars)
from .vocab import Domain

_CMP = {"=": operator.eq, "!=": operator.ne, "<": operator.lt, "<=": operator.le,
        ">": operator.gt, ">=": operator.ge}

Env = Callable[[str, bool], object]  # (name, is_next) -> value


class EvaluationError(ValueError):
    pass


def range_of(t: Term, domains: Mapping[str, Domain]) -> tuple[int, int] | None:
    if isinstance(t, Arith) and t.bounds is not None:
        return t.bounds
    lo = hi = None
    for name, _ in term_vars(t):
        d = domains.get(name)
        if d is None or d.kind != "int":
            continue
        lo = d.lo if lo is None else min(lo, d.lo)
        hi = d.hi if hi is None else max(hi, d.hi)
    return None if lo is None else (lo, hi)


def compile_term(t: Term, domains: Mapping[str, Domain]) -> Callable[[Env], object]:
    if isinstance(t, Const):
        v = t.value
        return lambda env: v
    if isinstance(t, Var):
        name = t.name
        return lambda env: env(name, False)
    if isinstance(t, NextVar):
        name = t.name
        return lambda env: env(name, True)
    if isinstance(t, Ite):
        c = compile_formula(t.cond, domains)
        a = compile_term(t.then, domains)
        b = compile_term(t.other, domains)
        return lambda env: a(env) if c(env) else b(env)
    if isinstance(t, Arith):
        left = compile_term(t.left, domains)
        right = compile_term(t.right, domains)
        bounds = range_of(t, domains)
        op = t.op

        def ev(env):
            x, y = left(env), right(env)
            if x is None or y is None:
                return None
            if op == "+":
                r = x + y
            elif op == "-":
                r = x - y
            elif op == "*":
                r = x * y
            else:
                if y == 0:
                    return None
                r = x // y
            if bounds is not None and not bounds[0] <= r <= bounds[1]:
                return None
            return r
        return ev
    raise EvaluationError(f"not a term: {t!r}")


def compile_formula(f: Formula, domains: Mapping[str, Domain]) -> Callable[[Env], bool]:
    """Compile a temporal-free formula into a predicate over an environment."""
    if isinstance(f, Truth):
        v = f.value
        return lambda env: v
    if isinstance(f, Atom):
        lhs = compile_term(f.lhs, domains)
        rhs = compile_term(f.rhs, domains)
        cmp = _CMP[f.op]

        def ev(env):
            a = lhs(env)
            if a is None:
                return False
            b = rhs(env)
            return b is not None and cmp(a, b)
        return ev
    if isinstance(f, Not):
        g = compile_formula(f.arg, domains)
        return lambda env: not g(env)
    if isinstance(f, And):
        gs = [compile_formula(a, domains) for a in f.args]
        return lambda env: all(g(env) for g in gs)
    if isinstance(f, Or):
        gs = [compile_formula(a, domains) for a in f.args]
        return lambda env: any(g(env) for g in gs)
    if isinstance(f, Implies):
        a, b = compile_formula(f.left, domains), compile_formula(f.right, domains)
        return lambda env: (not a(env)) or b(env)
    if isinstance(f, Iff):
        a, b = compile_formula(f.left, domains), compile_formula(f.right, domains)
        return lambda env: a(env) == b(env)
    if isinstance(f, (ExistsValue, ForallValue)):
        name = f.var.name
        values = f.var.domain.values
        inner = dict(domains)
        inner[name] = f.var.domain
        body = compile_formula(f.body, inner)
        pick = any if isinstance(f, ExistsValue) else all

        def ev(env):
            def bind(value):
                return lambda n, nxt: value if n == name else env(n, nxt)
            return pick(body(bind(v)) for v in values)
        return ev
    if isinstance(f, TEMPORAL) or isinstance(f, TRACE_QUANTIFIERS):
        raise EvaluationError(f"temporal formula where a state formula was expected: {f}")
    raise EvaluationError(f"not a formula: {f!r}")


def dict_env(cur: Mapping[str, object], nxt: Mapping[str, object] | None = None) -> Env:
    def env(name, is_next):
        src = nxt if is_next else cur
        if src is None or name not in src:
            raise EvaluationError(f"no value for {name}{chr(39) if is_next else ''}")
        return src[name]
    return env


def eval_state(f: Formula, cur: Mapping[str, object], nxt: Mapping[str, object] | None,
               domains: Mapping[str, Domain]) -> bool:
    return compile_formula(f, domains)(dict_env(cur, nxt))
