"""Syntactic transformations: NNF, next-atom expansion, value-quantifier
elimination, renaming, constant folding and quantifier miniscoping."""

from __future__ import annotations

import itertools
from typing import Mapping

from .semantics import compile_formula, compile_term, range_of
from .syntax import (FALSE, TRUE, Always, And, Arith, Atom, Const, Eventually, ExistsTrace,
                     ExistsValue, ForallTrace, ForallValue, Formula, Iff, Implies, Ite, Leads,
                     NEGATED_RELOP, Next, NextVar, Not, Or, QUANTIFIERS, Release, TEMPORAL,
                     TRACE_QUANTIFIERS, Term, Truth, Until, VALUE_QUANTIFIERS, Var, atom_vars,
                     children, conj, disj, free_vars, rebuild, substitute, term_is_total,
                     term_vars)
from .vocab import Domain, Variable, Vocabulary


class TransformError(ValueError):
    pass


# ---------------------------------------------------------------------------
# negation normal form


_DUAL = {ExistsTrace: ForallTrace, ForallTrace: ExistsTrace,
         ExistsValue: ForallValue, ForallValue: ExistsValue}


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form over atoms, And, Or, Next, Until, Release and quantifiers.

    Negated atoms flip their relation when both sides are total; otherwise the
    negation stays on the atom, since an undefined side makes both the atom and
    its flipped form false.
    """
    if isinstance(f, Truth):
        return Truth(f.value != negate)
    if isinstance(f, Atom):
        if not negate:
            return f
        if term_is_total(f.lhs) and term_is_total(f.rhs):
            return Atom(NEGATED_RELOP[f.op], f.lhs, f.rhs)
        return Not(f)
    if isinstance(f, Not):
        return nnf(f.arg, not negate)
    if isinstance(f, And):
        parts = [nnf(a, negate) for a in f.args]
        return disj(*parts) if negate else conj(*parts)
    if isinstance(f, Or):
        parts = [nnf(a, negate) for a in f.args]
        return conj(*parts) if negate else disj(*parts)
    if isinstance(f, Implies):
        if negate:
            return conj(nnf(f.left), nnf(f.right, True))
        return disj(nnf(f.left, True), nnf(f.right))
    if isinstance(f, Iff):
        a, na = nnf(f.left), nnf(f.left, True)
        b, nb = nnf(f.right), nnf(f.right, True)
        if negate:
            return disj(conj(a, nb), conj(na, b))
        return disj(conj(a, b), conj(na, nb))
    if isinstance(f, Next):
        return Next(nnf(f.arg, negate))
    if isinstance(f, Always):
        if negate:
            return until(TRUE, nnf(f.arg, True))
        return release(FALSE, nnf(f.arg))
    if isinstance(f, Eventually):
        if negate:
            return release(FALSE, nnf(f.arg, True))
        return until(TRUE, nnf(f.arg))
    if isinstance(f, Until):
        if negate:
            return release(nnf(f.left, True), nnf(f.right, True))
        return until(nnf(f.left), nnf(f.right))
    if isinstance(f, Release):
        if negate:
            return until(nnf(f.left, True), nnf(f.right, True))
        return release(nnf(f.left), nnf(f.right))
    if isinstance(f, Leads):
        # p L q = !(p U !q)
        if negate:
            return until(nnf(f.left), nnf(f.right, True))
        return release(nnf(f.left, True), nnf(f.right))
    if isinstance(f, QUANTIFIERS):
        cls = _DUAL[type(f)] if negate else type(f)
        body = nnf(f.body, negate)
        if isinstance(body, Truth):
            return body
        return cls(f.var, body)
    raise TransformError(f"not a formula: {f!r}")


def until(a: Formula, b: Formula) -> Formula:
    if b in (TRUE, FALSE) or a == FALSE:
        return b
    return Until(a, b)


def release(a: Formula, b: Formula) -> Formula:
    if b in (TRUE, FALSE) or a == TRUE:
        return b
    return Release(a, b)


def to_nnf(f: Formula) -> Formula:
    """NNF of a formula without trace quantifiers (value quantifiers are dualized)."""
    if any(isinstance(g, TRACE_QUANTIFIERS) for g in _nodes(f)):
        raise TransformError("to_nnf does not accept trace quantifiers")
    return nnf(f)


def _nodes(f: Formula):
    yield f
    for c in children(f):
        yield from _nodes(c)


# ---------------------------------------------------------------------------
# ranges and constant folding


def pin_ranges(f: Formula, domains: Mapping[str, Domain]) -> Formula:
    """Record on every arithmetic node the range its variables currently give it,
    so that later substitution of constants keeps the overflow semantics."""

    def term(t: Term) -> Term:
        if isinstance(t, Arith):
            known = all(n in domains for n, _ in term_vars(t))
            bounds = range_of(t, domains) if known else t.bounds
            return Arith(t.op, term(t.left), term(t.right), bounds)
        if isinstance(t, Ite):
            return Ite(pin_ranges(t.cond, domains), term(t.then), term(t.other))
        return t

    if isinstance(f, Atom):
        return Atom(f.op, term(f.lhs), term(f.rhs))
    if isinstance(f, QUANTIFIERS):
        inner = dict(domains)
        inner[f.var.name] = f.var.domain
        return type(f)(f.var, pin_ranges(f.body, inner))
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, tuple(pin_ranges(c, domains) for c in kids))


def _closed_term(t: Term) -> bool:
    return not any(True for _ in term_vars(t))


def fold_term(t: Term) -> Term:
    if isinstance(t, Arith):
        left, right = fold_term(t.left), fold_term(t.right)
        node = Arith(t.op, left, right, t.bounds)
        if isinstance(left, Const) and isinstance(right, Const):
            value = compile_term(node, {})(lambda name, nxt: None)
            if value is not None:
                return Const(value)
        return node
    if isinstance(t, Ite):
        cond = fold_constants(t.cond)
        if isinstance(cond, Truth):
            return fold_term(t.then if cond.value else t.other)
        return Ite(cond, fold_term(t.then), fold_term(t.other))
    return t


def fold_constants(f: Formula) -> Formula:
    """Evaluate variable-free atoms and simplify the boolean structure."""
    if isinstance(f, Atom):
        lhs, rhs = fold_term(f.lhs), fold_term(f.rhs)
        if _closed_term(lhs) and _closed_term(rhs):
            return Truth(compile_formula(Atom(f.op, lhs, rhs), {})(lambda name, nxt: None))
        return Atom(f.op, lhs, rhs)
    if isinstance(f, Not):
        a = fold_constants(f.arg)
        return Truth(not a.value) if isinstance(a, Truth) else Not(a)
    if isinstance(f, Implies):
        a, b = fold_constants(f.left), fold_constants(f.right)
        if a == TRUE:
            return b
        if a == FALSE or b == TRUE:
            return TRUE
        return Implies(a, b)
    if isinstance(f, Iff):
        a, b = fold_constants(f.left), fold_constants(f.right)
        if isinstance(a, Truth) and isinstance(b, Truth):
            return Truth(a == b)
        return Iff(a, b)
    if isinstance(f, Next):
        a = fold_constants(f.arg)
        return a if isinstance(a, Truth) else Next(a)
    if isinstance(f, (Always, Eventually)):
        a = fold_constants(f.arg)
        return a if isinstance(a, Truth) else type(f)(a)
    if isinstance(f, Until):
        return until(fold_constants(f.left), fold_constants(f.right))
    if isinstance(f, Release):
        return release(fold_constants(f.left), fold_constants(f.right))
    if isinstance(f, Leads):
        a, b = fold_constants(f.left), fold_constants(f.right)
        if b in (TRUE, FALSE) or a == FALSE:
            return b
        if a == TRUE:
            return Always(b)
        return Leads(a, b)
    if isinstance(f, QUANTIFIERS):
        body = fold_constants(f.body)
        if isinstance(body, Truth) or f.var.name not in free_vars(body):
            return body
        return type(f)(f.var, body)
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, tuple(fold_constants(c) for c in kids))


# ---------------------------------------------------------------------------
# value quantifiers and next atoms


def eliminate_value_quantifiers(f: Formula, domains: Mapping[str, Domain] | None = None) -> Formula:
    """Replace value quantifiers by finite disjunctions/conjunctions."""
    if domains is not None:
        f = pin_ranges(f, domains)
    return fold_constants(_elim(f, {} if domains is None else dict(domains)))


def _elim(f: Formula, domains: dict) -> Formula:
    if isinstance(f, VALUE_QUANTIFIERS):
        inner = dict(domains)
        inner[f.var.name] = f.var.domain
        body = pin_ranges(_elim(f.body, inner), inner)
        name = f.var.name
        parts = [fold_constants(substitute(body, {name: Const(v)}, {name: Const(v)}))
                 for v in f.var.domain.values]
        return disj(*parts) if isinstance(f, ExistsValue) else conj(*parts)
    if isinstance(f, TRACE_QUANTIFIERS):
        inner = dict(domains)
        inner[f.var.name] = f.var.domain
        return type(f)(f.var, _elim(f.body, inner))
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, tuple(_elim(c, domains) for c in kids))


def expand_next_atoms(f: Formula, vocab: Vocabulary) -> Formula:
    """Compile away ``v'`` references.

    Each maximal temporal-free subformula ``g`` mentioning next values of
    ``v1..vk`` becomes the disjunction over value tuples ``b`` of
    ``g[v':=b] & X (v1 = b1 & ... & vk = bk)``; tuples making ``g[v':=b]``
    identically false are dropped.
    """
    domains = {v.name: v.domain for v in vocab}
    return _expand(pin_ranges(f, domains), domains)


def _expand(f: Formula, domains: dict) -> Formula:
    nexts = sorted(_free_next(f))
    if not nexts:
        return f
    if _temporal_free(f):
        return _expand_block(f, nexts, domains)
    if isinstance(f, QUANTIFIERS):
        inner = dict(domains)
        inner[f.var.name] = f.var.domain
        return type(f)(f.var, _expand(f.body, inner))
    return rebuild(f, tuple(_expand(c, domains) for c in children(f)))


def _free_next(f: Formula) -> set[str]:
    return {name for name, nxt in atom_vars(f) if nxt}


def _temporal_free(f: Formula) -> bool:
    return not any(isinstance(g, TEMPORAL) or isinstance(g, TRACE_QUANTIFIERS) for g in _nodes(f))


def _expand_block(g: Formula, names: list[str], domains: dict) -> Formula:
    for n in names:
        if n not in domains:
            raise TransformError(f"unknown variable {n!r}")
    parts = []
    for values in itertools.product(*(domains[n].values for n in names)):
        now = fold_constants(substitute(g, {}, {n: Const(v) for n, v in zip(names, values)}))
        if now == FALSE:
            continue
        later = conj(*(Atom("=", Var(n), Const(v)) for n, v in zip(names, values)))
        parts.append(conj(now, Next(later)))
    return disj(*parts)


# ---------------------------------------------------------------------------
# renaming


def fresh_name(avoid: set[str], base: str = "__b") -> str:
    """The first ``base<k>`` not in ``avoid`` (deterministic, so results are cacheable)."""
    k = 0
    while f"{base}{k}" in avoid:
        k += 1
    return f"{base}{k}"


def all_names(f: Formula) -> set[str]:
    """Every variable name occurring in ``f``, free or bound."""
    names = {name for name, _ in _raw_vars(f)}
    names |= {g.var.name for g in _nodes(f) if isinstance(g, QUANTIFIERS)}
    return names


def _raw_vars(f: Formula):
    if isinstance(f, Atom):
        yield from term_vars(f.lhs)
        yield from term_vars(f.rhs)
    for c in children(f):
        yield from _raw_vars(c)


def rename_variables(f: Formula, mapping: Mapping[str, str | Variable],
                     vocab: Vocabulary | None = None) -> Formula:
    """Capture-avoiding simultaneous renaming of free variables.

    ``mapping`` values are new names or :class:`Variable` objects; when a
    ``Variable`` or a ``vocab`` is available the domains must agree.
    """
    names: dict[str, str] = {}
    fv = free_vars(f)
    for old, new in mapping.items():
        new_name = new.name if isinstance(new, Variable) else new
        if isinstance(new, Variable) and vocab is not None and old in vocab:
            if vocab[old].domain != new.domain:
                raise TransformError(f"cannot rename {old} to {new_name}: domains differ")
        if vocab is not None and old in vocab and new_name in vocab and new_name not in mapping:
            if vocab[old].domain != vocab[new_name].domain:
                raise TransformError(f"cannot rename {old} to {new_name}: domains differ")
        if old != new_name:
            names[old] = new_name
    targets = [names.get(n, n) for n in fv]
    if len(set(targets)) != len(targets):
        clash = sorted({t for t in targets if targets.count(t) > 1})
        raise TransformError(f"renaming collides on free variable(s): {', '.join(clash)}")
    if not names:
        return f
    return _rename(f, names)


def substitute_names(f: Formula, names: Mapping[str, str]) -> Formula:
    """Capture-avoiding simultaneous replacement of free variable names.

    Unlike :func:`rename_variables` several names may be merged into one, or
    into a name that is already free in ``f``.
    """
    return _rename(f, {k: v for k, v in names.items() if k != v})


def _rename(f: Formula, names: dict[str, str]) -> Formula:
    if not names:
        return f
    if isinstance(f, QUANTIFIERS):
        inner = {k: v for k, v in names.items() if k != f.var.name}
        var, body = f.var, f.body
        if var.name in inner.values():
            avoid = all_names(body) | set(inner.values()) | set(inner)
            fresh = fresh_name(avoid)
            body = substitute(body, {var.name: Var(fresh)}, {var.name: NextVar(fresh)})
            var = var.with_name(fresh)
        return type(f)(var, _rename(body, inner))
    if isinstance(f, Atom):
        cur = {k: Var(v) for k, v in names.items()}
        nxt = {k: NextVar(v) for k, v in names.items()}
        return substitute(f, cur, nxt)
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, tuple(_rename(c, names) for c in kids))


# ---------------------------------------------------------------------------
# miniscoping of trace quantifiers (on NNF input)


def miniscope(f: Formula) -> Formula:
    """Push quantifiers inward: drop vacuous ones, distribute exists over Or and
    forall over And, and pull out conjuncts/disjuncts not mentioning the bound
    variable."""
    if isinstance(f, QUANTIFIERS):
        return _scope(type(f), f.var, miniscope(f.body))
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, tuple(miniscope(c) for c in kids))


def _scope(cls, var: Variable, body: Formula) -> Formula:
    name = var.name
    if name not in free_vars(body):
        return body
    existential = cls in (ExistsTrace, ExistsValue)
    spread, keep = (Or, And) if existential else (And, Or)
    if isinstance(body, spread):
        return rebuild(body, tuple(_scope(cls, var, a) for a in body.args))
    if isinstance(body, keep):
        inside = [a for a in body.args if name in free_vars(a)]
        outside = [a for a in body.args if name not in free_vars(a)]
        if outside:
            core = conj(*inside) if keep is And else disj(*inside)
            scoped = _scope(cls, var, core)
            return conj(*outside, scoped) if keep is And else disj(*outside, scoped)
    return cls(var, body)
