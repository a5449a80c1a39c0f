"""Quantified LTL to Büchi automata.

Trace quantifiers are compiled bottom-up: existential ones by projection,
universal ones as complements of projections of the negated body.  The
formula is first put in negation normal form and the quantifiers are pushed
as far inward as possible, so complementation only happens at universal
quantifiers whose bodies really depend on the bound trace.
"""

from __future__ import annotations

from functools import lru_cache

from ..logic.syntax import (And, ExistsTrace, ExistsValue, ForallValue, Formula, Not, Or,
                            TRACE_QUANTIFIERS, Var, any_node, children, conj, disj, free_vars,
                            is_temporal_free, next_vars, rebuild, substitute)
from ..logic.transforms import (all_names, eliminate_value_quantifiers, expand_next_atoms, fresh_name,
                                miniscope, nnf, rename_variables)
from ..logic.vocab import Vocabulary
from . import settings
from .complement import complement
from .ltl2nba import ltl_to_nba
from .nba import AutomatonError, Lasso, Nba, find_lasso
from .ops import intersect, project, union


class QptlError(AutomatonError):
    pass


def has_trace_quantifier(f: Formula) -> bool:
    return any_node(f, lambda g: isinstance(g, TRACE_QUANTIFIERS))


def lift_local_quantifiers(f: Formula) -> Formula:
    """Trace quantifiers whose body only looks at the current and next step
    become value quantifiers over those two values."""
    if isinstance(f, TRACE_QUANTIFIERS):
        body = lift_local_quantifiers(f.body)
        if not is_temporal_free(body):
            return type(f)(f.var, body)
        name = f.var.name
        value_cls = ExistsValue if isinstance(f, ExistsTrace) else ForallValue
        if name in next_vars(body):
            avoid = all_names(body) | {name}
            later = f.var.with_name(fresh_name(avoid, "__n"))
            body = substitute(body, {}, {name: Var(later.name)})
            body = value_cls(later, body)
        return value_cls(f.var, body)
    kids = children(f)
    if not kids:
        return f
    return rebuild(f, tuple(lift_local_quantifiers(c) for c in kids))


def prepare(f: Formula, vocab: Vocabulary) -> Formula:
    f = lift_local_quantifiers(f)
    domains = {v.name: v.domain for v in vocab}
    f = eliminate_value_quantifiers(f, domains)
    f = expand_next_atoms(f, vocab)
    return miniscope(nnf(f))


def qptl_to_nba(f: Formula, vocab: Vocabulary) -> Nba:
    """Automaton for the traces over ``vocab`` satisfying the quantified formula ``f``."""
    s = settings.current()
    return _qptl_to_nba(f, vocab, s.max_states, s.cross_check)


@lru_cache(maxsize=1024)
def _qptl_to_nba(f: Formula, vocab: Vocabulary, max_states: int, cross_check: bool) -> Nba:
    extra = free_vars(f) - set(vocab.names)
    if extra:
        raise QptlError(f"formula mentions variables outside the vocabulary: {sorted(extra)}")
    if not has_trace_quantifier(f):
        return ltl_to_nba(f, vocab)
    return _compile(prepare(f, vocab), vocab).with_origin(f)


@lru_cache(maxsize=4096)
def _compile_cached(g: Formula, vocab: Vocabulary, max_states: int, cross_check: bool) -> Nba:
    return _compile_uncached(g, vocab)


def _compile(g: Formula, vocab: Vocabulary) -> Nba:
    s = settings.current()
    return _compile_cached(g, vocab, s.max_states, s.cross_check)


def _compile_uncached(g: Formula, vocab: Vocabulary) -> Nba:
    if not has_trace_quantifier(g):
        return ltl_to_nba(g, vocab)
    if isinstance(g, (And, Or)):
        plain = [a for a in g.args if not has_trace_quantifier(a)]
        quantified = [a for a in g.args if has_trace_quantifier(a)]
        if isinstance(g, And):
            result = ltl_to_nba(conj(*plain), vocab) if plain else None
            for a in quantified:
                part = _compile(a, vocab)
                result = part if result is None else intersect(result, part)
                if result.is_trivially_empty():
                    break
        else:
            result = ltl_to_nba(disj(*plain), vocab) if plain else None
            for a in quantified:
                part = _compile(a, vocab)
                result = part if result is None else union(result, part)
                if result.is_universal_shape():
                    break
        return result
    if isinstance(g, TRACE_QUANTIFIERS):
        var, body = g.var, g.body
        if var.name in vocab:
            fresh = var.with_name(fresh_name(set(vocab.names) | all_names(body), "__t"))
            body = rename_variables(body, {var.name: fresh.name})
            var = fresh
        inner = vocab.extend(var.with_role("state"))
        if isinstance(g, ExistsTrace):
            return project(_compile(body, inner), var.name)
        negated = miniscope(nnf(Not(body)))
        return complement(project(_compile(negated, inner), var.name), "construct")
    raise QptlError("trace quantifiers under temporal operators are not supported: "
                    f"{g}")


def satisfiable(f: Formula, vocab: Vocabulary) -> Lasso | None:
    """A model of ``f`` as a lasso, or ``None`` when ``f`` is unsatisfiable."""
    return find_lasso(qptl_to_nba(f, vocab))


def valid(f: Formula, vocab: Vocabulary) -> Lasso | None:
    """``None`` when ``f`` is valid, else a counter-model."""
    return satisfiable(Not(f), vocab)


def clear_caches() -> None:
    _qptl_to_nba.cache_clear()
    _compile_cached.cache_clear()
    from .ltl2nba import _ltl_to_nba
    _ltl_to_nba.cache_clear()
