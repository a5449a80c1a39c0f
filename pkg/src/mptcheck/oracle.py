"""Brute-force reference semantics, independent of the automata pipeline.

* :func:`eval_formula` decides LTL (with value quantifiers) on a lasso exactly.
* :func:`eval_quantified` handles trace quantifiers by enumerating witness
  traces of bounded shape; it is incomplete by design and only used for
  cross-checks.
* :func:`enumerate_lassos` lists all lassos up to given stem/loop lengths.
* :func:`explore_sts` searches the configurations of a transition system
  driven by an input lasso for an illegal step.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .automata.nba import Lasso
from .logic.semantics import compile_formula
from .logic.syntax import (Always, And, Eventually, ExistsTrace, ForallTrace, Formula, Iff,
                           Implies, Leads, Next, Not, Or, Release, TEMPORAL, TRACE_QUANTIFIERS,
                           Truth, Until, any_node, children, is_temporal_free)
from .logic.vocab import Vocabulary


class OracleError(ValueError):
    pass


def _positions(w: Lasso) -> tuple[int, list[int]]:
    k = len(w.stem) + len(w.loop)
    succ = [i + 1 for i in range(k)]
    succ[-1] = len(w.stem)
    return k, succ


def eval_formula(f: Formula, w: Lasso) -> bool:
    """Truth of ``f`` at position 0 of ``stem . loop^omega``."""
    return _table(f, w)[0]


def _table(f: Formula, w: Lasso) -> list[bool]:
    k, succ = _positions(w)
    domains = {v.name: v.domain for v in w.vocab}
    letters = [w.vocab.assignment(w.letter_at(i)) for i in range(k)]
    cache: dict[Formula, list[bool]] = {}

    def state(g: Formula) -> list[bool]:
        pred = compile_formula(g, domains)
        out = []
        for i in range(k):
            cur, nxt = letters[i], letters[succ[i]]

            def env(name, is_next, cur=cur, nxt=nxt):
                src = nxt if is_next else cur
                if name not in src:
                    raise OracleError(f"variable {name!r} is not in the lasso vocabulary")
                return src[name]
            out.append(bool(pred(env)))
        return out

    def until(a: list[bool], b: list[bool]) -> list[bool]:
        res = [False] * k
        for _ in range(k + 1):
            new = [b[i] or (a[i] and res[succ[i]]) for i in range(k)]
            if new == res:
                break
            res = new
        return res

    def release(a: list[bool], b: list[bool]) -> list[bool]:
        res = [True] * k
        for _ in range(k + 1):
            new = [b[i] and (a[i] or res[succ[i]]) for i in range(k)]
            if new == res:
                break
            res = new
        return res

    def ev(g: Formula) -> list[bool]:
        got = cache.get(g)
        if got is not None:
            return got
        if isinstance(g, Truth):
            out = [g.value] * k
        elif isinstance(g, TRACE_QUANTIFIERS):
            raise OracleError("trace quantifiers need eval_quantified")
        elif is_temporal_free(g):
            out = state(g)
        elif isinstance(g, Not):
            out = [not v for v in ev(g.arg)]
        elif isinstance(g, And):
            parts = [ev(a) for a in g.args]
            out = [all(p[i] for p in parts) for i in range(k)]
        elif isinstance(g, Or):
            parts = [ev(a) for a in g.args]
            out = [any(p[i] for p in parts) for i in range(k)]
        elif isinstance(g, Implies):
            a, b = ev(g.left), ev(g.right)
            out = [(not x) or y for x, y in zip(a, b)]
        elif isinstance(g, Iff):
            a, b = ev(g.left), ev(g.right)
            out = [x == y for x, y in zip(a, b)]
        elif isinstance(g, Next):
            a = ev(g.arg)
            out = [a[succ[i]] for i in range(k)]
        elif isinstance(g, Always):
            out = release([False] * k, ev(g.arg))
        elif isinstance(g, Eventually):
            out = until([True] * k, ev(g.arg))
        elif isinstance(g, Until):
            out = until(ev(g.left), ev(g.right))
        elif isinstance(g, Release):
            out = release(ev(g.left), ev(g.right))
        elif isinstance(g, Leads):
            # p L q holds iff not (p U not q)
            u = until(ev(g.left), [not v for v in ev(g.right)])
            out = [not v for v in u]
        else:
            raise OracleError(f"cannot evaluate {g!r}")
        cache[g] = out
        return out

    return ev(f)


def _unroll(w: Lasso, times: int) -> Lasso:
    return Lasso(w.vocab, w.stem, w.loop * times)


def _extend(w: Lasso, var, values: tuple) -> Lasso:
    vocab = w.vocab.extend(var)
    ns = len(w.stem)
    stem = tuple(a + (values[i],) for i, a in enumerate(w.stem))
    loop = tuple(a + (values[ns + i],) for i, a in enumerate(w.loop))
    return Lasso(vocab, stem, loop)


def eval_quantified(f: Formula, w: Lasso, shape_bound: int = 1) -> bool:
    """Evaluate ``f`` allowing trace quantifiers at the boolean top level.

    Quantified traces range over lassos with ``w``'s stem length and a loop
    of length ``shape_bound * len(w.loop)`` (hence every divisor of it).
    Incomplete in general: a witness trace of a larger period is missed.
    """
    if shape_bound < 1:
        raise OracleError("shape_bound must be positive")
    if not any_node(f, lambda g: isinstance(g, TRACE_QUANTIFIERS)):
        return eval_formula(f, w)
    if isinstance(f, (ExistsTrace, ForallTrace)):
        if f.var.name in w.vocab:
            raise OracleError(f"quantified variable {f.var.name} shadows a lasso variable")
        base = _unroll(w, shape_bound)
        positions = len(base.stem) + len(base.loop)
        pick = any if isinstance(f, ExistsTrace) else all
        return pick(eval_quantified(f.body, _extend(base, f.var, values), 1)
                    for values in itertools.product(f.var.domain.values, repeat=positions))
    if isinstance(f, Not):
        return not eval_quantified(f.arg, w, shape_bound)
    if isinstance(f, And):
        return all(eval_quantified(a, w, shape_bound) for a in f.args)
    if isinstance(f, Or):
        return any(eval_quantified(a, w, shape_bound) for a in f.args)
    if isinstance(f, Implies):
        return (not eval_quantified(f.left, w, shape_bound)) or eval_quantified(f.right, w, shape_bound)
    if isinstance(f, Iff):
        return eval_quantified(f.left, w, shape_bound) == eval_quantified(f.right, w, shape_bound)
    if isinstance(f, TEMPORAL):
        raise OracleError("eval_quantified supports trace quantifiers only outside temporal operators")
    raise OracleError(f"cannot evaluate {f!r}")


def enumerate_lassos(vocab: Vocabulary, max_stem: int, max_loop: int) -> Iterator[Lasso]:
    """All lassos with ``len(stem) <= max_stem`` and ``1 <= len(loop) <= max_loop``.

    Order: stem length, then loop length, then letters lexicographically (in
    canonical letter order).  Lassos are distinct as (stem, loop) pairs.
    """
    if max_stem < 0 or max_loop < 1:
        raise OracleError("need max_stem >= 0 and max_loop >= 1")
    letters = vocab.letter_list
    for ns in range(max_stem + 1):
        for nl in range(1, max_loop + 1):
            for word in itertools.product(letters, repeat=ns + nl):
                yield Lasso(vocab, word[:ns], word[ns:])


# ---------------------------------------------------------------------------
# explicit exploration of transition systems


@dataclass(frozen=True)
class ExploreResult:
    verdict: str  # "legal" | "illegal" | "diverged"
    step: int | None = None

    @property
    def illegal(self) -> bool:
        return self.verdict == "illegal"


def explore_sts(s, w: Lasso, depth: int) -> ExploreResult:
    """Breadth-first search over (state, input position) configurations.

    A configuration at step ``k`` is illegal when some next state violates
    the precondition ``p`` for the current state and input.  ``legal`` is only
    reported once the reachable configuration space is exhausted.
    """
    if depth < 1:
        raise OracleError("depth must be positive")
    state_vocab, in_vocab, out_vocab = s.state_vocab, s.in_vocab, s.out_vocab
    if w.vocab.names != in_vocab.names:
        w = w.restrict(in_vocab)
    k, succ = _positions(w)
    domains = {v.name: v.domain for v in itertools.chain(state_vocab, in_vocab, out_vocab)}
    init = compile_formula(s.init, domains)
    pre = compile_formula(s.p, domains)
    rel = compile_formula(s.r, domains)
    states = [dict(zip(state_vocab.names, u)) for u in state_vocab.letter_list]
    outputs = [dict(zip(out_vocab.names, y)) for y in out_vocab.letter_list]
    inputs = [dict(zip(in_vocab.names, w.letter_at(i))) for i in range(k)]

    def env(cur, nxt):
        return lambda name, is_next: (nxt if is_next else cur)[name]

    frontier = []
    seen = set()
    for i, u in enumerate(states):
        if init(env(u, u)):
            frontier.append((i, 0))
            seen.add((i, 0))
    step = 0
    while frontier:
        nxt_frontier = []
        for ui, pos in frontier:
            cur = {**states[ui], **inputs[pos]}
            for u2 in states:
                if not pre(env(cur, u2)):
                    return ExploreResult("illegal", step)
        if step >= depth:
            return ExploreResult("diverged")
        for ui, pos in frontier:
            cur = {**states[ui], **inputs[pos]}
            for vi, u2 in enumerate(states):
                if any(rel(env({**cur, **y}, u2)) for y in outputs):
                    key = (vi, succ[pos])
                    if key not in seen:
                        seen.add(key)
                        nxt_frontier.append(key)
        frontier = nxt_frontier
        step += 1
    return ExploreResult("legal")


eval = eval_formula  # noqa: A001  (the module-level name used by callers)
