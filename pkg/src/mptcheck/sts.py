"""Symbolic transition systems ``(init, p, r)``.

``init`` constrains the initial state, ``p`` is a local precondition over the
current state, the next state (written ``u'``) and the input, and ``r`` relates
state, next state, input and output at one step.  :func:`globalize` turns a
system into an equivalent :class:`~mptcheck.transformers.Contract`; the other
operations build the closed forms for compositions of local, guarded,
stateless and guarded stateless systems.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .automata import Nba, find_lasso, qptl_to_nba
from .logic.semantics import compile_formula
from .logic.syntax import (TRUE, Always, Formula, Leads, NextVar, RESERVED_PREFIX, Var, conj,
                           exists_trace, exists_value, forall_trace, forall_value, free_vars,
                           implies, is_temporal_free, neg, next_vars, substitute)
from .logic.transforms import all_names, fresh_name, substitute_names
from .logic.vocab import Variable, Vocabulary
from .transformers import Contract, Verdict, align, make_guarded

__all__ = [
    "GuardedSts", "Sts", "StsError", "StsWarning", "compose_guarded", "compose_guarded_stateless",
    "compose_local", "compose_stateless", "globalize", "guarded_repr", "guarded_stateless",
    "illegal", "in_relation", "naive_compose", "proj_at", "refines_sts", "stateless_repr",
]


class StsError(ValueError):
    pass


class StsWarning(UserWarning):
    pass


def _roled(vocab: Vocabulary, role: str) -> Vocabulary:
    return Vocabulary(tuple(v.with_role(role) for v in vocab))


@dataclass(frozen=True)
class Sts:
    state_vocab: Vocabulary
    in_vocab: Vocabulary
    out_vocab: Vocabulary
    init: Formula
    p: Formula
    r: Formula

    def __post_init__(self):
        object.__setattr__(self, "state_vocab", _roled(self.state_vocab, "state"))
        object.__setattr__(self, "in_vocab", _roled(self.in_vocab, "input"))
        object.__setattr__(self, "out_vocab", _roled(self.out_vocab, "output"))
        _check(self.state_vocab, self.in_vocab, self.out_vocab, self.init, self.p, self.r)

    @property
    def vocab(self) -> Vocabulary:
        return self.state_vocab.extend(*self.in_vocab, *self.out_vocab)

    @property
    def is_stateless(self) -> bool:
        return len(self.state_vocab) == 0


@dataclass(frozen=True)
class GuardedSts:
    """A system whose local precondition is ``in.r``."""

    state_vocab: Vocabulary
    in_vocab: Vocabulary
    out_vocab: Vocabulary
    init: Formula
    r: Formula

    def __post_init__(self):
        object.__setattr__(self, "state_vocab", _roled(self.state_vocab, "state"))
        object.__setattr__(self, "in_vocab", _roled(self.in_vocab, "input"))
        object.__setattr__(self, "out_vocab", _roled(self.out_vocab, "output"))
        _check(self.state_vocab, self.in_vocab, self.out_vocab, self.init, TRUE, self.r)

    def as_sts(self) -> Sts:
        return Sts(self.state_vocab, self.in_vocab, self.out_vocab, self.init,
                   in_relation(self.r, self.out_vocab), self.r)


def _check(states: Vocabulary, ins: Vocabulary, outs: Vocabulary, init: Formula, p: Formula,
           r: Formula) -> None:
    names = list(states.names) + list(ins.names) + list(outs.names)
    if len(set(names)) != len(names):
        dup = sorted({n for n in names if names.count(n) > 1})
        raise StsError(f"state, input and output names must be distinct: {', '.join(dup)}")
    s, i, o = set(states.names), set(ins.names), set(outs.names)
    for what, f, allowed in (("init", init, s), ("p", p, s | i), ("r", r, s | i | o)):
        if not is_temporal_free(f):
            raise StsError(f"{what} must not use temporal operators or trace quantifiers")
        extra = free_vars(f) - allowed
        if extra:
            raise StsError(f"{what} mentions variables it may not use: {sorted(extra)}")
        bad = next_vars(f) - s
        if bad:
            raise StsError(f"{what} refers to next values of non-state variables: {sorted(bad)}")
    if next_vars(init):
        raise StsError("init must not refer to next values")


def in_relation(r: Formula, outs: Vocabulary) -> Formula:
    """``in.r``: some output makes the step relation hold (next state left free)."""
    return exists_value(outs, r)


def _warn_if_no_initial_state(init: Formula, states: Vocabulary) -> None:
    domains = {v.name: v.domain for v in states}
    pred = compile_formula(init, domains)
    for letter in states.letter_list:
        cur = dict(zip(states.names, letter))
        if pred(lambda name, is_next, cur=cur: cur[name]):
            return
    warnings.warn("init has no satisfying state: every input is legal and no output is "
                  "possible (the system is miraculous)", StsWarning, stacklevel=3)


# ---------------------------------------------------------------------------
# globalization


def global_pre(s: Sts) -> Formula:
    """``forall u: init.u0 -> (in.r L p)``."""
    return forall_trace(s.state_vocab, implies(s.init, Leads(in_relation(s.r, s.out_vocab), s.p)))


def global_rel(s: Sts) -> Formula:
    """``exists u: init.u0 & G r``."""
    return exists_trace(s.state_vocab, conj(s.init, Always(s.r)))


def globalize(s: Sts | GuardedSts) -> Contract:
    """The relational contract of a transition system."""
    if isinstance(s, GuardedSts):
        s = s.as_sts()
    _warn_if_no_initial_state(s.init, s.state_vocab)
    return Contract(s.in_vocab, s.out_vocab, global_pre(s), global_rel(s))


def illegal(s: Sts | GuardedSts) -> Nba:
    """Automaton of the illegal inputs, built directly from the step predicates.

    It guesses a state sequence that starts in ``init`` and follows steps
    allowed by ``in.r``; it accepts once a step violating ``p`` is possible.
    """
    if isinstance(s, GuardedSts):
        s = s.as_sts()
    states, ins, outs = s.state_vocab, s.in_vocab, s.out_vocab
    domains = {v.name: v.domain for v in s.vocab}
    init = compile_formula(s.init, domains)
    pre = compile_formula(s.p, domains)
    rel = compile_formula(s.r, domains)
    ustates = [dict(zip(states.names, u)) for u in states.letter_list]
    inputs = [dict(zip(ins.names, a)) for a in ins.letter_list]
    outputs = [dict(zip(outs.names, y)) for y in outs.letter_list]

    def env(cur, nxt):
        return lambda name, is_next: (nxt if is_next else cur)[name]

    n = len(ustates)
    sink = n
    edges = []
    for ui, u in enumerate(ustates):
        bad = 0
        moves = [0] * n
        for ai, a in enumerate(inputs):
            cur = {**u, **a}
            bit = 1 << ai
            for vi, v in enumerate(ustates):
                if not pre(env(cur, v)):
                    bad |= bit
                if any(rel(env({**cur, **y}, v)) for y in outputs):
                    moves[vi] |= bit
        for vi, m in enumerate(moves):
            if m:
                edges.append((ui, m, vi))
        if bad:
            edges.append((ui, bad, sink))
    edges.append((sink, ins.full_mask, sink))
    initial = [ui for ui, u in enumerate(ustates) if init(env(u, u))]
    return Nba.build(ins, n + 1, initial, [sink], edges).trim()


# ---------------------------------------------------------------------------
# composition helpers


def _pair(left: Vocabulary, right: Vocabulary) -> list[tuple[str, str]]:
    if sorted(left.names) == sorted(right.names):
        pairs = [(n, n) for n in right.names]
    elif len(left) == len(right):
        pairs = list(zip(left.names, right.names))
    else:
        raise StsError(f"cannot compose: outputs {left} do not match inputs {right}")
    for a, b in pairs:
        if left[a].domain != right[b].domain:
            raise StsError(f"cannot compose: {a} and {b} have different domains")
    return pairs


@dataclass(frozen=True)
class _Chain:
    """Two systems prepared for composition: the second one's states are
    renamed apart and both refer to the interface through reserved names."""

    states: Vocabulary
    middle: Vocabulary
    init1: Formula
    init2: Formula
    p1: Formula
    r1: Formula
    p2: Formula
    r2: Formula
    ins: Vocabulary
    outs: Vocabulary
    second_states: Vocabulary


def _chain(a: Sts, b: Sts) -> _Chain:
    pairs = _pair(a.out_vocab, b.in_vocab)
    if set(b.out_vocab.names) & (set(a.in_vocab.names) | set(a.state_vocab.names)):
        raise StsError("outputs of the second system clash with names of the first")
    avoid = (set(a.vocab.names) | set(b.vocab.names) | all_names(a.init) | all_names(a.p)
             | all_names(a.r) | all_names(b.init) | all_names(b.p) | all_names(b.r))
    srename: dict[str, str] = {}
    second = []
    for v in b.state_vocab:
        name = v.name
        if name in a.vocab or name in b.in_vocab or name in b.out_vocab:
            name = fresh_name(avoid, f"{RESERVED_PREFIX}v")
            avoid.add(name)
        srename[v.name] = name
        second.append(v.with_name(name))
    mid1: dict[str, str] = {}
    mid2: dict[str, str] = {}
    middle = []
    for o, i in pairs:
        m = fresh_name(avoid, f"{RESERVED_PREFIX}m")
        avoid.add(m)
        mid1[o] = m
        mid2[i] = m
        middle.append(Variable(m, a.out_vocab[o].domain, "state"))
    second_states = Vocabulary(tuple(second))
    return _Chain(
        states=a.state_vocab.extend(*second_states),
        middle=Vocabulary(tuple(middle)),
        init1=a.init,
        init2=substitute_names(b.init, srename),
        p1=a.p,
        r1=substitute_names(a.r, mid1),
        p2=substitute_names(b.p, {**srename, **mid2}),
        r2=substitute_names(b.r, {**srename, **mid2}),
        ins=a.in_vocab,
        outs=b.out_vocab,
        second_states=second_states,
    )


def _step_comp(c: _Chain) -> Formula:
    """``r oo r'``: the two steps joined on some interface value."""
    return exists_value(c.middle, conj(c.r1, c.r2))


def _as_sts(s: Sts | GuardedSts) -> Sts:
    return s.as_sts() if isinstance(s, GuardedSts) else s


# ---------------------------------------------------------------------------
# local systems


def compose_local(a: Sts | GuardedSts, b: Sts | GuardedSts) -> Contract:
    """Closed form of the sequential composition of two local systems.

    ``pre = forall u, v: init & init' -> (in.r L p) & forall y (G r -> (in.r' L p'))``
    and ``rel = exists u, v: init & init' & G (r oo r')``.
    """
    a, b = _as_sts(a), _as_sts(b)
    c = _chain(a, b)
    first = Leads(exists_value(c.middle, c.r1), c.p1)
    second = Leads(exists_value(c.outs, c.r2), c.p2)
    # the first system's states stay bound inside "G r" so the second
    # precondition is quantified over every output trace of some run
    inner = forall_trace(c.middle, implies(Always(c.r1), second))
    pre = forall_trace(c.states, implies(conj(c.init1, c.init2), conj(first, inner)))
    rel = exists_trace(c.states, conj(c.init1, c.init2, Always(_step_comp(c))))
    _warn_if_no_initial_state(conj(c.init1, c.init2), c.states)
    return Contract(c.ins, c.outs, pre, rel)


def naive_compose(a: Sts, b: Sts) -> Sts:
    """The system obtained by composing the local transitions step by step:
    ``init'' = init & init'``, ``p'' = p & forall u', y (r -> p')`` and
    ``r'' = r oo r'``.  It differs from the sequential composition in general."""
    c = _chain(a, b)
    avoid = set(c.states.names) | set(c.middle.names) | all_names(c.r1) | all_names(c.p2)
    nexts: dict[str, NextVar | Var] = {}
    bound = []
    for v in a.state_vocab:
        t = fresh_name(avoid, f"{RESERVED_PREFIX}t")
        avoid.add(t)
        nexts[v.name] = Var(t)
        bound.append(v.with_name(t))
    r1_now = substitute(c.r1, {}, nexts)
    p2 = forall_value(bound, forall_value(c.middle, implies(r1_now, c.p2)))
    return Sts(c.states, c.ins, c.outs, conj(c.init1, c.init2), conj(c.p1, p2), _step_comp(c))


# ---------------------------------------------------------------------------
# guarded local systems


def guarded_repr(g: GuardedSts) -> Contract:
    """``[x ~> u, x | init.u0] ; {u, x ~> y | G r]``."""
    from .transformers import _outputs_beside, seq
    _warn_if_no_initial_state(g.init, g.state_vocab)
    ins = g.in_vocab
    carried = Vocabulary(tuple(v.with_role("output") for v in (*g.state_vocab, *ins)))
    outs, mapping = _outputs_beside(ins, carried)
    choose = Contract(ins, outs, TRUE, conj(substitute_names(g.init, mapping),
                                           _copies(mapping, ins)))
    inner_in = Vocabulary(tuple(v.with_role("input") for v in (*g.state_vocab, *ins)))
    step = make_guarded(Always(g.r), inner_in, g.out_vocab)
    return seq(choose, step)


def _copies(mapping: dict[str, str], ins: Vocabulary) -> Formula:
    from .transformers import copy_relation
    return copy_relation([(mapping[v.name], v.name) for v in ins])


def compose_guarded(a: GuardedSts, b: GuardedSts) -> GuardedSts:
    """``init'' = init & init'`` and ``r'' = in.r & forall y (r -> in.r') & (r oo r')``."""
    c = _chain(a.as_sts(), b.as_sts())
    in_r1 = exists_value(c.middle, c.r1)
    in_r2 = exists_value(c.outs, c.r2)
    rel = conj(in_r1, forall_value(c.middle, implies(c.r1, in_r2)), _step_comp(c))
    return GuardedSts(c.states, c.ins, c.outs, conj(c.init1, c.init2), rel)


# ---------------------------------------------------------------------------
# stateless systems


def _require_stateless(s: Sts | GuardedSts) -> None:
    if len(s.state_vocab):
        raise StsError("expected a stateless system (no state variables)")
    if s.init != TRUE:
        raise StsError("a stateless system has init = true")


def stateless_repr(s: Sts) -> Contract:
    """``{in.r L p | G r}``."""
    _require_stateless(s)
    return Contract(s.in_vocab, s.out_vocab, Leads(in_relation(s.r, s.out_vocab), s.p),
                    Always(s.r))


def compose_stateless(a: Sts, b: Sts) -> Contract:
    """``{(in.r L p) & forall y (G r -> (in.r' L p')) | G (r o r')}``."""
    _require_stateless(a)
    _require_stateless(b)
    c = _chain(a, b)
    first = Leads(exists_value(c.middle, c.r1), c.p1)
    second = Leads(exists_value(c.outs, c.r2), c.p2)
    pre = conj(first, forall_trace(c.middle, implies(Always(c.r1), second)))
    return Contract(c.ins, c.outs, pre, Always(_step_comp(c)))


def guarded_stateless(g: GuardedSts) -> Contract:
    """``{G r]``."""
    _require_stateless(g)
    return make_guarded(Always(g.r), g.in_vocab, g.out_vocab)


def compose_guarded_stateless(a: GuardedSts, b: GuardedSts) -> GuardedSts:
    """The stateless guarded system with relation ``in.r & forall y (r -> in.r') & (r o r')``."""
    _require_stateless(a)
    _require_stateless(b)
    return compose_guarded(a, b)


# ---------------------------------------------------------------------------
# refinement and projections


def refines_sts(spec: Contract, impl: Sts | GuardedSts) -> Verdict:
    """``{p | r} <= impl`` checked through the two step-level implications

    ``forall u, x: init & p -> (in.r' L p')`` and
    ``forall u, x, y: init & p & G r' -> r``.
    """
    impl = _as_sts(impl)
    spec = align(spec, Contract(impl.in_vocab, impl.out_vocab, TRUE, TRUE))
    lead = Leads(in_relation(impl.r, impl.out_vocab), impl.p)
    vocab = impl.in_vocab.extend(*impl.state_vocab)
    w = find_lasso(qptl_to_nba(conj(impl.init, spec.pre, neg(lead)), vocab))
    if w is not None:
        return Verdict(False, w.restrict(impl.in_vocab),
                       "precondition: an input legal for the contract is illegal for "
                       "the system")
    vocab = impl.in_vocab.extend(*impl.out_vocab, *impl.state_vocab)
    w = find_lasso(qptl_to_nba(conj(impl.init, spec.pre, Always(impl.r), neg(spec.rel)), vocab))
    if w is not None:
        return Verdict(False, w.restrict(impl.in_vocab.extend(*impl.out_vocab)),
                       "relation: the system produces an output the contract excludes")
    return Verdict(True)


def proj_at(q: Nba, i: int) -> frozenset[tuple]:
    """Letters occurring at position ``i`` of some word accepted by ``q``."""
    if i < 0:
        raise StsError("position must be nonnegative")
    live = q.trim()
    if live.is_trivially_empty():
        return frozenset()
    frontier = set(live.initial)
    for _ in range(i):
        nxt = set()
        for s in sorted(frontier):
            for _g, d in live.edges[s]:
                nxt.add(d)
        frontier = nxt
    mask = 0
    for s in sorted(frontier):
        for g, _d in live.edges[s]:
            mask |= g
    return frozenset(live.vocab.letter(k) for k in range(live.vocab.num_letters) if mask >> k & 1)

