"""LTL to Büchi automata through very weak alternating automata.

The formula is brought to negation normal form and every maximal temporal-free
subformula becomes a single letter-set literal.  The alternating automaton is
turned into a transition-based generalized Büchi automaton (one acceptance
set per Until subformula) and then degeneralized with a level counter.
"""

from __future__ import annotations

from functools import lru_cache

from ..logic.syntax import (And, Formula, Next, Or, Release, TRACE_QUANTIFIERS, Truth, Until,
                            any_node, is_temporal_free)
from ..logic.transforms import eliminate_value_quantifiers, expand_next_atoms, nnf
from ..logic.vocab import Vocabulary
from . import settings
from .masks import formula_mask
from .nba import AutomatonError, Nba

# a transition of the alternating automaton: (letter mask, sorted tuple of node ids)
Move = tuple[int, tuple[int, ...]]


class _Tableau:
    def __init__(self, vocab: Vocabulary):
        self.vocab = vocab
        self.full = vocab.full_mask
        self.nodes: list[tuple] = []
        self.ids: dict[tuple, int] = {}
        self._delta: dict[int, list[Move]] = {}

    def intern(self, node: tuple) -> int:
        i = self.ids.get(node)
        if i is None:
            i = len(self.nodes)
            self.nodes.append(node)
            self.ids[node] = i
        return i

    def literal(self, mask: int) -> int:
        return self.intern(("L", mask & self.full))

    def lower(self, f: Formula) -> int:
        if isinstance(f, Truth) or is_temporal_free(f):
            return self.literal(formula_mask(f, self.vocab))
        if isinstance(f, (And, Or)):
            is_and = isinstance(f, And)
            lits = self.full if is_and else 0
            kids = []
            for a in f.args:
                k = self.lower(a)
                node = self.nodes[k]
                if node[0] == "L":
                    lits = (lits & node[1]) if is_and else (lits | node[1])
                else:
                    kids.append(k)
            if is_and and lits == 0:
                return self.literal(0)
            if not is_and and lits == self.full:
                return self.literal(self.full)
            if lits != (self.full if is_and else 0) or not kids:
                kids.append(self.literal(lits))
            kids = sorted(set(kids))
            if len(kids) == 1:
                return kids[0]
            return self.intern(("&" if is_and else "|", tuple(kids)))
        if isinstance(f, Next):
            return self.intern(("X", self.lower(f.arg)))
        if isinstance(f, Until):
            return self.intern(("U", self.lower(f.left), self.lower(f.right)))
        if isinstance(f, Release):
            return self.intern(("R", self.lower(f.left), self.lower(f.right)))
        raise AutomatonError(f"unexpected node in negation normal form: {f!r}")

    # -- alternating transitions --------------------------------------------

    @staticmethod
    def times(a: list[Move], b: list[Move]) -> list[Move]:
        out = []
        for m1, e1 in a:
            for m2, e2 in b:
                m = m1 & m2
                if m:
                    out.append((m, tuple(sorted(set(e1) | set(e2)))))
        return out

    @staticmethod
    def simplify(moves: list[Move]) -> list[Move]:
        by_target: dict[tuple[int, ...], int] = {}
        for m, e in moves:
            by_target[e] = by_target.get(e, 0) | m
        items = sorted(by_target.items(), key=lambda kv: (len(kv[0]), kv[0]))
        kept: list[Move] = []
        for e, m in items:
            es = set(e)
            if any((m & ~m2) == 0 and set(e2) <= es for m2, e2 in kept):
                continue
            kept.append((m, e))
        return sorted(kept, key=lambda me: (me[1], me[0]))

    def bar(self, i: int) -> list[tuple[int, ...]]:
        """The alternating-automaton state sets equivalent to node ``i``."""
        node = self.nodes[i]
        kind = node[0]
        if kind == "L":
            if node[1] == self.full:
                return [()]
            if node[1] == 0:
                return []
            return [(i,)]
        if kind == "&":
            out = [()]
            for k in node[1]:
                out = [tuple(sorted(set(a) | set(b))) for a in out for b in self.bar(k)]
            return sorted(set(out))
        if kind == "|":
            return sorted({e for k in node[1] for e in self.bar(k)})
        return [(i,)]

    def delta(self, i: int) -> list[Move]:
        got = self._delta.get(i)
        if got is not None:
            return got
        node = self.nodes[i]
        kind = node[0]
        full = self.full
        if kind == "L":
            out = [(node[1], ())] if node[1] else []
        elif kind == "&":
            out = [(full, ())]
            for k in node[1]:
                out = self.times(out, self.delta(k))
        elif kind == "|":
            out = [mv for k in node[1] for mv in self.delta(k)]
        elif kind == "X":
            out = [(full, e) for e in self.bar(node[1])]
        elif kind == "U":
            a, b = node[1], node[2]
            out = self.delta(b) + self.times(self.delta(a), [(full, (i,))])
        else:  # R
            a, b = node[1], node[2]
            out = self.times(self.delta(a), self.delta(b)) + self.times(self.delta(b), [(full, (i,))])
        out = self.simplify(out)
        self._delta[i] = out
        return out


def _to_core(f: Formula, vocab: Vocabulary) -> Formula:
    if any_node(f, lambda g: isinstance(g, TRACE_QUANTIFIERS)):
        raise AutomatonError("ltl_to_nba needs a formula without trace quantifiers")
    domains = {v.name: v.domain for v in vocab}
    f = eliminate_value_quantifiers(f, domains)
    f = expand_next_atoms(f, vocab)
    return nnf(f)


def ltl_to_nba(f: Formula, vocab: Vocabulary) -> Nba:
    """Büchi automaton accepting exactly the traces over ``vocab`` satisfying ``f``."""
    s = settings.current()
    nba = _ltl_to_nba(f, vocab, s.max_states)
    if s.cross_check:
        _cross_check(f, nba)
    return nba


class CrossCheckError(AutomatonError):
    pass


_checked: set = set()


def _cross_check(f: Formula, nba: Nba, samples: int = 64) -> None:
    """Compare the automaton with the reference evaluator on sampled lassos."""
    key = (f, nba.vocab)
    if key in _checked:
        return
    import random

    from ..oracle import eval_formula
    from .nba import Lasso, accepts_lasso
    rng = random.Random(0)
    n = nba.vocab.num_letters
    for _ in range(samples):
        stem = [rng.randrange(n) for _ in range(rng.randrange(3))]
        loop = [rng.randrange(n) for _ in range(1 + rng.randrange(3))]
        w = Lasso.from_indices(nba.vocab, stem, loop)
        if accepts_lasso(nba, w) != eval_formula(f, w):
            raise CrossCheckError(f"automaton for {f} disagrees with the reference evaluator on {w}")
    _checked.add(key)


@lru_cache(maxsize=4096)
def _ltl_to_nba(f: Formula, vocab: Vocabulary, max_states: int) -> Nba:
    core = _to_core(f, vocab)
    tab = _Tableau(vocab)
    top = tab.lower(core)
    starts = tab.bar(top)
    if not starts:
        return Nba.empty(vocab).with_origin(f)

    # generalized automaton over sets of alternating states
    index: dict[tuple[int, ...], int] = {}
    order: list[tuple[int, ...]] = []
    for e in starts:
        if e not in index:
            index[e] = len(order)
            order.append(e)
    untils = [i for i, node in enumerate(tab.nodes) if node[0] == "U"]
    gba_edges: list[list[tuple[int, int, tuple[int, ...]]]] = []
    k = 0
    while k < len(order):
        e = order[k]
        k += 1
        settings.check_states(len(order), "generalized automaton")
        moves = [(tab.full, ())]
        for psi in e:
            moves = tab.times(moves, tab.delta(psi))
        # merge moves with equal targets; dominance must respect acceptance here
        merged: dict[tuple[int, ...], int] = {}
        for m, target in moves:
            merged[target] = merged.get(target, 0) | m
        moves = sorted(((m, t) for t, m in merged.items()), key=lambda mt: (mt[1], mt[0]))
        labelled = []
        for m, target in moves:
            tset = set(target)
            acc = []
            for psi in untils:
                if psi not in tset:
                    acc.append(m)
                    continue
                ok = 0
                for beta, e2 in tab.delta(psi):
                    if psi not in e2 and set(e2) <= tset:
                        ok |= beta
                acc.append(m & ok)
            labelled.append((m, target, acc))
        # drop transitions dominated by a more permissive one
        kept = []
        for j, (m, target, acc) in enumerate(labelled):
            tset = set(target)
            dominated = False
            for j2, (m2, t2, acc2) in enumerate(labelled):
                if j2 == j or (m & ~m2) or not set(t2) <= tset:
                    continue
                if any(a & ~a2 for a, a2 in zip(acc, acc2)):
                    continue
                dominated = True
                break
            if not dominated:
                kept.append((m, target, acc))
        row = []
        for m, target, acc in kept:
            if target not in index:
                index[target] = len(order)
                order.append(target)
            pieces = [(m, ())]
            for n, a in enumerate(acc):
                nxt = []
                for piece, sig in pieces:
                    inside, outside = piece & a, piece & ~a
                    if inside:
                        nxt.append((inside, sig + (n,)))
                    if outside:
                        nxt.append((outside, sig))
                pieces = nxt
            for piece, sig in pieces:
                row.append((piece, index[target], sig))
        gba_edges.append(row)

    # keep only acceptance sets of Until nodes that occur in some state
    present = {psi for e in order for psi in e}
    relevant = [n for n, psi in enumerate(untils) if psi in present]
    levels = len(relevant)
    if levels == 0:
        edges = [(q, m, d) for q, row in enumerate(gba_edges) for m, d, _ in row]
        nba = Nba.build(vocab, len(order), (index[e] for e in starts), range(len(order)), edges, f)
        return _finish(nba)

    states: dict[tuple[int, int], int] = {}
    queue: list[tuple[int, int]] = []

    def sid(q: int, lvl: int) -> int:
        key = (q, lvl)
        s = states.get(key)
        if s is None:
            s = len(queue)
            states[key] = s
            queue.append(key)
            settings.check_states(len(queue), "degeneralized automaton")
        return s

    initial = [sid(index[e], 0) for e in starts]
    edges = []
    pos = 0
    while pos < len(queue):
        q, lvl = queue[pos]
        src = pos
        pos += 1
        base = 0 if lvl == levels else lvl
        for m, d, sig in gba_edges[q]:
            sigset = set(sig)
            nl = base
            while nl < levels and relevant[nl] in sigset:
                nl += 1
            edges.append((src, m, sid(d, nl)))
    accepting = [s for (q, lvl), s in states.items() if lvl == levels]
    nba = Nba.build(vocab, len(queue), initial, accepting, edges, f)
    return _finish(nba)


def _finish(nba: Nba) -> Nba:
    from .ops import reduce_bisim
    return reduce_bisim(nba.trim())
