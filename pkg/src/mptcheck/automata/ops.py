"""Boolean operations, projection and language-preserving reductions."""

from __future__ import annotations

from array import array

from .. import kernels
from ..logic.vocab import Vocabulary, VocabularyError
from . import settings
from .masks import cylindrify, project_mask
from .nba import AutomatonError, Nba, same_vocab


def intersect(a: Nba, b: Nba) -> Nba:
    """Product automaton for ``L(a) & L(b)`` (two-phase Büchi product)."""
    same_vocab(a, b)
    if a.is_trivially_empty() or b.is_trivially_empty():
        return Nba.empty(a.vocab)
    if a.is_universal_shape():
        return b
    if b.is_universal_shape():
        return a
    all_a = len(a.accepting) == a.num_states
    all_b = len(b.accepting) == b.num_states
    phased = not (all_a or all_b)

    states: dict[tuple[int, int, int], int] = {}
    queue: list[tuple[int, int, int]] = []

    def sid(key):
        s = states.get(key)
        if s is None:
            s = len(queue)
            states[key] = s
            queue.append(key)
            settings.check_states(len(queue), "intersection")
        return s

    initial = [sid((p, q, 0)) for p in a.initial for q in b.initial]
    edges = []
    pos = 0
    acc_a, acc_b = a.accepting, b.accepting
    while pos < len(queue):
        p, q, phase = queue[pos]
        src = pos
        pos += 1
        if phased:
            if phase == 0:
                nphase = 1 if p in acc_a else 0
            else:
                nphase = 0 if q in acc_b else 1
        else:
            nphase = 0
        for g1, p2 in a.edges[p]:
            for g2, q2 in b.edges[q]:
                g = g1 & g2
                if g:
                    edges.append((src, g, sid((p2, q2, nphase))))
    if phased:
        accepting = [s for (p, q, ph), s in states.items() if ph == 0 and p in acc_a]
    elif all_a:
        accepting = [s for (p, q, _), s in states.items() if q in acc_b]
    else:
        accepting = [s for (p, q, _), s in states.items() if p in acc_a]
    return reduce_bisim(Nba.build(a.vocab, len(queue), initial, accepting, edges).trim())


def union(a: Nba, b: Nba) -> Nba:
    """Disjoint union: ``L(a) | L(b)``."""
    same_vocab(a, b)
    if a.is_trivially_empty():
        return b
    if b.is_trivially_empty():
        return a
    if a.is_universal_shape():
        return a
    if b.is_universal_shape():
        return b
    n = a.num_states
    settings.check_states(n + b.num_states, "union")
    edges = [(q, g, d) for q in range(n) for g, d in a.edges[q]]
    edges += [(q + n, g, d + n) for q in range(b.num_states) for g, d in b.edges[q]]
    initial = list(a.initial) + [q + n for q in b.initial]
    accepting = list(a.accepting) + [q + n for q in b.accepting]
    return reduce_bisim(Nba.build(a.vocab, n + b.num_states, initial, accepting, edges))


def project(a: Nba, *names: str) -> Nba:
    """Existentially quantify the traces of ``names`` away (alphabet projection)."""
    for name in names:
        if name not in a.vocab:
            raise AutomatonError(f"cannot project unknown variable {name!r}")
    if not names:
        return a
    sub = a.vocab.without(*names)
    edges = [(q, project_mask(g, a.vocab, sub), d) for q in range(a.num_states) for g, d in a.edges[q]]
    out = Nba.build(sub, a.num_states, a.initial, a.accepting, edges)
    return reduce_bisim(out)


def extend(a: Nba, vocab: Vocabulary) -> Nba:
    """View ``a`` over a larger vocabulary (the new variables are unconstrained)."""
    for v in a.vocab:
        w = vocab.get(v.name)
        if w is None or w.domain != v.domain:
            raise VocabularyError(f"variable {v.name} missing or retyped in target vocabulary")
    if vocab == a.vocab:
        return a
    sub = vocab.restrict(a.vocab.names)
    if sub.names != a.vocab.names:
        a = reorder(a, sub)
    edges = [(q, cylindrify(g, sub, vocab), d) for q in range(a.num_states) for g, d in a.edges[q]]
    return Nba.build(vocab, a.num_states, a.initial, a.accepting, edges)


def reorder(a: Nba, vocab: Vocabulary) -> Nba:
    """The same automaton over a permutation of its vocabulary."""
    if set(vocab.names) != set(a.vocab.names) or len(vocab) != len(a.vocab):
        raise VocabularyError("reorder needs the same variables")
    if vocab == a.vocab:
        return a
    # letter i of `vocab` corresponds to letter perm[i] of a.vocab
    from ..logic.vocab import project_letter_index
    perm = project_letter_index(vocab, a.vocab)
    edges = []
    for q in range(a.num_states):
        for g, d in a.edges[q]:
            m = 0
            for i, j in enumerate(perm):
                if (g >> j) & 1:
                    m |= 1 << i
            edges.append((q, m, d))
    return Nba.build(vocab, a.num_states, a.initial, a.accepting, edges, a.origin)


def rename(a: Nba, vocab: Vocabulary) -> Nba:
    """Rename variables positionally (domains must agree)."""
    if [v.domain for v in vocab] != [v.domain for v in a.vocab]:
        raise VocabularyError("positional rename needs identical domains")
    return Nba(vocab, a.num_states, a.initial, a.accepting, a.edges)


# ---------------------------------------------------------------------------
# reductions


def reduce_bisim(a: Nba) -> Nba:
    """Quotient by the coarsest bisimulation that respects acceptance."""
    n = a.num_states
    if n <= 1:
        return a
    block = [1 if q in a.accepting else 0 for q in range(n)]
    count = len(set(block))
    while True:
        sigs: dict[tuple, int] = {}
        new = []
        for q in range(n):
            moves: dict[int, int] = {}
            for g, d in a.edges[q]:
                moves[block[d]] = moves.get(block[d], 0) | g
            key = (block[q], tuple(sorted(moves.items())))
            if key not in sigs:
                sigs[key] = len(sigs)
            new.append(sigs[key])
        block = new
        if len(sigs) == count:
            break
        count = len(sigs)
    if count == n:
        return a
    return _quotient(a, block, count)


def _quotient(a: Nba, block: list[int], count: int) -> Nba:
    # number blocks by their least member so the result is canonical
    first: dict[int, int] = {}
    for q in range(a.num_states):
        first.setdefault(block[q], q)
    rank = {b: i for i, b in enumerate(sorted(first, key=first.get))}
    edges = [(rank[block[q]], g, rank[block[d]]) for q in range(a.num_states) for g, d in a.edges[q]]
    return Nba.build(a.vocab, count, (rank[block[q]] for q in a.initial),
                     (rank[block[q]] for q in a.accepting), edges, a.origin)


def class_successors(a: Nba, classes: list[int]) -> list[list[tuple[int, ...]]]:
    """``succ[q][c]``: sorted successors of ``q`` on letter class ``c``."""
    out = []
    for q in range(a.num_states):
        row = []
        for c in classes:
            row.append(tuple(d for g, d in a.edges[q] if g & c))
        out.append(row)
    return out


def reduce_simulation(a: Nba) -> Nba:
    """Prune little brothers and merge simulation-equivalent states (direct simulation)."""
    a = a.trim()
    n = a.num_states
    if n <= 1 or n > 400:
        return a
    classes = a.letter_classes()
    nc = len(classes)
    succ = class_successors(a, classes)
    offsets = array("i", [0])
    targets = array("i")
    for q in range(n):
        for c in range(nc):
            targets.extend(succ[q][c])
            offsets.append(len(targets))
    sim = kernels.direct_simulation(n, a.accepting_flags(), nc, offsets, targets)

    def le(q, p):
        return sim[q * n + p] == 1

    # merge mutually simulating states
    rep = list(range(n))
    for q in range(n):
        for p in range(q):
            if rep[p] == p and le(q, p) and le(p, q):
                rep[q] = p
                break
    # drop edges to a target simulated by another target on the same letters
    edges = []
    for q in range(n):
        if rep[q] != q:
            continue
        for ci, c in enumerate(classes):
            ts = sorted({rep[d] for d in succ[q][ci]})
            keep = [t for t in ts if not any(u != t and le(t, u) and not le(u, t) for u in ts)]
            for t in keep:
                edges.append((q, c, t))
    inits = sorted({rep[q] for q in a.initial})
    inits = [q for q in inits if not any(p != q and le(q, p) and not le(p, q) for p in inits)]
    accepting = [q for q in range(n) if rep[q] == q and q in a.accepting]
    out = Nba.build(a.vocab, n, inits, accepting, edges, a.origin).trim()
    return reduce_bisim(out)
